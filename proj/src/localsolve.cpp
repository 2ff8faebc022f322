#include "selmer3/localsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace selmer3 {

DiagonalCubic DiagonalCubic::make(u64 u1, u64 u2, u64 u3) {
    DiagonalCubic c{u1, u2, u3};
    validate(c);
    return c;
}

void validate(const DiagonalCubic& c) {
    for (u64 u : c.coeffs()) {
        if (u == 0) throw std::invalid_argument("DiagonalCubic: zero coefficient");
        if (!is_cubefree(u)) throw std::invalid_argument("DiagonalCubic: " + std::to_string(u) + " not cubefree");
    }
    if (std::gcd(c.u1, c.u2) != 1 || std::gcd(c.u1, c.u3) != 1 || std::gcd(c.u2, c.u3) != 1)
        throw std::invalid_argument("DiagonalCubic: coefficients not pairwise coprime: " + to_string(c));
}

std::string to_string(const DiagonalCubic& c) {
    std::ostringstream os;
    os << '(' << c.u1 << ',' << c.u2 << ',' << c.u3 << ')';
    return os.str();
}

const char* to_string(LocalRule r) {
    switch (r) {
        case LocalRule::good_reduction: return "good-reduction";
        case LocalRule::cube_ratio: return "cube-ratio";
        case LocalRule::three_unit_ratio: return "three-unit-ratio";
        case LocalRule::three_valuation_one: return "three-valuation-one";
        case LocalRule::three_valuation_two: return "three-valuation-two";
        case LocalRule::real: return "real";
    }
    return "?";
}

namespace {

int v3(u64 u) {
    int v = 0;
    while (u % 3 == 0) {
        u /= 3;
        ++v;
    }
    return v;
}

// u_i / u_j = +-1 mod 9, both coprime to 3
bool ratio_pm1_mod9(u64 ui, u64 uj) {
    u64 r = mulmod(ui % 9, invmod(uj % 9, 9), 9);
    return r == 1 || r == 8;
}

LocalVerdict unchecked_solvable_at(const std::array<u64, 3>& u, u64 p) {
    if (p != 3) {
        for (int i = 0; i < 3; ++i) {
            if (u[i] % p) continue;
            const u64 uj = u[(i + 1) % 3], uk = u[(i + 2) % 3];
            const u64 ratio = mulmod(uj % p, invmod(uk % p, p), p);
            return {p, is_cube_mod_prime(ratio, p), LocalRule::cube_ratio};
        }
        return {p, true, LocalRule::good_reduction};
    }
    for (int i = 0; i < 3; ++i) {
        const int v = v3(u[i]);
        if (v == 1) return {3, true, LocalRule::three_valuation_one};
        if (v == 2) return {3, ratio_pm1_mod9(u[(i + 1) % 3], u[(i + 2) % 3]), LocalRule::three_valuation_two};
    }
    bool any = false;
    for (int i = 0; i < 3 && !any; ++i)
        for (int j = 0; j < 3 && !any; ++j)
            if (i != j && ratio_pm1_mod9(u[i], u[j])) any = true;
    return {3, any, LocalRule::three_unit_ratio};
}

}  // namespace

LocalVerdict solvable_at(const DiagonalCubic& c, u64 p) {
    validate(c);
    if (!is_prime(p)) throw std::invalid_argument("solvable_at: " + std::to_string(p) + " is not prime");
    return unchecked_solvable_at(c.coeffs(), p);
}

LocalVerdict solvable_at_real(const DiagonalCubic&) { return {0, true, LocalRule::real}; }

std::vector<u64> bad_primes(const DiagonalCubic& c) {
    std::vector<u64> primes{3};
    for (u64 u : c.coeffs())
        for (const auto& f : factorize(u).factors) primes.push_back(f.p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

bool solvable_everywhere(const DiagonalCubic& c) {
    validate(c);
    const auto primes = bad_primes(c);
    return solvable_everywhere(c, primes);
}

bool solvable_everywhere(const DiagonalCubic& c, std::span<const u64> primes) {
    const auto u = c.coeffs();
    if (!unchecked_solvable_at(u, 3).solvable) return false;
    for (u64 p : primes) {
        if (p == 3) continue;
        if (u[0] % p && u[1] % p && u[2] % p) continue;
        if (!unchecked_solvable_at(u, p).solvable) return false;
    }
    return true;
}

// --- Hensel oracle -------------------------------------------------------------

TernaryCubic TernaryCubic::diagonal(i64 a, i64 b, i64 c) {
    TernaryCubic f;
    f.coeff[0] = a;
    f.coeff[6] = b;
    f.coeff[9] = c;
    return f;
}

namespace {

// exponents of x, y, z in each monomial
constexpr std::array<std::array<int, 3>, 10> kMonomials{{
    {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {1, 1, 1},
    {1, 0, 2}, {0, 3, 0}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3},
}};

class ResidueForm {
public:
    ResidueForm(const TernaryCubic& f, u64 modulus) : m_(modulus) {
        for (int i = 0; i < 10; ++i) c_[i] = reduce(f.coeff[i]);
    }

    u64 modulus() const { return m_; }

    u64 eval(const std::array<u64, 3>& v) const {
        u64 s = 0;
        for (int i = 0; i < 10; ++i) {
            if (c_[i] == 0) continue;
            u64 t = c_[i];
            for (int k = 0; k < 3; ++k)
                for (int e = 0; e < kMonomials[i][k]; ++e) t = mulmod(t, v[k], m_);
            s = add(s, t);
        }
        return s;
    }

    /// partial derivative with respect to variable k
    u64 partial(const std::array<u64, 3>& v, int k) const {
        u64 s = 0;
        for (int i = 0; i < 10; ++i) {
            const int ek = kMonomials[i][k];
            if (c_[i] == 0 || ek == 0) continue;
            u64 t = mulmod(c_[i], static_cast<u64>(ek) % m_, m_);
            for (int j = 0; j < 3; ++j) {
                const int e = kMonomials[i][j] - (j == k ? 1 : 0);
                for (int r = 0; r < e; ++r) t = mulmod(t, v[j], m_);
            }
            s = add(s, t);
        }
        return s;
    }

    /// coefficients (c0..c3) of f restricted to the line in the last free variable t,
    /// given the other two coordinates fixed
    std::array<u64, 4> univariate(const std::array<u64, 3>& v, int t_index) const {
        std::array<u64, 4> out{};
        for (int i = 0; i < 10; ++i) {
            if (c_[i] == 0) continue;
            u64 t = c_[i];
            for (int j = 0; j < 3; ++j) {
                if (j == t_index) continue;
                for (int e = 0; e < kMonomials[i][j]; ++e) t = mulmod(t, v[j], m_);
            }
            const int d = kMonomials[i][t_index];
            out[d] = add(out[d], t);
        }
        return out;
    }

private:
    u64 reduce(i64 a) const {
        i128 r = static_cast<i128>(a) % static_cast<i128>(m_);
        if (r < 0) r += m_;
        return static_cast<u64>(r);
    }
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;  // both < m_ <= 2^62
        return s >= m_ ? s - m_ : s;
    }

    u64 m_;
    std::array<u64, 10> c_{};
};

int valuation_capped(u64 r, u64 p, int cap) {
    if (r == 0) return cap;
    int v = 0;
    while (r % p == 0 && v < cap) {
        r /= p;
        ++v;
    }
    return v;
}

bool liftable(const ResidueForm& f, const std::array<u64, 3>& v, u64 p, int level) {
    for (int k = 0; k < 3; ++k) {
        if (2 * valuation_capped(f.partial(v, k), p, level) < level) return true;
    }
    return false;
}

// roots of t^3 = r mod p, bucketed by r
class CubeRoots {
public:
    explicit CubeRoots(u64 p) : head_(p, kNone), next_(p, kNone) {
        for (u64 t = 0; t < p; ++t) {
            u64 r = mulmod(mulmod(t, t, p), t, p);
            next_[t] = head_[r];
            head_[r] = static_cast<std::uint32_t>(t);
        }
    }
    template <class F>
    void for_each(u64 r, F&& fn) const {
        for (auto t = head_[r]; t != kNone; t = next_[t]) fn(static_cast<u64>(t));
    }

private:
    static constexpr std::uint32_t kNone = UINT32_MAX;
    std::vector<std::uint32_t> head_, next_;
};

constexpr u64 kCubeTableLimit = u64{1} << 24;

}  // namespace

bool hensel_solvable(const TernaryCubic& form, u64 p, int max_level, const HenselBudget& budget) {
    if (!is_prime(p)) throw std::invalid_argument("hensel_solvable: " + std::to_string(p) + " is not prime");
    if (max_level < 1) throw std::invalid_argument("hensel_solvable: max_level must be positive");
    if (p > budget.max_modulus) throw std::overflow_error("hensel_solvable: prime exceeds modulus budget");

    const ResidueForm base(form, p);
    std::optional<CubeRoots> roots;

    for (int chart = 0; chart < 3; ++chart) {
        // primitive solutions can be scaled so that coordinate `chart` is 1, with
        // every earlier coordinate divisible by p
        const int s_index = chart == 2 ? 0 : (chart == 0 ? 1 : 0);
        const int t_index = chart == 2 ? 1 : 2;

        std::vector<std::array<u64, 3>> frontier;
        for (u64 s = 0; s < p; ++s) {
            std::array<u64, 3> v{};
            v[chart] = 1;
            v[s_index] = s;
            if (s_index < chart && s != 0) continue;
            auto handle = [&](u64 t) {
                if (t_index < chart && t != 0) return false;
                std::array<u64, 3> w = v;
                w[t_index] = t;
                if (liftable(base, w, p, 1)) return true;
                frontier.push_back(w);
                if (frontier.size() > budget.max_frontier) throw std::overflow_error("hensel_solvable: frontier budget");
                return false;
            };
            const auto poly = base.univariate(v, t_index);
            if (poly[1] == 0 && poly[2] == 0 && p <= kCubeTableLimit) {
                // c3 t^3 + c0 = 0
                if (poly[3] == 0) {
                    if (poly[0] != 0) continue;
                    for (u64 t = 0; t < p; ++t)
                        if (handle(t)) return true;
                    continue;
                }
                if (!roots) roots.emplace(p);
                const u64 target = mulmod((p - poly[0]) % p, invmod(poly[3], p), p);
                bool hit = false;
                roots->for_each(target, [&](u64 t) { hit = hit || handle(t); });
                if (hit) return true;
            } else {
                for (u64 t = 0; t < p; ++t) {
                    u64 val = poly[3];
                    for (int d = 2; d >= 0; --d) val = (mulmod(val, t, p) + poly[d]) % p;
                    if (val == 0 && handle(t)) return true;
                }
            }
        }

        u64 pm = p;  // modulus of the current level
        for (int level = 1; level < max_level && !frontier.empty(); ++level) {
            if (pm > budget.max_modulus / p) throw std::overflow_error("hensel_solvable: modulus budget exceeded");
            const u64 next_mod = pm * p;
            const ResidueForm f(form, next_mod);
            std::vector<std::array<u64, 3>> next;
            for (const auto& v : frontier) {
                // Every partial of v vanishes mod p, so f(v + p^level w) = f(v) mod p^{level+1}.
                if (f.eval(v) != 0) continue;
                for (u64 ws = 0; ws < p; ++ws) {
                    for (u64 wt = 0; wt < p; ++wt) {
                        std::array<u64, 3> w = v;
                        w[s_index] += ws * pm;
                        w[t_index] += wt * pm;
                        if (liftable(f, w, p, level + 1)) return true;
                        next.push_back(w);
                    }
                }
                if (next.size() > budget.max_frontier) throw std::overflow_error("hensel_solvable: frontier budget");
            }
            frontier = std::move(next);
            pm = next_mod;
        }
        if (!frontier.empty())
            throw std::logic_error("hensel_solvable: unresolved residue solutions at the depth bound");
    }
    return false;
}

int hensel_depth(const DiagonalCubic& c, u64 p) {
    int v = 0;
    u64 prod[4] = {27, c.u1, c.u2, c.u3};
    for (u64 u : prod)
        while (u % p == 0) {
            u /= p;
            ++v;
        }
    return 2 * v + 3;
}

bool hensel_oracle(const DiagonalCubic& c, u64 p, const HenselBudget& budget) {
    validate(c);
    const auto f = TernaryCubic::diagonal(static_cast<i64>(c.u1), static_cast<i64>(c.u2), static_cast<i64>(c.u3));
    return hensel_solvable(f, p, hensel_depth(c, p), budget);
}

i128 TernaryCubic::eval(i64 x, i64 y, i64 z) const {
    const std::array<i128, 3> v{x, y, z};
    i128 s = 0;
    for (int i = 0; i < 10; ++i) {
        i128 t = coeff[i];
        for (int k = 0; k < 3; ++k)
            for (int e = 0; e < kMonomials[i][k]; ++e) t *= v[k];
        s += t;
    }
    return s;
}

std::optional<std::array<i64, 3>> global_search(const DiagonalCubic& c, i64 box) {
    validate(c);
    if (box < 1) throw std::invalid_argument("global_search: box must be >= 1");
    std::vector<i64> order{0};
    for (i64 k = 1; k <= box; ++k) {
        order.push_back(k);
        order.push_back(-k);
    }
    const i128 u1 = c.u1, u2 = c.u2, u3 = c.u3;
    for (i64 x : order)
        for (i64 y : order) {
            const i128 partial = u1 * x * x * x + u2 * y * y * y;
            if (partial % u3 != 0) continue;
            const i128 cube = -partial / u3;
            i64 z = static_cast<i64>(std::llround(std::cbrt(static_cast<long double>(cube))));
            for (i64 cand = z - 1; cand <= z + 1; ++cand) {
                if (static_cast<i128>(cand) * cand * cand != cube) continue;
                if (cand < -box || cand > box) continue;
                if (x == 0 && y == 0 && cand == 0) continue;
                return std::array<i64, 3>{x, y, cand};
            }
        }
    return std::nullopt;
}

}  // namespace selmer3

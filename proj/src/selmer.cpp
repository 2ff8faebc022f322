#include "selmer3/selmer.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace selmer3 {

namespace {

u64 ipow(u64 b, int e) {
    u64 r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, b);
    return r;
}

int log3_exact(u64 size) {
    int r = 0;
    u64 s = size;
    while (s > 1 && s % 3 == 0) {
        s /= 3;
        ++r;
    }
    if (s != 1) throw std::logic_error("Selmer count " + std::to_string(size) + " is not a power of 3");
    return r;
}

std::vector<u64> primes_of(const FactoredInt& f) {
    std::vector<u64> ps;
    ps.reserve(f.factors.size());
    for (const auto& pp : f.factors) ps.push_back(pp.p);
    return ps;
}

}  // namespace

// --- triples -------------------------------------------------------------------

std::vector<SelmerTriple> enumerate_triples(const FactoredInt& cf) {
    if (!is_cubefree(cf)) throw std::invalid_argument("enumerate_triples: cf is not cubefree");
    const std::size_t k = cf.factors.size();
    std::vector<u64> q(k);
    for (std::size_t i = 0; i < k; ++i) q[i] = ipow(cf.factors[i].p, cf.factors[i].e);
    const u64 total = ipow(3, static_cast<int>(k));
    std::vector<SelmerTriple> out;
    out.reserve(total);
    for (u64 idx = 0; idx < total; ++idx) {
        SelmerTriple t;
        u64 rest = idx;
        for (std::size_t i = 0; i < k; ++i, rest /= 3) {
            switch (rest % 3) {
                case 1: t.A *= q[i]; break;
                case 2: t.B *= q[i]; break;
                default: t.C *= q[i]; break;
            }
        }
        out.push_back(t);
    }
    return out;
}

u64 triple_class(const SelmerTriple& t) {
    u64 cls = 1;
    for (const auto& [p, e] : factorize(t.A).factors) cls = checked_mul(cls, ipow(p, e % 3));
    for (const auto& [p, e] : factorize(t.B).factors) cls = checked_mul(cls, ipow(p, (2 * e) % 3));
    return cls;
}

F3Vector placement(const SelmerTriple& t, const FactoredInt& cf) {
    F3Vector v(cf.factors.size());
    for (std::size_t i = 0; i < cf.factors.size(); ++i) {
        const u64 p = cf.factors[i].p;
        v.set(i, t.A % p == 0 ? 1 : t.B % p == 0 ? 2 : 0);
    }
    return v;
}

std::optional<SelmerTriple> triple_for_class(u64 cls, const FactoredInt& cf) {
    if (cls == 0) return std::nullopt;
    const FactoredInt c = factorize(cls);
    for (const auto& pp : c.factors)
        if (!cf.divisible_by(pp.p)) return std::nullopt;
    SelmerTriple t;
    for (const auto& [p, v] : cf.factors) {
        const int e = c.valuation(p) % 3;
        const u64 q = ipow(p, v);
        // class exponent e = v * t with v in {1, 2}, so t = e v mod 3
        switch ((e * v) % 3) {
            case 1: t.A *= q; break;
            case 2: t.B *= q; break;
            default: t.C *= q; break;
        }
    }
    return t;
}

SelmerTriple torsion_shift(const SelmerTriple& t) { return {t.C, t.A, t.B}; }

// --- enumeration ---------------------------------------------------------------

PhiHatSelmer selmer_phihat(const CubefreeN& n) {
    PhiHatSelmer r;
    const auto primes = primes_of(n.cf2n);
    for (const auto& t : enumerate_triples(n.cf2n)) {
        if (solvable_everywhere(t.cubic(), primes)) r.solvable.push_back(t);
    }
    r.size = r.solvable.size();
    r.rank = log3_exact(r.size);
    return r;
}

PhiHatSelmer selmer_phihat(u64 n) { return selmer_phihat(make_cubefree(n)); }

// --- character sum g -------------------------------------------------------------

GContext::GContext(const FactoredInt& cf, int eta) : eps_(eps_of(static_cast<u64>(mod(eta, 9)))) {
    for (const auto& pp : cf.factors) {
        if (pp.p == 3) {
            three_part_ = ipow(3, pp.e);
            continue;
        }
        cols_.push_back(pp);
    }
    const std::size_t m = cols_.size();
    std::vector<u64> q(m);
    rho_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        q[j] = ipow(cols_[j].p, cols_[j].e);
        rho_[j] = rho_symbol(FactoredInt{q[j], {cols_[j]}}).exponent();
        if (cols_[j].p % 3 == 1) split_.push_back(static_cast<int>(j));
    }
    chi_.assign(split_.size(), std::vector<int>(m, 0));
    chi3_.assign(split_.size(), 0);
    for (std::size_t s = 0; s < split_.size(); ++s) {
        const auto prime = primes_above(cols_[split_[s]].p);
        for (std::size_t j = 0; j < m; ++j) {
            if (static_cast<int>(j) == split_[s]) continue;
            chi_[s][j] = cubic_symbol_rational(static_cast<i64>(q[j]), prime).exponent();
        }
        chi3_[s] = cubic_symbol_rational(static_cast<i64>(three_part_), prime).exponent();
    }
}

int GContext::eval(std::span<const std::uint8_t> place) const {
    if (place.size() != cols_.size()) throw std::invalid_argument("GContext::eval: wrong placement length");
    if (eps_) {
        int x = 0;
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            if (place[j] == 1) x += rho_[j];
            else if (place[j] == 2) x += 2 * rho_[j];
        }
        if (x % 3) return 0;
    }
    for (std::size_t s = 0; s < split_.size(); ++s) {
        const int c = split_[s];
        const int own = place[c];
        const int num = (own + 1) % 3, den = (own + 2) % 3;
        int x = 0;
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            if (static_cast<int>(j) == c) continue;
            if (place[j] == num) x += chi_[s][j];
            else if (place[j] == den) x += 2 * chi_[s][j];
        }
        if (num == 0) x += chi3_[s];
        else if (den == 0) x += 2 * chi3_[s];
        if ((x * cols_[c].e) % 3) return 0;
    }
    return 1;
}

int g_indicator(u64 A, u64 B, u64 C, int eta) {
    DiagonalCubic::make(A, B, C);
    if (B % 3 == 0 || C % 3 == 0) throw std::invalid_argument("g_indicator: 3 divides BC");
    const FactoredInt cf = factorize(checked_mul(checked_mul(A, B), C));
    GContext ctx(cf, eta);
    std::vector<std::uint8_t> place;
    for (const auto& pp : ctx.columns()) place.push_back(A % pp.p == 0 ? 0 : B % pp.p == 0 ? 1 : 2);
    return ctx.eval(place);
}

u64 selmer_phihat_via_g(const CubefreeN& n) {
    GContext ctx(n.cf2n, static_cast<int>(n.n % 9));
    const std::size_t m = ctx.columns().size();
    std::vector<std::uint8_t> place(m, 0);
    u64 sum = 0;
    for (;;) {
        sum += static_cast<u64>(ctx.eval(place));
        std::size_t i = 0;
        while (i < m && place[i] == 2) place[i++] = 0;
        if (i == m) break;
        ++place[i];
    }
    const int e = n.delta + n.eps;
    if (e < 0) throw std::logic_error("selmer_phihat_via_g: negative exponent");
    return checked_mul(sum, ipow(3, e));
}

u64 selmer_phihat_via_g(u64 n) { return selmer_phihat_via_g(make_cubefree(n)); }

// --- theta -----------------------------------------------------------------------

u64 cube_class(const mpq_class& r, const FactoredInt& support) {
    if (r == 0) throw std::domain_error("cube_class: zero");
    mpz_class num = abs(r.get_num()), den = r.get_den();
    u64 cls = 1;
    for (const auto& pp : support.factors) {
        mpz_class p(static_cast<unsigned long>(pp.p));
        const auto vn = mpz_remove(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
        const auto vd = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
        const i64 v = static_cast<i64>(vn) - static_cast<i64>(vd);
        cls = checked_mul(cls, ipow(pp.p, static_cast<int>(mod(v, 3))));
    }
    mpz_class root;
    if (!mpz_root(root.get_mpz_t(), num.get_mpz_t(), 3) || !mpz_root(root.get_mpz_t(), den.get_mpz_t(), 3))
        throw std::domain_error("cube_class: " + r.get_str() + " is not a cube away from the support");
    return cls;
}

ThetaImage theta_image(const RationalPoint& P, const CubefreeN& n) {
    if (!on_curve(P, CurveId{n.n, Side::E}))
        throw std::invalid_argument("theta_image: point " + to_string(P) + " not on E_n");
    const FactoredInt two_n = multiply(n.factors, FactoredInt{2, {{2, 1}}});
    const mpq_class nn(static_cast<unsigned long>(n.n));
    const mpq_class tn = 2 * nn;
    ThetaImage img;
    if (P.infinity) {
        img.first = img.second = 1;
    } else if (P.y == nn) {
        img.first = cube_class(tn * tn, two_n);
        img.second = cube_class(tn, two_n);
    } else if (P.y == -nn) {
        img.first = cube_class(tn, two_n);
        img.second = cube_class(tn * tn, two_n);
    } else {
        img.first = cube_class(P.y - nn, two_n);
        img.second = cube_class(P.y + nn, two_n);
    }
    const u64 sq = cube_class(mpq_class(mpz_class(static_cast<unsigned long>(img.first))) * img.first, two_n);
    if (sq != img.second) throw std::logic_error("theta_image: second class is not the square of the first");
    img.triple = triple_for_class(img.first, n.cf2n);
    const auto sel = selmer_phihat(n);
    if (!img.triple || std::find(sel.solvable.begin(), sel.solvable.end(), *img.triple) == sel.solvable.end())
        throw std::logic_error("theta_image: image of " + to_string(P) + " is not in the Selmer set");
    return img;
}

// --- direct phi-Selmer -------------------------------------------------------------

std::vector<PhiSelmerCandidate> phi_candidates(const CubefreeN& n) {
    std::vector<PrimeAboveP> split;
    std::vector<int> v;
    for (const auto& [p, e] : n.cf2n.factors) {
        if (p % 3 != 1) continue;
        split.push_back(primes_above(p));
        v.push_back(e);
    }
    const std::size_t l = split.size();
    const int e0_count = n.v3 == 1 ? 1 : 3;
    std::vector<PhiSelmerCandidate> out;
    const u64 total = ipow(3, static_cast<int>(l));
    for (int e0 = 0; e0 < e0_count; ++e0) {
        for (u64 idx = 0; idx < total; ++idx) {
            PhiSelmerCandidate c;
            if (n.v3 != 1) c.e0 = e0;
            c.u = pow(EisensteinInt::rho(), static_cast<u64>(e0));
            u64 rest = idx;
            for (std::size_t j = 0; j < l; ++j, rest /= 3) {
                const int ej = static_cast<int>(rest % 3);
                c.e.push_back(ej);
                const int k = (ej * v[j]) % 3;
                c.u = c.u * pow(split[j].pi, static_cast<u64>(k)) * pow(split[j].pi.conj(), static_cast<u64>((2 * k) % 3));
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

TernaryCubic trace_form(const EisensteinInt& u, u64 n) {
    const i64 c = checked_sub(checked_mul(i64{2}, u.a), u.b);
    const i64 nine_b = checked_mul(i64{9}, u.b);
    TernaryCubic f;
    f.coeff[0] = c;
    f.coeff[1] = -nine_b;
    f.coeff[3] = checked_mul(i64{-9}, c);
    f.coeff[6] = nine_b;
    f.coeff[9] = checked_mul(i64{2}, narrow(static_cast<i128>(n)));
    return f;
}

namespace {

int place_valuation(EisensteinInt u, const EisensteinInt& w) {
    int k = 0;
    while (!u.is_zero() && divides(w, u)) {
        u = exact_div(u, w);
        ++k;
    }
    return k;
}

}  // namespace

bool trace_form_solvable(const EisensteinInt& u, const CubefreeN& n, const HenselBudget& budget) {
    TernaryCubic f = trace_form(u, n.n);
    u64 content = 0;
    for (i64 c : f.coeff) content = std::gcd(content, static_cast<u64>(c < 0 ? -c : c));
    for (i64& c : f.coeff) c /= static_cast<i64>(content);
    std::set<u64> bad{2, 3};
    for (const auto& pp : n.factors.factors) bad.insert(pp.p);
    for (const auto& pp : factorize(static_cast<u64>(norm(u))).factors) bad.insert(pp.p);
    for (u64 p : bad) {
        const int six = (p == 2 || p == 3) ? 1 : 0;
        const int v6n = six + n.factors.valuation(p);
        const auto prime = primes_above(p);
        int vu = place_valuation(u, prime.pi);
        if (prime.kind == PrimeKind::split) vu = std::max(vu, place_valuation(u, prime.pi.conj()));
        int vc = 0;
        for (u64 c = content; c % p == 0; c /= p) ++vc;
        const int bound = std::max(0, std::max(v6n, vu + 3 * six) - vc);
        if (!hensel_solvable(f, p, 2 * bound + 3, budget)) return false;
    }
    return true;
}

int selmer_phi_direct(const CubefreeN& n, const HenselBudget& budget) {
    std::set<F3Vector> passing;
    for (const auto& c : phi_candidates(n)) {
        if (!trace_form_solvable(c.u, n, budget)) continue;
        F3Vector vec(c.e.size() + (c.e0 ? 1 : 0));
        std::size_t i = 0;
        if (c.e0) vec.set(i++, *c.e0);
        for (int e : c.e) vec.set(i++, e);
        passing.insert(vec);
    }
    const int rank = log3_exact(passing.size());
    for (const auto& a : passing)
        for (const auto& b : passing)
            if (!passing.count(a + b)) throw std::logic_error("selmer_phi_direct: passing classes are not a subgroup");
    return rank;
}

}  // namespace selmer3

#include "selmer3/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace selmer3 {

i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("checked_add: 64-bit overflow");
    return r;
}

i64 checked_sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("checked_sub: 64-bit overflow");
    return r;
}

i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("checked_mul: 64-bit overflow");
    return r;
}

u64 checked_mul(u64 a, u64 b) {
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("checked_mul: 64-bit overflow");
    return r;
}

i64 narrow(i128 v) {
    if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN))
        throw std::overflow_error("value exceeds 64-bit range");
    return static_cast<i64>(v);
}

u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

u64 invmod(u64 a, u64 m) {
    i128 old_r = static_cast<i128>(a % m), r = m;
    i128 old_s = 1, s = 0;
    while (r != 0) {
        i128 q = old_r / r;
        i128 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw std::domain_error("invmod: not invertible");
    i128 res = old_s % static_cast<i128>(m);
    if (res < 0) res += m;
    return static_cast<u64>(res);
}

bool is_cube_mod_prime(u64 a, u64 p) {
    a %= p;
    if (a == 0) throw std::domain_error("is_cube_mod_prime: argument divisible by p");
    if (p % 3 != 1) return true;
    return powmod(a, (p - 1) / 3, p) == 1;
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int r = 1; r < s; ++r) {
        x = mulmod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

u64 pollard_brent(u64 n, u64 seed) {
    if (n % 2 == 0) return 2;
    u64 y = seed % n, c = (seed * 2654435761ULL + 1) % n, m = 128;
    if (c == 0) c = 1;
    u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
        x = y;
        for (u64 i = 0; i < r; ++i) y = f(y);
        u64 k = 0;
        do {
            ys = y;
            for (u64 i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
            k += m;
        } while (k < r && g == 1);
        r <<= 1;
    } while (g == 1);
    if (g == n) {
        do {
            ys = f(ys);
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        } while (g == 1);
    }
    return g;
}

void factor_rec(u64 n, std::vector<PrimePower>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back({n, 1});
        return;
    }
    u64 d = n;
    for (u64 seed = 2; d == n; ++seed) d = pollard_brent(n, seed);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These bases are a proven deterministic set below 3.3e24.
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

std::vector<u64> primes_up_to(u64 bound) {
    std::vector<u64> primes;
    if (bound < 2) return primes;
    std::vector<bool> composite(bound + 1, false);
    for (u64 i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return primes;
}

int FactoredInt::valuation(u64 p) const {
    for (const auto& f : factors)
        if (f.p == p) return f.e;
    return 0;
}

u64 FactoredInt::prime_part(u64 p) const {
    u64 r = 1;
    for (int i = valuation(p); i > 0; --i) r *= p;
    return r;
}

std::string FactoredInt::to_string() const {
    if (factors.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) os << '*';
        os << factors[i].p;
        if (factors[i].e > 1) os << '^' << factors[i].e;
    }
    return os.str();
}

FactoredInt make_factored(std::vector<PrimePower> factors) {
    std::sort(factors.begin(), factors.end(), [](auto& l, auto& r) { return l.p < r.p; });
    FactoredInt out;
    for (const auto& f : factors) {
        if (f.e <= 0) continue;
        if (!out.factors.empty() && out.factors.back().p == f.p)
            out.factors.back().e += f.e;
        else
            out.factors.push_back(f);
        for (int i = 0; i < f.e; ++i) out.n = checked_mul(out.n, f.p);
    }
    return out;
}

FactoredInt multiply(const FactoredInt& a, const FactoredInt& b) {
    std::vector<PrimePower> all = a.factors;
    all.insert(all.end(), b.factors.begin(), b.factors.end());
    return make_factored(std::move(all));
}

FactoredInt factorize(u64 n) {
    if (n == 0) throw std::invalid_argument("factorize: zero");
    std::vector<PrimePower> found;
    for (u64 p = 2; p < 1000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        found.push_back({p, e});
    }
    std::vector<PrimePower> big;
    factor_rec(n, big);
    found.insert(found.end(), big.begin(), big.end());
    return make_factored(std::move(found));
}

bool is_cubefree(const FactoredInt& f) {
    return std::all_of(f.factors.begin(), f.factors.end(), [](auto& pp) { return pp.e <= 2; });
}

bool is_cubefree(u64 n) { return n != 0 && is_cubefree(factorize(n)); }

FactoredInt cf2n(const FactoredInt& n) {
    if (!is_cubefree(n)) throw std::invalid_argument("cf2n: n is not cubefree");
    FactoredInt out;
    int v2 = n.valuation(2);
    if (v2 == 2) {
        for (const auto& f : n.factors)
            if (f.p != 2) out.factors.push_back(f);
        out.n = n.n / 4;
        return out;
    }
    return multiply(n, FactoredInt{2, {{2, 1}}});
}

FactoredInt cf2n(u64 n) { return cf2n(factorize(n)); }

int delta_of(u64 n) {
    switch (n % 9) {
        case 3:
        case 6: return 1;
        case 4:
        case 5: return -1;
        default: return 0;
    }
}

int eps_of(u64 n) {
    u64 r = n % 9;
    return (r == 3 || r == 6) ? 0 : 1;
}

int omega_mod3(const FactoredInt& f, int residue) {
    return static_cast<int>(std::count_if(f.factors.begin(), f.factors.end(), [&](auto& pp) {
        return static_cast<int>(pp.p % 3) == residue;
    }));
}

CubefreeN make_cubefree(const FactoredInt& factors) {
    if (factors.n == 0) throw std::invalid_argument("make_cubefree: zero");
    if (!is_cubefree(factors))
        throw std::invalid_argument("make_cubefree: " + std::to_string(factors.n) + " is not cubefree");
    CubefreeN c;
    c.n = factors.n;
    c.factors = factors;
    c.cf2n = cf2n(factors);
    c.v3 = factors.valuation(3);
    c.delta = delta_of(c.n);
    c.eps = eps_of(c.n);
    c.omega1 = omega_mod3(factors, 1);
    c.omega2 = omega_mod3(c.cf2n, 2);
    return c;
}

CubefreeN make_cubefree(u64 n) {
    if (n == 0) throw std::invalid_argument("make_cubefree: zero");
    return make_cubefree(factorize(n));
}

Invariants invariants(u64 n) { return make_cubefree(n).invariants(); }

std::vector<CubefreeN> cubefree_block(u64 lo, u64 hi) {
    std::vector<CubefreeN> out;
    if (lo < 1) lo = 1;
    if (hi <= lo) return out;
    const u64 len = hi - lo;
    std::vector<u64> rest(len);
    std::vector<std::vector<PrimePower>> found(len);
    std::vector<bool> cube_divisible(len, false);
    for (u64 i = 0; i < len; ++i) rest[i] = lo + i;

    const u64 root = static_cast<u64>(std::sqrt(static_cast<long double>(hi))) + 1;
    for (u64 p : primes_up_to(root)) {
        for (u64 m = (lo + p - 1) / p * p; m < hi; m += p) {
            u64 i = m - lo;
            int e = 0;
            while (rest[i] % p == 0) {
                rest[i] /= p;
                ++e;
            }
            if (e >= 3) cube_divisible[i] = true;
            found[i].push_back({p, e});
        }
    }
    for (u64 i = 0; i < len; ++i) {
        if (cube_divisible[i]) continue;
        FactoredInt f;
        f.n = lo + i;
        f.factors = std::move(found[i]);
        if (rest[i] > 1) f.factors.push_back({rest[i], 1});
        out.push_back(make_cubefree(f));
    }
    return out;
}

std::vector<CubefreeN> enumerate_cubefree(u64 N) {
    std::vector<CubefreeN> out;
    for_each_cubefree(N, [&](const CubefreeN& c) { out.push_back(c); });
    return out;
}

void for_each_cubefree(u64 N, const std::function<void(const CubefreeN&)>& fn, u64 block_size) {
    for (u64 lo = 1; lo <= N; lo += block_size) {
        u64 hi = std::min(N + 1, lo + block_size);
        for (const auto& c : cubefree_block(lo, hi)) fn(c);
    }
}

}  // namespace selmer3

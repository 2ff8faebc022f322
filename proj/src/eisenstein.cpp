#include "selmer3/eisenstein.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace selmer3 {

namespace {

// floor(num / den) for den > 0
i128 floor_div(i128 num, i128 den) {
    i128 q = num / den;
    if ((num % den != 0) && (num < 0)) --q;
    return q;
}

i128 round_div(i128 num, i128 den) { return floor_div(2 * num + den, 2 * den); }

EisensteinInt make(i128 a, i128 b) { return {narrow(a), narrow(b)}; }

}  // namespace

EisensteinInt EisensteinInt::conj() const { return {checked_sub(a, b), checked_sub(0, b)}; }

EisensteinInt operator+(const EisensteinInt& x, const EisensteinInt& y) {
    return {checked_add(x.a, y.a), checked_add(x.b, y.b)};
}

EisensteinInt operator-(const EisensteinInt& x, const EisensteinInt& y) {
    return {checked_sub(x.a, y.a), checked_sub(x.b, y.b)};
}

EisensteinInt operator-(const EisensteinInt& x) { return EisensteinInt{} - x; }

EisensteinInt operator*(const EisensteinInt& x, const EisensteinInt& y) {
    // rho^2 = -1 - rho
    i128 ac = static_cast<i128>(x.a) * y.a;
    i128 bd = static_cast<i128>(x.b) * y.b;
    i128 cross = static_cast<i128>(x.a) * y.b + static_cast<i128>(x.b) * y.a;
    return make(ac - bd, cross - bd);
}

EisensteinInt pow(EisensteinInt x, u64 e) {
    EisensteinInt r{1};
    while (e) {
        if (e & 1) r = r * x;
        e >>= 1;
        if (e) x = x * x;
    }
    return r;
}

i64 norm(const EisensteinInt& z) {
    i128 a = z.a, b = z.b;
    return narrow(a * a - a * b + b * b);
}

std::string to_string(const EisensteinInt& z) {
    std::ostringstream os;
    const u64 mag = z.b < 0 ? static_cast<u64>(-static_cast<i128>(z.b)) : static_cast<u64>(z.b);
    os << z.a << (z.b < 0 ? '-' : '+') << mag << "*r";
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const EisensteinInt& z) { return os << to_string(z); }

DivMod divmod(const EisensteinInt& x, const EisensteinInt& y) {
    if (y.is_zero()) throw std::domain_error("divmod: division by zero");
    const i128 n = norm(y);
    // x * conj(y) = s + t rho, computed in 128 bits
    const i128 ya = static_cast<i128>(y.a) - y.b, yb = -static_cast<i128>(y.b);
    const i128 ac = x.a * ya, bd = x.b * yb;
    const i128 s = ac - bd;
    const i128 t = x.a * yb + x.b * ya - bd;
    EisensteinInt q = make(round_div(s, n), round_div(t, n));
    return {q, x - q * y};
}

EisensteinInt reduce(const EisensteinInt& x, const EisensteinInt& modulus) { return divmod(x, modulus).r; }

bool divides(const EisensteinInt& d, const EisensteinInt& x) {
    if (d.is_zero()) return x.is_zero();
    return reduce(x, d).is_zero();
}

EisensteinInt exact_div(const EisensteinInt& x, const EisensteinInt& d) {
    auto [q, r] = divmod(x, d);
    if (!r.is_zero()) throw std::domain_error("exact_div: not divisible");
    return q;
}

const std::array<EisensteinInt, 6>& units() {
    static const std::array<EisensteinInt, 6> u{EisensteinInt{1, 0},  EisensteinInt{0, 1},
                                                EisensteinInt{-1, -1}, EisensteinInt{-1, 0},
                                                EisensteinInt{0, -1},  EisensteinInt{1, 1}};
    return u;
}

bool is_primary(const EisensteinInt& z) { return mod(z.a, 3) == 1 && mod(z.b, 3) == 0; }

std::pair<EisensteinInt, EisensteinInt> primary_associate(const EisensteinInt& z) {
    if (norm(z) % 3 == 0) throw std::domain_error("primary_associate: " + to_string(z) + " not coprime to 3");
    for (const auto& u : units()) {
        EisensteinInt w = u * z;
        if (is_primary(w)) return {u, w};
    }
    throw std::logic_error("primary_associate: no primary associate found");
}

EisensteinInt gcd(const EisensteinInt& x, const EisensteinInt& y) {
    if (x.is_zero() && y.is_zero()) throw std::invalid_argument("gcd: both arguments zero");
    EisensteinInt a = x, b = y;
    while (!b.is_zero()) {
        EisensteinInt r = reduce(a, b);
        a = b;
        b = r;
    }
    if (norm(a) % 3 != 0) return primary_associate(a).second;
    EisensteinInt best{};
    bool found = false;
    for (const auto& u : units()) {
        EisensteinInt w = u * a;
        if (w.a < 0 || w.b < 0) continue;
        if (!found || w < best) {
            best = w;
            found = true;
        }
    }
    return best;
}

namespace {

PrimeAboveP compute_prime_above(u64 p) {
    if (!is_prime(p)) throw std::invalid_argument("primes_above: " + std::to_string(p) + " is not prime");
    if (p == 3) return {3, PrimeKind::ramified, EisensteinInt{1, -1}};
    if (p % 3 == 2) return {p, PrimeKind::inert, EisensteinInt{static_cast<i64>(p)}};
    // t is a primitive cube root of unity mod p, so p | (t - rho)(t - rho^2).
    u64 t = 1;
    for (u64 g = 2; t == 1; ++g) t = powmod(g, (p - 1) / 3, p);
    EisensteinInt pi = gcd(EisensteinInt{static_cast<i64>(p)}, EisensteinInt{static_cast<i64>(t), -1});
    if (norm(pi) != static_cast<i64>(p)) throw std::logic_error("primes_above: bad split for " + std::to_string(p));
    if (pi.b < 0) pi = pi.conj();
    const u64 t2 = mulmod(t, t, p);
    const u64 r = divides(pi, EisensteinInt{static_cast<i64>(t), -1}) ? t : t2;
    return {p, PrimeKind::split, pi, r};
}

}  // namespace

PrimeAboveP primes_above(u64 p) {
    thread_local std::unordered_map<u64, PrimeAboveP> cache;
    if (auto it = cache.find(p); it != cache.end()) return it->second;
    PrimeAboveP r = compute_prime_above(p);
    cache.emplace(p, r);
    return r;
}

int UnityRootExp::exponent() const {
    if (is_zero()) throw std::domain_error("UnityRootExp: Zero has no exponent");
    return exp_;
}

UnityRootExp UnityRootExp::pow(i64 k) const {
    if (is_zero()) return k == 0 ? UnityRootExp(0) : zero();
    return UnityRootExp(static_cast<int>((static_cast<i128>(exp_) * mod(k, 3)) % 3));
}

std::ostream& operator<<(std::ostream& os, UnityRootExp v) {
    if (v.is_zero()) return os << "0";
    return os << "r^" << v.exponent();
}

UnityRootExp cubic_symbol_prime(const EisensteinInt& alpha, const EisensteinInt& pi) {
    const i64 q = norm(pi);
    if (q % 3 == 0) throw std::domain_error("cubic_symbol: denominator divisible by a prime above 3");
    if (q == 1) return UnityRootExp(0);
    EisensteinInt base = reduce(alpha, pi);
    if (base.is_zero()) return UnityRootExp::zero();
    EisensteinInt r{1};
    for (u64 e = static_cast<u64>(q - 1) / 3; e; e >>= 1) {
        if (e & 1) r = reduce(r * base, pi);
        base = reduce(base * base, pi);
    }
    EisensteinInt unit{1};
    for (int e = 0; e < 3; ++e, unit = unit * EisensteinInt::rho()) {
        if (divides(pi, r - unit)) return UnityRootExp(e);
    }
    throw std::logic_error("cubic_symbol: " + to_string(pi) + " is not prime");
}

UnityRootExp cubic_symbol(const EisensteinInt& alpha, const EisensteinInt& beta) {
    if (beta.is_zero()) throw std::domain_error("cubic_symbol: zero denominator");
    const i64 q = norm(beta);
    if (q % 3 == 0) throw std::domain_error("cubic_symbol: denominator divisible by a prime above 3");
    UnityRootExp result(0);
    EisensteinInt rest = beta;
    for (const auto& [p, e] : factorize(static_cast<u64>(q)).factors) {
        if (p % 3 == 2) {
            const EisensteinInt inert{static_cast<i64>(p)};
            result = result * cubic_symbol_prime(alpha, inert).pow(e / 2);
            continue;
        }
        const EisensteinInt pi = primes_above(p).pi;
        int k = 0;
        while (divides(pi, rest)) {
            rest = exact_div(rest, pi);
            ++k;
        }
        if (k > 0) result = result * cubic_symbol_prime(alpha, pi).pow(k);
        if (e - k > 0) result = result * cubic_symbol_prime(alpha, pi.conj()).pow(e - k);
    }
    return result;
}

UnityRootExp cubic_symbol_rational(i64 m, const PrimeAboveP& prime) {
    if (prime.kind != PrimeKind::split) throw std::invalid_argument("cubic_symbol_rational: prime is not split");
    const u64 p = prime.p;
    const u64 r = powmod(static_cast<u64>(mod(m, static_cast<i64>(p))), (p - 1) / 3, p);
    if (r == 0) return UnityRootExp::zero();
    if (r == 1) return UnityRootExp(0);
    return UnityRootExp(r == prime.rho_residue ? 1 : 2);
}

UnityRootExp rho_symbol(const FactoredInt& q) {
    int e = 0;
    for (const auto& [p, k] : q.factors) {
        if (p == 3) throw std::domain_error("rho_symbol: denominator divisible by 3");
        // N(p) = p^2 for inert p; for split p the two conjugate factors each contribute (p-1)/3
        const u64 r = p % 3 == 2 ? static_cast<u64>((static_cast<u128>(p) * p - 1) / 3 % 3) : (2 * ((p - 1) / 3)) % 3;
        e += static_cast<int>(r) * k;
    }
    return UnityRootExp(e);
}

UnityRootExp cubic_symbol(const EisensteinInt& alpha, const FactoredInt& beta) {
    UnityRootExp result(0);
    for (const auto& [p, e] : beta.factors) {
        if (p == 3) throw std::domain_error("cubic_symbol: denominator divisible by 3");
        const auto prime = primes_above(p);
        UnityRootExp s = cubic_symbol_prime(alpha, prime.pi);
        if (prime.kind == PrimeKind::split) s = s * cubic_symbol_prime(alpha, prime.pi.conj());
        result = result * s.pow(e);
    }
    return result;
}

UnityRootExp cubic_symbol(const EisensteinInt& alpha, u64 beta) {
    if (beta == 0) throw std::domain_error("cubic_symbol: zero denominator");
    return cubic_symbol(alpha, factorize(beta));
}

}  // namespace selmer3

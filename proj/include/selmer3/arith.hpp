#pragma once

// Rational-integer utilities: checked 64-bit arithmetic, modular helpers,
// factorization, cubefree enumeration and the elementary invariants of the
// family y^2 = x^3 + n^2 (cf(2n), omega_1, omega_2, delta_n, eps_n).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace selmer3 {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// --- checked arithmetic ------------------------------------------------------

i64 checked_add(i64 a, i64 b);
i64 checked_sub(i64 a, i64 b);
i64 checked_mul(i64 a, i64 b);
u64 checked_mul(u64 a, u64 b);

/// Narrow a 128-bit intermediate, throwing std::overflow_error if it does not fit.
i64 narrow(i128 v);

// --- modular helpers ---------------------------------------------------------

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
u64 powmod(u64 base, u64 exp, u64 m);
/// Least nonnegative residue of a mod m (m > 0).
inline i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}
/// Inverse of a modulo m; throws std::domain_error if gcd(a, m) != 1.
u64 invmod(u64 a, u64 m);

/// Is a (coprime to p) a cube in F_p^x ?
bool is_cube_mod_prime(u64 a, u64 p);

// --- primes and factorization ------------------------------------------------

/// Deterministic Miller-Rabin over the full 64-bit range.
bool is_prime(u64 n);

std::vector<u64> primes_up_to(u64 bound);

struct PrimePower {
    u64 p = 0;
    int e = 0;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n together with its prime factorization, primes strictly increasing.
struct FactoredInt {
    u64 n = 1;
    std::vector<PrimePower> factors;

    int valuation(u64 p) const;
    bool divisible_by(u64 p) const { return valuation(p) > 0; }
    /// p^{v_p(n)}; 1 if p does not divide n.
    u64 prime_part(u64 p) const;
    std::size_t omega() const { return factors.size(); }
    std::string to_string() const;

    friend bool operator==(const FactoredInt&, const FactoredInt&) = default;
};

/// Trial division followed by Pollard-Brent rho with deterministic certification.
FactoredInt factorize(u64 n);

/// Build a FactoredInt from (p, e) pairs, sorting and merging; checks overflow.
FactoredInt make_factored(std::vector<PrimePower> factors);

FactoredInt multiply(const FactoredInt& a, const FactoredInt& b);

bool is_cubefree(const FactoredInt& f);
bool is_cubefree(u64 n);

// --- invariants of n ------------------------------------------------------------

/// Cubefree part of 2n for cubefree n: 2n unless v_2(n) = 2, in which case n/4.
FactoredInt cf2n(const FactoredInt& n);
FactoredInt cf2n(u64 n);

/// delta_n: 1 if n = +-3 mod 9, -1 if n = +-4 mod 9, 0 otherwise.
int delta_of(u64 n);
/// eps_n: 0 if n = +-3 mod 9, 1 otherwise.
int eps_of(u64 n);

/// Number of distinct primes p | f with p = residue mod 3.
int omega_mod3(const FactoredInt& f, int residue);

struct Invariants {
    int omega1 = 0;  // omega_1(n)
    int omega2 = 0;  // omega_2(cf(2n))
    int delta = 0;
    int eps = 0;
    int v3 = 0;
    friend bool operator==(const Invariants&, const Invariants&) = default;
};

Invariants invariants(u64 n);

/// A cubefree n with everything downstream code needs attached.
struct CubefreeN {
    u64 n = 1;
    FactoredInt factors;
    FactoredInt cf2n;
    int v3 = 0;
    int delta = 0;
    int eps = 0;
    int omega1 = 0;
    int omega2 = 0;

    Invariants invariants() const { return {omega1, omega2, delta, eps, v3}; }
};

/// Throws std::invalid_argument if n is zero or not cubefree.
CubefreeN make_cubefree(u64 n);
CubefreeN make_cubefree(const FactoredInt& factors);

/// Cubefree integers in [lo, hi) in increasing order, factored by a segmented sieve.
std::vector<CubefreeN> cubefree_block(u64 lo, u64 hi);

/// Every cubefree 1 <= n <= N in increasing order.
std::vector<CubefreeN> enumerate_cubefree(u64 N);

/// Streaming variant of enumerate_cubefree, processing blocks of block_size.
void for_each_cubefree(u64 N, const std::function<void(const CubefreeN&)>& fn,
                       u64 block_size = 1u << 16);

}  // namespace selmer3

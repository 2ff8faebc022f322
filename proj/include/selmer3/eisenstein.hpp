#pragma once

/**
 * @file eisenstein.hpp
 * @brief Exact arithmetic in the Eisenstein integers Z[rho], rho = (-1 + sqrt(-3))/2.
 *
 * Z[rho] is the ring of integers of Q(sqrt(-3)). It is Euclidean for the norm
 * N(a + b rho) = a^2 - ab + b^2, has six units +-1, +-rho, +-rho^2, and every
 * element coprime to 3 has exactly one primary associate (one congruent to
 * 1 mod 3). The cubic residue symbol (alpha/pi)_3 is stored as an exponent
 * e in F_3 with (alpha/pi)_3 = rho^e.
 *
 * Coefficients are 64-bit; all intermediate products go through 128-bit
 * arithmetic and overflow raises std::overflow_error.
 */

#include <array>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "selmer3/arith.hpp"

namespace selmer3 {

struct EisensteinInt {
    i64 a = 0;  // coefficient of 1
    i64 b = 0;  // coefficient of rho

    constexpr EisensteinInt() = default;
    constexpr EisensteinInt(i64 a_) : a(a_) {}
    constexpr EisensteinInt(i64 a_, i64 b_) : a(a_), b(b_) {}

    static constexpr EisensteinInt rho() { return {0, 1}; }
    static constexpr EisensteinInt rho2() { return {-1, -1}; }

    constexpr bool is_zero() const { return a == 0 && b == 0; }
    /// Complex conjugate: rho -> rho^2 = -1 - rho.
    EisensteinInt conj() const;

    friend bool operator==(const EisensteinInt&, const EisensteinInt&) = default;
    friend auto operator<=>(const EisensteinInt&, const EisensteinInt&) = default;
};

EisensteinInt operator+(const EisensteinInt& x, const EisensteinInt& y);
EisensteinInt operator-(const EisensteinInt& x, const EisensteinInt& y);
EisensteinInt operator-(const EisensteinInt& x);
EisensteinInt operator*(const EisensteinInt& x, const EisensteinInt& y);
EisensteinInt pow(EisensteinInt x, u64 e);

/// a^2 - ab + b^2.
i64 norm(const EisensteinInt& z);

/// Rendered as "a+b*r", e.g. "1+3*r", "-2-3*r".
std::string to_string(const EisensteinInt& z);
std::ostream& operator<<(std::ostream& os, const EisensteinInt& z);

/// Euclidean division: x = q*y + r with norm(r) < norm(y).
struct DivMod {
    EisensteinInt q, r;
};
DivMod divmod(const EisensteinInt& x, const EisensteinInt& y);
EisensteinInt reduce(const EisensteinInt& x, const EisensteinInt& modulus);
bool divides(const EisensteinInt& d, const EisensteinInt& x);
/// Exact quotient; throws std::domain_error if d does not divide x.
EisensteinInt exact_div(const EisensteinInt& x, const EisensteinInt& d);

/// The six units, in the order 1, rho, rho^2, -1, -rho, -rho^2.
const std::array<EisensteinInt, 6>& units();

bool is_primary(const EisensteinInt& z);

/// (unit, unit*z) with unit*z = 1 mod 3; throws std::domain_error if 3 | norm(z).
std::pair<EisensteinInt, EisensteinInt> primary_associate(const EisensteinInt& z);

/// Greatest common divisor, normalized to its primary associate when coprime to 3,
/// otherwise to the lexicographically least associate with a, b >= 0.
EisensteinInt gcd(const EisensteinInt& x, const EisensteinInt& y);

enum class PrimeKind { split, inert, ramified };

struct PrimeAboveP {
    u64 p = 0;
    PrimeKind kind = PrimeKind::inert;
    EisensteinInt pi;
    u64 rho_residue = 0;  // split only: t in [0, p) with rho = t mod pi
};

/// The canonical prime above a rational prime p: for p = 1 mod 3 the primary
/// prime with positive rho-coefficient, for p = 2 mod 3 p itself, for p = 3
/// the ramified prime 1 - rho. Throws std::invalid_argument if p is not prime.
PrimeAboveP primes_above(u64 p);

/// Value rho^e of a cubic residue symbol, or Zero when the arguments share a factor.
class UnityRootExp {
public:
    constexpr UnityRootExp() = default;
    constexpr explicit UnityRootExp(int e) : exp_(static_cast<std::int8_t>(((e % 3) + 3) % 3)) {}
    static constexpr UnityRootExp zero() {
        UnityRootExp z;
        z.exp_ = -1;
        return z;
    }

    constexpr bool is_zero() const { return exp_ < 0; }
    constexpr bool is_one() const { return exp_ == 0; }
    /// Exponent in {0,1,2}; throws std::domain_error for Zero.
    int exponent() const;

    friend constexpr UnityRootExp operator*(UnityRootExp x, UnityRootExp y) {
        if (x.is_zero() || y.is_zero()) return zero();
        return UnityRootExp(x.exp_ + y.exp_);
    }
    UnityRootExp pow(i64 k) const;
    UnityRootExp inverse() const { return pow(2); }

    friend constexpr bool operator==(UnityRootExp, UnityRootExp) = default;

private:
    std::int8_t exp_ = 0;
};

std::ostream& operator<<(std::ostream& os, UnityRootExp v);

/// Cubic residue symbol (alpha/pi)_3 for a prime pi of Z[rho] coprime to 3,
/// by the Euler criterion alpha^{(N(pi)-1)/3} = rho^e mod pi.
UnityRootExp cubic_symbol_prime(const EisensteinInt& alpha, const EisensteinInt& pi);

/// (m/pi)_3 for a rational integer m and a split prime, computed in F_p.
UnityRootExp cubic_symbol_rational(i64 m, const PrimeAboveP& prime);

/// (rho/q)_3 for a rational q >= 1 coprime to 3: rho^{(N(q)-1)/3} evaluated exactly.
UnityRootExp rho_symbol(const FactoredInt& q);

/// Cubic residue symbol with an arbitrary denominator coprime to 3, extended
/// multiplicatively over its prime factorization in Z[rho].
UnityRootExp cubic_symbol(const EisensteinInt& alpha, const EisensteinInt& beta);
/// Rational denominator beta >= 1 coprime to 3.
UnityRootExp cubic_symbol(const EisensteinInt& alpha, u64 beta);
/// Rational denominator given by its factorization (no prime 3).
UnityRootExp cubic_symbol(const EisensteinInt& alpha, const FactoredInt& beta);

}  // namespace selmer3

#pragma once

// Local solvability of diagonal ternary cubics u1 X^3 + u2 Y^3 + u3 Z^3 = 0.
//
// solvable_at() is the closed-form criterion (good reduction away from 3, a
// cube-ratio test at p | u_i, and three cases at p = 3 keyed to v_3 and
// ratios = +-1 mod 9). hensel_oracle() is an independent brute-force check:
// it enumerates primitive residue solutions mod p^m level by level and stops
// once one of them satisfies the single-variable Hensel condition.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selmer3/arith.hpp"

namespace selmer3 {

/// Pairwise coprime, cubefree, positive coefficients (u1, u2, u3).
struct DiagonalCubic {
    u64 u1 = 1, u2 = 1, u3 = 1;

    /// Throws std::invalid_argument if the triple violates the invariants.
    static DiagonalCubic make(u64 u1, u64 u2, u64 u3);
    std::array<u64, 3> coeffs() const { return {u1, u2, u3}; }

    friend bool operator==(const DiagonalCubic&, const DiagonalCubic&) = default;
};

void validate(const DiagonalCubic& c);
std::string to_string(const DiagonalCubic& c);

enum class LocalRule {
    good_reduction,       // p != 3, p does not divide u1 u2 u3
    cube_ratio,           // p != 3, p | u_i, u_j/u_k a cube mod p
    three_unit_ratio,     // p = 3, 3 does not divide u1 u2 u3
    three_valuation_one,  // p = 3, v_3(u_i) = 1
    three_valuation_two,  // p = 3, v_3(u_i) = 2
    real,
};

const char* to_string(LocalRule r);

struct LocalVerdict {
    u64 p = 0;  // 0 denotes the real place
    bool solvable = false;
    LocalRule rule = LocalRule::good_reduction;
};

LocalVerdict solvable_at(const DiagonalCubic& c, u64 p);
LocalVerdict solvable_at_real(const DiagonalCubic& c);

/// 3 together with every prime dividing u1 u2 u3, increasing.
std::vector<u64> bad_primes(const DiagonalCubic& c);

bool solvable_everywhere(const DiagonalCubic& c);
/// As above with the prime divisors of u1 u2 u3 supplied by the caller
/// (any superset is fine; 3 is always checked).
bool solvable_everywhere(const DiagonalCubic& c, std::span<const u64> primes);

/// Ternary cubic form with integer coefficients in the monomial order
/// x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3.
struct TernaryCubic {
    std::array<i64, 10> coeff{};

    static TernaryCubic diagonal(i64 a, i64 b, i64 c);
    i128 eval(i64 x, i64 y, i64 z) const;
};

struct HenselBudget {
    /// Largest p^m the search may work modulo.
    u64 max_modulus = u64{1} << 62;
    /// Largest number of unresolved residue solutions carried between levels.
    std::size_t max_frontier = std::size_t{1} << 22;
};

/// Search primitive solutions of f = 0 mod p^m for m = 1..max_level. Returns
/// true on the first one with a coordinate i such that 2 v_p(df/dx_i) < m,
/// false if some level has no solutions left. Throws std::overflow_error when
/// the budget is exceeded and std::logic_error if max_level is reached with
/// solutions that are still unresolved (max_level was not a valid bound).
bool hensel_solvable(const TernaryCubic& f, u64 p, int max_level, const HenselBudget& budget = {});

/// 2 v_p(27 u1 u2 u3) + 3.
int hensel_depth(const DiagonalCubic& c, u64 p);

bool hensel_oracle(const DiagonalCubic& c, u64 p, const HenselBudget& budget = {});

/// First nonzero (x, y, z) in [-box, box]^3 with u1 x^3 + u2 y^3 + u3 z^3 = 0,
/// scanning each coordinate in the order 0, 1, -1, 2, -2, ...
std::optional<std::array<i64, 3>> global_search(const DiagonalCubic& c, i64 box);

}  // namespace selmer3

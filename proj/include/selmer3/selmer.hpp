#pragma once

// The phihat-Selmer group of Ehat_n as the set of triples (A, B, C) with
// ABC = cf(2n) whose cubic AX^3 + BY^3 + CZ^3 = 0 is everywhere locally
// solvable, the character-sum indicator g, the descent map theta, and a
// direct test of the phi-Selmer group through the trace forms
//   F_u = Tr(u (X + Y sqrt(-3))^3) + 2n Z^3.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "selmer3/arith.hpp"
#include "selmer3/curves.hpp"
#include "selmer3/eisenstein.hpp"
#include "selmer3/f3matrix.hpp"
#include "selmer3/localsolve.hpp"

namespace selmer3 {

struct SelmerTriple {
    u64 A = 1, B = 1, C = 1;

    DiagonalCubic cubic() const { return {A, B, C}; }
    friend auto operator<=>(const SelmerTriple&, const SelmerTriple&) = default;
};

/// One triple per placement of each prime power of cf into A, B or C; the i-th
/// prime power goes to A, B, C according to the i-th base-3 digit (1, 2, 0).
std::vector<SelmerTriple> enumerate_triples(const FactoredInt& cf);

/// Cubefree representative of the class A B^2 mod cubes.
u64 triple_class(const SelmerTriple& t);

/// Placement vector t in F_3^{omega(cf)}: 1 for A, 2 for B, 0 for C.
F3Vector placement(const SelmerTriple& t, const FactoredInt& cf);

/// Triple whose class A B^2 equals `cls`; nullopt when cls is not supported on cf
/// with exponents compatible with the prime powers of cf.
std::optional<SelmerTriple> triple_for_class(u64 cls, const FactoredInt& cf);

/// Cyclic shift (A, B, C) -> (C, A, B); multiplies the class by cf(2n).
SelmerTriple torsion_shift(const SelmerTriple& t);

struct PhiHatSelmer {
    u64 size = 0;
    int rank = 0;
    std::vector<SelmerTriple> solvable;  // in enumerate_triples order
};

/// Throws std::logic_error if the count is not a power of 3.
PhiHatSelmer selmer_phihat(const CubefreeN& n);
PhiHatSelmer selmer_phihat(u64 n);

/// Symbol tables for g over the factorizations of a fixed cf(2n).
class GContext {
public:
    GContext(const FactoredInt& cf, int eta);

    /// Prime powers of cf coprime to 3, in increasing order of the prime.
    std::span<const PrimePower> columns() const { return cols_; }
    u64 three_part() const { return three_part_; }
    int eps() const { return eps_; }

    /// g for the triple with column j placed in A, B, C for place[j] = 0, 1, 2
    /// and the 3-part of cf in A.
    int eval(std::span<const std::uint8_t> place) const;

private:
    int eps_ = 0;
    u64 three_part_ = 1;
    std::vector<PrimePower> cols_;
    std::vector<int> split_;                // column index of each split prime
    std::vector<int> rho_;                  // (rho / q_j)
    std::vector<std::vector<int>> chi_;     // chi_[s][j] = (q_j / pi_s)
    std::vector<int> chi3_;                 // (3-part / pi_s)
};

/// Throws std::invalid_argument unless (A, B, C) is in the set of pairwise
/// coprime cubefree triples with 3 not dividing B C.
int g_indicator(u64 A, u64 B, u64 C, int eta);

/// 3^{delta + eps} times the sum of g over the triples with 3 not dividing BC.
u64 selmer_phihat_via_g(const CubefreeN& n);
u64 selmer_phihat_via_g(u64 n);

struct ThetaImage {
    u64 first = 1, second = 1;  // cubefree representatives of y - n, y + n
    std::optional<SelmerTriple> triple;
};

/// theta(O) = (1, 1), theta((0, n)) = ((2n)^2, 2n), theta((0, -n)) = (2n, (2n)^2).
/// Throws std::invalid_argument if P is not on E_n, std::logic_error if the
/// class is not a member of the enumerated Selmer set.
ThetaImage theta_image(const RationalPoint& P, const CubefreeN& n);

/// Cubefree representative of the class of a nonzero rational mod cubes,
/// restricted to the primes of `support`; throws std::domain_error if the
/// remaining part is not a cube.
u64 cube_class(const mpq_class& r, const FactoredInt& support);

struct PhiSelmerCandidate {
    std::optional<int> e0;  // exponent of rho, absent when v_3(n) = 1
    std::vector<int> e;     // one exponent per split prime of cf(2n)
    EisensteinInt u;
};

/// All 3^{l+1} (or 3^l when v_3(n) = 1) candidates, e0 varying slowest.
std::vector<PhiSelmerCandidate> phi_candidates(const CubefreeN& n);

/// (2a-b) X^3 - 9b X^2 Y - 9(2a-b) X Y^2 + 9b Y^3 + 2n Z^3 for u = a + b rho.
TernaryCubic trace_form(const EisensteinInt& u, u64 n);

/// Local solvability of F_u at every p | 6 n N(u).
bool trace_form_solvable(const EisensteinInt& u, const CubefreeN& n, const HenselBudget& budget = {});

/// log_3 of the number of candidates passing; throws std::logic_error if the
/// passing exponent vectors do not form a subgroup.
int selmer_phi_direct(const CubefreeN& n, const HenselBudget& budget = {});

}  // namespace selmer3

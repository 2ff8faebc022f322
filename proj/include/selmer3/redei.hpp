#pragma once

// The matrix R of cubic residue symbol exponents attached to n:
//   columns q_j = p_j^{v_{p_j}(2n)} for the primes p_j != 3 of cf(2n), split primes first;
//   row 0 (present unless v_3(n) = 1): r_0j = (rho / q_j);
//   row i for the split prime p_i:     r_ij = (q_j / pi_i), r_ii = 2 (2n/q_i / pi_i).
// ker R describes the phihat-Selmer group modulo torsion and ker R^T the phi-Selmer group.

#include <set>
#include <span>
#include <vector>

#include "selmer3/arith.hpp"
#include "selmer3/f3matrix.hpp"
#include "selmer3/selmer.hpp"

namespace selmer3 {

F3Matrix build_matrix(const CubefreeN& n);

/// As build_matrix, with pi_i replaced by its conjugate wherever conjugate[i] is
/// set (i indexes the split primes in increasing order).
F3Matrix build_matrix(const CubefreeN& n, std::span<const bool> conjugate);

/// 3^dim if 2n = +-1 mod 9, otherwise 3^{dim+1}.
u64 selmer_size_from_kernel(const CubefreeN& n, std::size_t kernel_dim);

/// dim ker R^T.
std::size_t phi_rank(const CubefreeN& n);

/// Triples for every kernel vector: e_j = 1 puts q_j in A, 2 in B, 0 in C; the
/// 3-part of cf(2n) goes to C.
std::set<SelmerTriple> kernel_to_triples(const CubefreeN& n, const KernelBasis& kernel);

/// Closure of a set of triples under the cyclic shift (A, B, C) -> (C, A, B).
std::set<SelmerTriple> torsion_orbit(const std::set<SelmerTriple>& triples);

struct SelmerReport {
    u64 n = 0;
    u64 cf2n = 0;
    int v3 = 0, delta = 0, eps = 0, omega1 = 0, omega2 = 0;

    std::size_t matrix_rows = 0, matrix_cols = 0, matrix_rank = 0;
    std::size_t ker_dim = 0;

    u64 sel_phihat_size = 0;   // enumeration
    int sel_phihat_rank = 0;
    u64 sel_phihat_size_g = 0;  // character sum
    int sel_phihat_rank_matrix = 0;
    int sel_phi_rank_matrix = 0;
    std::optional<int> sel_phi_rank_direct;

    bool tamratio_ok = false;     // rank Sel_phihat = rank Sel_phi + omega_2(cf(2n)) + delta
    bool kernel_match_ok = false; // sizes agree and the kernel triples generate the solvable set
    bool g_identity_ok = false;
    std::optional<bool> direct_match_ok;

    bool exceptional() const { return sel_phi_rank_matrix != 0; }
    bool ok() const { return tamratio_ok && kernel_match_ok && g_identity_ok && direct_match_ok.value_or(true); }
};

struct ReportOptions {
    bool direct_phi = false;
    HenselBudget budget{};
};

SelmerReport selmer_report(const CubefreeN& n, const ReportOptions& opts = {});

}  // namespace selmer3

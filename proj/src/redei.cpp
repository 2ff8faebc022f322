#include "selmer3/redei.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "selmer3/eisenstein.hpp"

namespace selmer3 {

namespace {

u64 ipow(u64 b, int e) {
    u64 r = 1;
    for (int i = 0; i < e; ++i) r = checked_mul(r, b);
    return r;
}

struct Column {
    PrimePower pp;
    u64 q = 1;
};

std::vector<Column> matrix_columns(const CubefreeN& n) {
    std::vector<Column> split, inert;
    for (const auto& pp : n.cf2n.factors) {
        if (pp.p == 3) continue;
        (pp.p % 3 == 1 ? split : inert).push_back({pp, ipow(pp.p, pp.e)});
    }
    split.insert(split.end(), inert.begin(), inert.end());
    return split;
}

int entry(UnityRootExp s, const char* what) {
    if (s.is_zero()) throw std::logic_error(std::string("build_matrix: zero symbol in ") + what);
    return s.exponent();
}

}  // namespace

F3Matrix build_matrix(const CubefreeN& n) { return build_matrix(n, {}); }

F3Matrix build_matrix(const CubefreeN& n, std::span<const bool> conjugate) {
    const auto cols = matrix_columns(n);
    std::size_t ell = 0;
    while (ell < cols.size() && cols[ell].pp.p % 3 == 1) ++ell;
    const bool rho_row = n.v3 != 1;
    const std::size_t rows = ell + (rho_row ? 1 : 0);
    F3Matrix m(rows, cols.size());
    for (const auto& c : cols) m.col_labels.push_back(c.q);
    if (rho_row) m.row_labels.push_back(0);
    for (std::size_t i = 0; i < ell; ++i) m.row_labels.push_back(cols[i].pp.p);

    std::size_t r = 0;
    if (rho_row) {
        for (std::size_t j = 0; j < cols.size(); ++j)
            m.set(r, j, entry(rho_symbol(FactoredInt{cols[j].q, {cols[j].pp}}), "rho row"));
        ++r;
    }
    const u64 two_n = checked_mul(u64{2}, n.n);
    for (std::size_t i = 0; i < ell; ++i, ++r) {
        PrimeAboveP prime = primes_above(cols[i].pp.p);
        if (i < conjugate.size() && conjugate[i]) {
            prime.pi = prime.pi.conj();
            prime.rho_residue = mulmod(prime.rho_residue, prime.rho_residue, prime.p);
        }
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (j == i) {
                const u64 rest = (two_n / cols[i].q) % prime.p;
                m.set(r, j, (2 * entry(cubic_symbol_rational(static_cast<i64>(rest), prime), "diagonal")) % 3);
            } else {
                m.set(r, j, entry(cubic_symbol_rational(static_cast<i64>(cols[j].q % prime.p), prime), "row"));
            }
        }
    }
    return m;
}

u64 selmer_size_from_kernel(const CubefreeN& n, std::size_t kernel_dim) {
    const u64 r = checked_mul(u64{2}, n.n) % 9;
    const int e = static_cast<int>(kernel_dim) + ((r == 1 || r == 8) ? 0 : 1);
    return ipow(3, e);
}

std::size_t phi_rank(const CubefreeN& n) { return rank_kernel(build_matrix(n).transpose()).kernel.dim; }

std::set<SelmerTriple> kernel_to_triples(const CubefreeN& n, const KernelBasis& kernel) {
    const auto cols = matrix_columns(n);
    const u64 three = n.cf2n.prime_part(3);
    std::set<SelmerTriple> out;
    for (const auto& e : span_elements(kernel, cols.size())) {
        SelmerTriple t{1, 1, three};
        for (std::size_t j = 0; j < cols.size(); ++j) {
            switch (e.get(j)) {
                case 1: t.A *= cols[j].q; break;
                case 2: t.B *= cols[j].q; break;
                default: t.C *= cols[j].q; break;
            }
        }
        out.insert(t);
    }
    return out;
}

std::set<SelmerTriple> torsion_orbit(const std::set<SelmerTriple>& triples) {
    std::set<SelmerTriple> out;
    for (const auto& t : triples) {
        const SelmerTriple s1 = torsion_shift(t);
        out.insert(t);
        out.insert(s1);
        out.insert(torsion_shift(s1));
    }
    return out;
}

SelmerReport selmer_report(const CubefreeN& n, const ReportOptions& opts) {
    SelmerReport r;
    r.n = n.n;
    r.cf2n = n.cf2n.n;
    r.v3 = n.v3;
    r.delta = n.delta;
    r.eps = n.eps;
    r.omega1 = n.omega1;
    r.omega2 = n.omega2;

    const PhiHatSelmer sel = selmer_phihat(n);
    r.sel_phihat_size = sel.size;
    r.sel_phihat_rank = sel.rank;
    r.sel_phihat_size_g = selmer_phihat_via_g(n);

    const F3Matrix m = build_matrix(n);
    const RankKernel rk = rank_kernel(m);
    r.matrix_rows = m.rows();
    r.matrix_cols = m.cols();
    r.matrix_rank = rk.rank;
    r.ker_dim = rk.kernel.dim;
    const u64 size_matrix = selmer_size_from_kernel(n, rk.kernel.dim);
    r.sel_phihat_rank_matrix = static_cast<int>(rk.kernel.dim) + (size_matrix > ipow(3, static_cast<int>(rk.kernel.dim)) ? 1 : 0);
    r.sel_phi_rank_matrix = static_cast<int>(m.rows() - rk.rank);

    r.tamratio_ok = r.sel_phihat_rank == r.sel_phi_rank_matrix + n.omega2 + n.delta;
    const std::set<SelmerTriple> solvable(sel.solvable.begin(), sel.solvable.end());
    r.kernel_match_ok = size_matrix == sel.size && torsion_orbit(kernel_to_triples(n, rk.kernel)) == solvable;
    r.g_identity_ok = r.sel_phihat_size_g == sel.size;

    if (opts.direct_phi) {
        r.sel_phi_rank_direct = selmer_phi_direct(n, opts.budget);
        r.direct_match_ok = *r.sel_phi_rank_direct == r.sel_phi_rank_matrix;
    }
    return r;
}

}  // namespace selmer3

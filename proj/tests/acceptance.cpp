// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "selmer3/curves.hpp"
#include "selmer3/eisenstein.hpp"
#include "selmer3/localsolve.hpp"
#include "selmer3/redei.hpp"
#include "selmer3/selmer.hpp"
#include "selmer3/stats.hpp"

using namespace selmer3;

namespace {

using E = EisensteinInt;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void fail(const std::string& why) {
        if (pass) detail << "first failure: " << why << "; ";
        pass = false;
    }
};

int failed = 0;

void criterion(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << ": " << o.detail.str() << "("
              << std::fixed << std::setprecision(1) << secs << "s)" << std::endl;
}

std::string str(u64 v) { return std::to_string(v); }

// --- 1 -------------------------------------------------------------------------

void exact_identities(Outcome& o) {
    u64 count = 0;
    for (const auto& c : enumerate_cubefree(5000)) {
        const auto rk = rank_kernel(build_matrix(c));
        const auto s = selmer_phihat(c);
        const auto inv = c.invariants();
        if (selmer_size_from_kernel(c, rk.kernel.dim) != s.size) o.fail("size n=" + str(c.n));
        if (s.rank != static_cast<int>(phi_rank(c)) + inv.omega2 + inv.delta) o.fail("rank n=" + str(c.n));
        ++count;
    }
    o.detail << count << " cubefree n <= 5000; ";
}

// --- 2 -------------------------------------------------------------------------

void compare_places(const DiagonalCubic& cubic, Outcome& o, u64& checks) {
    for (u64 p : bad_primes(cubic)) {
        ++checks;
        if (solvable_at(cubic, p).solvable != hensel_oracle(cubic, p))
            o.fail(to_string(cubic) + " p=" + str(p));
    }
}

void oracle_equivalence(Outcome& o) {
    u64 checks = 0, triples = 0;
    for (const auto& c : enumerate_cubefree(1000))
        for (const auto& t : enumerate_triples(c.cf2n)) {
            compare_places(t.cubic(), o, checks);
            ++triples;
        }
    std::mt19937_64 rng(20240601);
    u64 random_triples = 0;
    while (random_triples < 1000) {
        const u64 a = 1 + rng() % 500, b = 1 + rng() % 500, c = 1 + rng() % 500;
        if (!is_cubefree(a) || !is_cubefree(b) || !is_cubefree(c)) continue;
        if (std::gcd(a, b) != 1 || std::gcd(a, c) != 1 || std::gcd(b, c) != 1) continue;
        compare_places(DiagonalCubic::make(a, b, c), o, checks);
        ++random_triples;
    }
    o.detail << triples << " triples from n <= 1000 and " << random_triples << " random triples, " << checks
             << " local decisions; ";
}

// --- 3, 4 ----------------------------------------------------------------------

void g_identity(Outcome& o) {
    u64 count = 0;
    for (const auto& c : enumerate_cubefree(2000)) {
        if (selmer_phihat_via_g(c) != selmer_phihat(c).size) o.fail("n=" + str(c.n));
        ++count;
    }
    o.detail << count << " n; ";
}

void direct_phi(Outcome& o) {
    u64 count = 0, exceptional = 0;
    for (const auto& c : enumerate_cubefree(200)) {
        const int m = static_cast<int>(phi_rank(c));
        if (selmer_phi_direct(c) != m) o.fail("n=" + str(c.n));
        exceptional += m != 0;
        ++count;
    }
    o.detail << count << " n, " << exceptional << " with nonzero rank; ";
}

// --- 5 -------------------------------------------------------------------------

std::vector<E> primary_primes(i64 bound) {
    std::vector<E> out;
    for (u64 p : primes_up_to(static_cast<u64>(bound))) {
        if (p == 3) continue;
        const auto pr = primes_above(p);
        if (pr.kind == PrimeKind::split) {
            out.push_back(pr.pi);
            out.push_back(pr.pi.conj());
        } else if (static_cast<i64>(p * p) <= bound) {
            out.push_back(E{-static_cast<i64>(p)});
        }
    }
    return out;
}

int valuation(E alpha, const E& pi) {
    int v = 0;
    while (divides(pi, alpha)) {
        alpha = exact_div(alpha, pi);
        ++v;
    }
    return v;
}

void symbol_laws(Outcome& o) {
    const auto primes = primary_primes(2000);
    u64 pairs = 0;
    for (const E& a : primes)
        for (const E& b : primes) {
            if (a == b) continue;
            ++pairs;
            if (cubic_symbol(a, b) != cubic_symbol(b, a)) o.fail("reciprocity " + to_string(a) + " " + to_string(b));
        }
    u64 units = 0;
    for (u64 u = 1; u <= 10000; ++u) {
        if (u % 3 == 0) continue;
        ++units;
        const bool trivial = cubic_symbol(E::rho(), u).exponent() == 0;
        if (trivial != (u % 9 == 1 || u % 9 == 8)) o.fail("supplementary u=" + str(u));
    }

    // sum over xi in (Z/N)^x of (xi/alpha)_3 for every alpha coprime to 3 with 1 < N(alpha) <= 1500
    u64 alphas = 0, full = 0, literal_exceptions = 0;
    for (i64 a = -45; a <= 45; ++a)
        for (i64 b = -45; b <= 45; ++b) {
            const E alpha{a, b};
            const i64 N = norm(alpha);
            if (N <= 1 || N > 1500 || N % 3 == 0) continue;
            ++alphas;
            std::vector<std::pair<E, int>> fac;
            bool cube_part = true;
            for (const auto& [p, e] : factorize(static_cast<u64>(N)).factors) {
                const auto pr = primes_above(p);
                if (pr.kind == PrimeKind::inert) {
                    fac.emplace_back(pr.pi, e / 2);
                    continue;
                }
                const int v1 = valuation(alpha, pr.pi), v2 = valuation(alpha, pr.pi.conj());
                fac.emplace_back(pr.pi, v1);
                fac.emplace_back(pr.pi.conj(), v2);
                if ((v1 - v2) % 3) cube_part = false;
            }
            std::array<i64, 3> counts{0, 0, 0};
            for (i64 xi = 1; xi < N; ++xi) {
                if (std::gcd(xi, N) != 1) continue;
                int e = 0;
                for (const auto& [pi, v] : fac) e += v * cubic_symbol_prime(E{xi}, pi).exponent();
                ++counts[static_cast<std::size_t>(e % 3)];
            }
            const bool is_full = counts[1] == 0 && counts[2] == 0;
            const bool is_zero = counts[0] == counts[1] && counts[1] == counts[2];
            // alpha = unit * integer * cube exactly when the valuations at conjugate primes agree mod 3
            if (cube_part ? !is_full : !is_zero) o.fail("embedding alpha=" + to_string(alpha));
            full += is_full;
            bool literal = alpha.b == 0;
            for (i64 x = -12; x <= 12 && !literal; ++x)
                for (i64 y = -12; y <= 12 && !literal; ++y) literal = E{x, y} * E{x, y} * E{x, y} == alpha;
            if (literal && !is_full) o.fail("embedding (cube or integer) alpha=" + to_string(alpha));
            literal_exceptions += is_full && !literal;
        }
    o.detail << pairs << " reciprocity pairs, " << units << " supplementary cases, " << alphas << " alpha (" << full
             << " with full sum, " << literal_exceptions << " of them unit or integer multiples of cubes); ";
}

// --- 6 -------------------------------------------------------------------------

void hand_fixtures(Outcome& o) {
    struct Fix {
        u64 n, size;
        int rank_hat, rank_phi;
        bool exceptional;
    };
    for (const Fix& f : {Fix{1, 3, 1, 0, false}, Fix{3, 9, 2, 0, false}, Fix{4, 1, 0, 1, true}, Fix{5, 3, 1, 0, false},
                         Fix{10, 9, 2, 0, false}}) {
        const auto r = selmer_report(make_cubefree(f.n));
        if (r.sel_phihat_size != f.size || r.sel_phihat_rank != f.rank_hat || r.sel_phi_rank_matrix != f.rank_phi ||
            r.exceptional() != f.exceptional || !r.ok())
            o.fail("n=" + str(f.n));
    }
    const auto m5 = build_matrix(make_cubefree(5));
    if (m5.rows() != 1 || m5.cols() != 2 || m5.at(0, 0) != 1 || m5.at(0, 1) != 2) o.fail("matrix n=5");
    const auto mom = moments(10, 1);
    if (mom.all.weighted != mpq_class(11, 9)) o.fail("weighted moment N=10 " + mom.all.weighted.get_str());
    const auto dens = exceptional_density(10, decade_buckets(10));
    if (dens.size() != 1 || !dens[0].proportion || *dens[0].proportion != mpq_class(1, 9)) o.fail("density N=10");
    o.detail << "n = 1, 3, 4, 5, 10; moment(10) = " << mom.all.weighted.get_str() << ", density(10) = "
             << (dens.empty() || !dens[0].proportion ? std::string("-") : dens[0].proportion->get_str()) << "; ";
}

// --- 7 -------------------------------------------------------------------------

void isogeny_suite(Outcome& o) {
    u64 points = 0;
    for (u64 n = 1; n <= 20; ++n) {
        const CurveId curve{n, Side::E};
        auto pts = search_points(curve, 60);
        pts.push_back(RationalPoint::at_infinity());
        pts.push_back(RationalPoint::affine(0, static_cast<long>(n)));
        pts.push_back(RationalPoint::affine(0, -static_cast<long>(n)));
        for (const auto& P : pts) {
            ++points;
            if (!on_curve(P, curve)) o.fail("off curve n=" + str(n));
            if (phihat(phi(P, n), n) != multiply(P, 3, curve)) o.fail("n=" + str(n) + " P=" + to_string(P));
        }
    }
    o.detail << points << " points; ";
}

// --- 8 -------------------------------------------------------------------------

void choice_independence(Outcome& o) {
    u64 matrices = 0;
    for (const auto& c : enumerate_cubefree(1000)) {
        const auto base = build_matrix(c);
        const std::size_t l = base.rows() - (c.v3 != 1 ? 1 : 0);
        const std::size_t k0 = rank_kernel(base).kernel.dim, k1 = rank_kernel(base.transpose()).kernel.dim;
        for (u64 mask = 1; mask < (u64{1} << l); ++mask) {
            std::array<bool, 16> conj{};
            for (std::size_t i = 0; i < l; ++i) conj[i] = (mask >> i) & 1;
            const auto m = build_matrix(c, std::span<const bool>(conj.data(), l));
            ++matrices;
            if (rank_kernel(m).kernel.dim != k0 || rank_kernel(m.transpose()).kernel.dim != k1)
                o.fail("n=" + str(c.n) + " mask=" + str(mask));
        }
    }
    o.detail << matrices << " conjugate matrices; ";
}

// --- 9 -------------------------------------------------------------------------

void statistical_trends(Outcome& o) {
    const std::array<u64, 4> marks{1000, 10000, 100000, 1000000};
    MomentAccumulator acc;
    DensityAccumulator dens(decade_buckets(marks.back()));
    std::vector<MomentReport> snaps;
    std::vector<std::pair<u64, u64>> cumulative;  // exceptional, count
    u64 exceptional = 0, count = 0;
    std::size_t next = 0;
    auto snapshot = [&] {
        snaps.push_back(acc.report(marks[next], 1));
        cumulative.emplace_back(exceptional, count);
        ++next;
    };
    SweepOptions opts;
    const auto t0 = std::chrono::steady_clock::now();
    const auto summary = sweep(marks.back(), opts, [&](const SweepRecord& r) {
        while (next < marks.size() && r.n > marks[next]) snapshot();
        acc.add(r);
        dens.add(r.n, r.exceptional);
        exceptional += r.exceptional;
        ++count;
    });
    while (next < marks.size()) snapshot();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!summary.ok()) o.fail("sweep reported " + str(summary.failures) + " failures");

    std::vector<mpq_class> decade;
    for (const auto& row : dens.rows())
        if (row.lo > 100 && row.proportion) decade.push_back(*row.proportion);

    if (!(snaps[1].all.weighted > 1)) o.fail("weighted moment at 10^4 not > 1");
    for (std::size_t i = 1; i < snaps.size(); ++i) {
        if (snaps[i].all.weighted > snaps[i - 1].all.weighted)
            o.fail("weighted moment increases from N=" + str(marks[i - 1]) + " to N=" + str(marks[i]));
        if (!(snaps[i].all.raw > snaps[i - 1].all.raw))
            o.fail("raw moment not increasing at N=" + str(marks[i]));
    }
    for (std::size_t i = 1; i < decade.size(); ++i)
        if (decade[i] > decade[i - 1]) o.fail("decade proportion increases at decade " + str(i));

    o.detail << std::setprecision(6);
    o.detail << "weighted";
    for (const auto& s : snaps) o.detail << " " << s.all.weighted.get_d();
    o.detail << "; raw";
    for (const auto& s : snaps) o.detail << " " << s.all.raw.get_d();
    o.detail << "; decade proportions";
    for (const auto& d : decade) o.detail << " " << d.get_d();
    o.detail << "; cumulative proportions";
    for (const auto& [e, c] : cumulative) o.detail << " " << static_cast<double>(e) / static_cast<double>(c);
    o.detail << "; sweep " << std::fixed << std::setprecision(1) << secs << "s; ";
}

// --- 10 ------------------------------------------------------------------------

void ck_truncation(Outcome& o) {
    const auto c4 = compute_ck(1, 10000), c5 = compute_ck(1, 100000), c6 = compute_ck(1, 1000000);
    if (c4.prefactor != mpq_class(323, 91)) o.fail("prefactor " + c4.prefactor.get_str());
    const long double d1 = std::fabs(c5.value - c4.value), d2 = std::fabs(c6.value - c5.value);
    if (!(d2 < d1)) o.fail("differences do not shrink");
    o.detail << "prefactor " << c4.prefactor.get_str() << ", c_1 = " << std::setprecision(12)
             << static_cast<double>(c4.value) << ", " << static_cast<double>(c5.value) << ", "
             << static_cast<double>(c6.value) << "; ";
}

}  // namespace

int main() {
    criterion(1, "exact identities n <= 5000", exact_identities);
    criterion(2, "closed-form local solvability vs Hensel oracle", oracle_equivalence);
    criterion(3, "character-sum identity n <= 2000", g_identity);
    criterion(4, "direct Sel_phi vs ker R^T n <= 200", direct_phi);
    criterion(5, "cubic symbol laws", symbol_laws);
    criterion(6, "hand fixtures", hand_fixtures);
    criterion(7, "phihat(phi(P)) = [3]P for n <= 20", isogeny_suite);
    criterion(8, "conjugate prime choices n <= 1000", choice_independence);
    criterion(9, "statistical trends to 10^6", statistical_trends);
    criterion(10, "c_1 truncation", ck_truncation);
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << failed << " of 10" << std::endl;
    return failed ? 1 : 0;
}

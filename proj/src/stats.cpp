#include "selmer3/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "selmer3/localsolve.hpp"
#include "selmer3/selmer.hpp"

namespace selmer3 {

// --- records -------------------------------------------------------------------

SweepRecord make_record(const SelmerReport& r) {
    SweepRecord s;
    s.n = r.n;
    s.cf2n = r.cf2n;
    s.v3 = r.v3;
    s.omega1 = r.omega1;
    s.omega2 = r.omega2;
    s.delta = r.delta;
    s.eps = r.eps;
    s.sel_phihat_size = r.sel_phihat_size;
    s.sel_phihat_rank = r.sel_phihat_rank;
    s.sel_phi_rank = r.sel_phi_rank_matrix;
    s.matrix_rows = r.matrix_rows;
    s.matrix_cols = r.matrix_cols;
    s.ker_dim = r.ker_dim;
    s.exceptional = r.exceptional();
    s.checks = {r.kernel_match_ok, r.tamratio_ok, r.g_identity_ok};
    return s;
}

SweepRecord sweep_record(const CubefreeN& n) { return make_record(selmer_report(n)); }

std::string to_json(const SweepRecord& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["cf2n"] = r.cf2n;
    j["v3"] = r.v3;
    j["omega1"] = r.omega1;
    j["omega2"] = r.omega2;
    j["delta"] = r.delta;
    j["eps"] = r.eps;
    j["sel_phihat_size"] = r.sel_phihat_size;
    j["sel_phihat_rank"] = r.sel_phihat_rank;
    j["sel_phi_rank"] = r.sel_phi_rank;
    j["matrix_rows"] = r.matrix_rows;
    j["matrix_cols"] = r.matrix_cols;
    j["ker_dim"] = r.ker_dim;
    j["exceptional"] = r.exceptional;
    j["checks"] = {{"kernel_match", r.checks.kernel_match},
                   {"tamratio", r.checks.tamratio},
                   {"g_identity", r.checks.g_identity}};
    return j.dump();
}

// --- sweep -----------------------------------------------------------------------

u64 oracle_check(const CubefreeN& n, u64 prime_limit, u64& checked, u64& skipped) {
    u64 bad = 0;
    for (const auto& t : enumerate_triples(n.cf2n)) {
        const DiagonalCubic c = t.cubic();
        for (u64 p : bad_primes(c)) {
            if (p > prime_limit) {
                ++skipped;
                continue;
            }
            ++checked;
            if (hensel_oracle(c, p) != solvable_at(c, p).solvable) ++bad;
        }
    }
    return bad;
}

namespace {

struct BlockResult {
    std::vector<SweepRecord> records;
    u64 oracle_n = 0, oracle_checks = 0, oracle_skipped = 0, oracle_failures = 0;
    std::optional<std::size_t> failure;  // index into records
    std::string diagnostic;
};

BlockResult process_block(u64 lo, u64 hi, const SweepOptions& opts) {
    BlockResult out;
    for (const CubefreeN& n : cubefree_block(lo, hi)) {
        SweepRecord rec;
        try {
            rec = sweep_record(n);
        } catch (const std::exception& e) {
            rec.n = n.n;
            out.records.push_back(rec);
            out.failure = out.records.size() - 1;
            out.diagnostic = "n=" + std::to_string(n.n) + ": " + e.what();
            return out;
        }
        out.records.push_back(rec);
        if (!rec.checks.all()) {
            out.failure = out.records.size() - 1;
            out.diagnostic = "n=" + std::to_string(n.n) + ": check failed " + to_json(rec);
            return out;
        }
        if (opts.oracle && (n.n <= opts.oracle_dense || (opts.oracle_every && n.n % opts.oracle_every == 0))) {
            ++out.oracle_n;
            const u64 bad = oracle_check(n, opts.oracle_prime_limit, out.oracle_checks, out.oracle_skipped);
            if (bad) {
                out.oracle_failures += bad;
                out.failure = out.records.size() - 1;
                out.diagnostic = "n=" + std::to_string(n.n) + ": Hensel oracle disagrees with the local criterion";
                return out;
            }
        }
    }
    return out;
}

}  // namespace

SweepSummary sweep(u64 N, const SweepOptions& opts, const std::function<void(const SweepRecord&)>& sink) {
    if (N < 1) throw std::invalid_argument("sweep: N must be positive");
    if (opts.block_size == 0) throw std::invalid_argument("sweep: block size must be positive");
    const unsigned jobs = std::max(1u, opts.jobs);
    SweepSummary sum;
    sum.N = N;
    u64 lo = 1;
    while (lo <= N && !sum.aborted) {
        std::vector<std::pair<u64, u64>> wave;
        for (unsigned j = 0; j < jobs && lo <= N; ++j) {
            const u64 hi = std::min(N + 1, lo + opts.block_size);
            wave.emplace_back(lo, hi);
            lo = hi;
        }
        std::vector<BlockResult> results(wave.size());
        if (wave.size() == 1) {
            results[0] = process_block(wave[0].first, wave[0].second, opts);
        } else {
            std::vector<std::thread> workers;
            for (std::size_t i = 0; i < wave.size(); ++i)
                workers.emplace_back([&, i] { results[i] = process_block(wave[i].first, wave[i].second, opts); });
            for (auto& w : workers) w.join();
        }
        for (const auto& br : results) {
            const std::size_t upto = br.failure ? *br.failure + 1 : br.records.size();
            for (std::size_t i = 0; i < upto; ++i) {
                const auto& rec = br.records[i];
                ++sum.count;
                if (rec.exceptional) ++sum.exceptional;
                if (sink) sink(rec);
            }
            sum.oracle_n += br.oracle_n;
            sum.oracle_checks += br.oracle_checks;
            sum.oracle_skipped += br.oracle_skipped;
            sum.oracle_failures += br.oracle_failures;
            if (br.failure) {
                if (br.oracle_failures == 0) ++sum.failures;
                sum.first_failure = br.records[*br.failure];
                sum.diagnostic = br.diagnostic;
                sum.aborted = true;
                break;
            }
        }
    }
    return sum;
}

// --- moments ---------------------------------------------------------------------

void MomentAccumulator::add(const SweepRecord& r) {
    Histo& h = by_class_[static_cast<int>(r.n % 9)];
    ++h.count;
    const int tam = r.delta + r.omega2;
    ++h.weighted[r.sel_phihat_rank - tam];
    ++h.raw[r.sel_phihat_rank];
    ++h.tamagawa[tam];
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    for (const auto& [cls, h] : other.by_class_) {
        Histo& mine = by_class_[cls];
        mine.count += h.count;
        for (const auto& [e, c] : h.weighted) mine.weighted[e] += c;
        for (const auto& [e, c] : h.raw) mine.raw[e] += c;
        for (const auto& [e, c] : h.tamagawa) mine.tamagawa[e] += c;
    }
}

u64 MomentAccumulator::count() const {
    u64 c = 0;
    for (const auto& [cls, h] : by_class_) c += h.count;
    return c;
}

namespace {

mpq_class pow3(long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 3, static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? mpq_class(mpz_class(1), p) : mpq_class(p);
}

mpq_class histo_sum(const std::map<int, u64>& h, int k) {
    mpq_class s = 0;
    for (const auto& [e, c] : h) s += pow3(static_cast<long>(k) * e) * mpz_class(static_cast<unsigned long>(c));
    return s;
}

}  // namespace

MomentReport MomentAccumulator::report(u64 N, int k) const {
    if (k < 1) throw std::invalid_argument("moments: k must be positive");
    MomentReport rep;
    rep.N = N;
    rep.k = k;
    mpq_class w = 0, r = 0, t = 0;
    for (const auto& [cls, h] : by_class_) {
        MomentValues v;
        v.count = h.count;
        const mpq_class sw = histo_sum(h.weighted, k), sr = histo_sum(h.raw, k), st = histo_sum(h.tamagawa, k);
        w += sw;
        r += sr;
        t += st;
        const mpq_class cnt(mpz_class(static_cast<unsigned long>(h.count)));
        v.weighted = sw / cnt;
        v.raw = sr / cnt;
        v.tamagawa = st / cnt;
        rep.per_class[cls] = v;
    }
    rep.all.count = count();
    if (rep.all.count) {
        const mpq_class cnt(mpz_class(static_cast<unsigned long>(rep.all.count)));
        rep.all.weighted = w / cnt;
        rep.all.raw = r / cnt;
        rep.all.tamagawa = t / cnt;
    }
    return rep;
}

MomentReport moments(u64 N, int k, unsigned jobs) {
    MomentAccumulator acc;
    SweepOptions opts;
    opts.jobs = jobs;
    opts.oracle = false;
    const auto s = sweep(N, opts, [&](const SweepRecord& r) { acc.add(r); });
    if (!s.ok()) throw std::logic_error("moments: sweep failed: " + s.diagnostic);
    return acc.report(N, k);
}

// --- density -------------------------------------------------------------------

void validate_buckets(const std::vector<std::pair<u64, u64>>& buckets, u64 N) {
    u64 next = 1;
    for (const auto& [lo, hi] : buckets) {
        if (lo != next || hi < lo) throw std::invalid_argument("buckets must partition [1, N] in increasing order");
        next = hi + 1;
    }
    if (buckets.empty() || next != N + 1) throw std::invalid_argument("buckets must partition [1, N]");
}

std::vector<std::pair<u64, u64>> decade_buckets(u64 N) {
    std::vector<std::pair<u64, u64>> b;
    u64 lo = 1, hi = 10;
    while (lo <= N) {
        b.emplace_back(lo, std::min(hi, N));
        lo = hi + 1;
        if (hi > N / 10) hi = N;
        else hi *= 10;
    }
    return b;
}

DensityAccumulator::DensityAccumulator(std::vector<std::pair<u64, u64>> buckets) {
    for (const auto& [lo, hi] : buckets) rows_.push_back({lo, hi, 0, 0, std::nullopt});
}

void DensityAccumulator::add(u64 n, bool exceptional) {
    auto it = std::upper_bound(rows_.begin(), rows_.end(), n, [](u64 v, const DensityRow& r) { return v < r.lo; });
    if (it == rows_.begin()) throw std::out_of_range("DensityAccumulator: n outside the buckets");
    --it;
    if (n > it->hi) throw std::out_of_range("DensityAccumulator: n outside the buckets");
    ++it->cubefree;
    if (exceptional) ++it->exceptional;
    it->proportion = mpq_class(mpz_class(static_cast<unsigned long>(it->exceptional)),
                               mpz_class(static_cast<unsigned long>(it->cubefree)));
    it->proportion->canonicalize();
}

std::vector<DensityRow> exceptional_density(u64 N, const std::vector<std::pair<u64, u64>>& buckets, unsigned jobs) {
    validate_buckets(buckets, N);
    DensityAccumulator acc(buckets);
    SweepOptions opts;
    opts.jobs = jobs;
    opts.oracle = false;
    const auto s = sweep(N, opts, [&](const SweepRecord& r) { acc.add(r.n, r.exceptional); });
    if (!s.ok()) throw std::logic_error("exceptional_density: sweep failed: " + s.diagnostic);
    return acc.rows();
}

// --- constants -------------------------------------------------------------------

ConstantReport compute_ck(int k, u64 prime_bound) {
    if (k < 1) throw std::invalid_argument("compute_ck: k must be positive");
    if (k > 20) throw std::invalid_argument("compute_ck: k too large");
    if (prime_bound < 10) throw std::invalid_argument("compute_ck: prime bound must be at least 10");
    ConstantReport rep;
    rep.k = k;
    rep.prime_bound = prime_bound;

    mpz_class p3k;
    mpz_ui_pow_ui(p3k.get_mpz_t(), 3, static_cast<unsigned long>(k));
    const mpq_class a = 2 * 3 * mpq_class(p3k) + 1;
    mpq_class three_over(mpz_class(3), p3k);
    three_over.canonicalize();
    const mpq_class b = 3 * mpq_class(p3k) + three_over + 7;
    const unsigned long g_arg = static_cast<unsigned long>(mpz_class((p3k + 1) / 2).get_ui());
    mpz_fac_ui(rep.gamma.get_mpz_t(), g_arg - 1);
    rep.prefactor = a * b / (91 * mpq_class(rep.gamma));
    rep.prefactor.canonicalize();

    const long double t = std::pow(3.0L, k);
    const long double half = (t - 1) / 2;
    long double log_prod = 0;
    for (u64 p : primes_up_to(prime_bound)) {
        const long double x = 1.0L / static_cast<long double>(p);
        if (p % 3 == 2 && p != 2) log_prod += std::log1p(t * x + t * x * x) - std::log1p(x + x * x);
        log_prod += half * std::log1p(-x);
    }
    rep.product = std::exp(log_prod);
    rep.value = static_cast<long double>(rep.prefactor.get_d()) * rep.product;
    return rep;
}

}  // namespace selmer3

#pragma once

// Sweep harness over the cubefree n <= N, moment and exceptional-density
// accumulators, and the constants c_k of the moment asymptotics.

#include <gmpxx.h>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selmer3/arith.hpp"
#include "selmer3/redei.hpp"

namespace selmer3 {

struct SweepChecks {
    bool kernel_match = false;
    bool tamratio = false;
    bool g_identity = false;

    bool all() const { return kernel_match && tamratio && g_identity; }
};

struct SweepRecord {
    u64 n = 0;
    u64 cf2n = 0;
    int v3 = 0, omega1 = 0, omega2 = 0, delta = 0, eps = 0;
    u64 sel_phihat_size = 0;
    int sel_phihat_rank = 0;
    int sel_phi_rank = 0;
    std::size_t matrix_rows = 0, matrix_cols = 0, ker_dim = 0;
    bool exceptional = false;
    SweepChecks checks;
};

SweepRecord make_record(const SelmerReport& r);
SweepRecord sweep_record(const CubefreeN& n);

/// One JSON object, keys in declaration order, no trailing newline.
std::string to_json(const SweepRecord& r);

struct SweepOptions {
    unsigned jobs = 1;
    u64 block_size = 1u << 14;
    /// Hensel oracle on every n <= oracle_dense and on every n divisible by oracle_every.
    u64 oracle_dense = 1000;
    u64 oracle_every = 97;
    /// Primes above this are not sent to the oracle (counted as skipped).
    u64 oracle_prime_limit = 20000;
    bool oracle = true;
};

struct SweepSummary {
    u64 N = 0;
    u64 count = 0;
    u64 exceptional = 0;
    u64 failures = 0;
    u64 oracle_n = 0;
    u64 oracle_checks = 0;
    u64 oracle_skipped = 0;
    u64 oracle_failures = 0;
    bool aborted = false;
    std::optional<SweepRecord> first_failure;
    std::string diagnostic;

    bool ok() const { return failures == 0 && oracle_failures == 0; }
};

/// Oracle agreement for every prime of every triple of cf(2n): returns the
/// number of disagreements; checked/skipped counters are incremented.
u64 oracle_check(const CubefreeN& n, u64 prime_limit, u64& checked, u64& skipped);

/// Records are delivered to `sink` in increasing n regardless of `jobs`. The
/// first failing record is delivered and the sweep stops.
SweepSummary sweep(u64 N, const SweepOptions& opts, const std::function<void(const SweepRecord&)>& sink);

struct MomentValues {
    u64 count = 0;
    mpq_class weighted, raw, tamagawa;
};

struct MomentReport {
    u64 N = 0;
    int k = 1;
    MomentValues all;
    std::map<int, MomentValues> per_class;  // n mod 9
};

/// Exponent histograms of the weighted size 3^{rank - delta - omega_2}, the raw
/// size 3^rank and the Tamagawa factor 3^{delta + omega_2}, per n mod 9.
class MomentAccumulator {
public:
    void add(const SweepRecord& r);
    void merge(const MomentAccumulator& other);
    MomentReport report(u64 N, int k) const;
    u64 count() const;

private:
    struct Histo {
        u64 count = 0;
        std::map<int, u64> weighted, raw, tamagawa;
    };
    std::map<int, Histo> by_class_;
};

MomentReport moments(u64 N, int k, unsigned jobs = 1);

struct DensityRow {
    u64 lo = 0, hi = 0;
    u64 cubefree = 0, exceptional = 0;
    std::optional<mpq_class> proportion;  // absent when the bucket has no cubefree n
};

/// Bucket [lo_i, hi_i] boundaries; throws std::invalid_argument unless they partition [1, N].
class DensityAccumulator {
public:
    DensityAccumulator(std::vector<std::pair<u64, u64>> buckets);
    void add(u64 n, bool exceptional);
    std::vector<DensityRow> rows() const { return rows_; }

private:
    std::vector<DensityRow> rows_;
};

/// [1,10], [11,100], ..., the last bucket ending at N.
std::vector<std::pair<u64, u64>> decade_buckets(u64 N);
void validate_buckets(const std::vector<std::pair<u64, u64>>& buckets, u64 N);

std::vector<DensityRow> exceptional_density(u64 N, const std::vector<std::pair<u64, u64>>& buckets,
                                            unsigned jobs = 1);

struct ConstantReport {
    int k = 1;
    u64 prime_bound = 0;
    mpq_class prefactor;  // includes 1 / Gamma((3^k + 1)/2)
    mpz_class gamma;      // Gamma((3^k + 1)/2), an integer factorial
    long double product = 0;
    long double value = 0;
};

/// Throws std::invalid_argument if k < 1 or B < 10.
ConstantReport compute_ck(int k, u64 prime_bound);

}  // namespace selmer3

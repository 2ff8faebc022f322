#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "selmer3/curves.hpp"
#include "selmer3/localsolve.hpp"
#include "selmer3/redei.hpp"
#include "selmer3/selmer.hpp"
#include "selmer3/stats.hpp"

namespace selmer3 {

namespace {

using nlohmann::ordered_json;

struct Options {
    u64 n = 0;
    bool direct_phi = false;
    bool json = false;
    std::string coeffs;
    std::string x, y;
    bool hat = false;
    u64 nmax = 0;
    int k = 1;
    unsigned jobs = 1;
    std::string format;
    std::string out_path;
    u64 oracle_sample = 97;
    u64 oracle_dense = 1000;
    u64 oracle_prime_limit = 20000;
    u64 prime_bound = 1000000;
    u64 bucket_size = 0;
};

struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(const mpq_class& q) { return q.get_str(); }

std::string fmt_ld(long double v) {
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

bool want_json(const Options& o) { return o.json || o.format == "json"; }

ordered_json report_json(const SelmerReport& r) {
    ordered_json j;
    j["n"] = r.n;
    j["cf2n"] = r.cf2n;
    j["v3"] = r.v3;
    j["delta"] = r.delta;
    j["eps"] = r.eps;
    j["omega1"] = r.omega1;
    j["omega2"] = r.omega2;
    j["sel_phihat_size"] = r.sel_phihat_size;
    j["sel_phihat_rank"] = r.sel_phihat_rank;
    j["sel_phihat_size_g"] = r.sel_phihat_size_g;
    j["sel_phihat_rank_matrix"] = r.sel_phihat_rank_matrix;
    j["sel_phi_rank_matrix"] = r.sel_phi_rank_matrix;
    j["sel_phi_rank_direct"] = r.sel_phi_rank_direct ? ordered_json(*r.sel_phi_rank_direct) : ordered_json(nullptr);
    j["matrix_rows"] = r.matrix_rows;
    j["matrix_cols"] = r.matrix_cols;
    j["ker_dim"] = r.ker_dim;
    j["exceptional"] = r.exceptional();
    j["tamratio_ok"] = r.tamratio_ok;
    j["kernel_match_ok"] = r.kernel_match_ok;
    j["g_identity_ok"] = r.g_identity_ok;
    j["direct_match_ok"] = r.direct_match_ok ? ordered_json(*r.direct_match_ok) : ordered_json(nullptr);
    return j;
}

int cmd_selmer(const Options& o, std::ostream& out) {
    const CubefreeN n = make_cubefree(o.n);
    const SelmerReport r = selmer_report(n, {o.direct_phi, {}});
    if (want_json(o)) {
        out << report_json(r).dump(2) << "\n";
    } else {
        out << "n = " << r.n << "\n"
            << "cf(2n) = " << n.cf2n.to_string() << "\n"
            << "v3 = " << r.v3 << ", delta = " << r.delta << ", eps = " << r.eps << ", omega1 = " << r.omega1
            << ", omega2(cf(2n)) = " << r.omega2 << "\n"
            << "Sel_phihat(Ehat_n): size " << r.sel_phihat_size << ", rank " << r.sel_phihat_rank << " (enumeration)\n"
            << "Sel_phihat(Ehat_n): size " << r.sel_phihat_size_g << " (character sum)\n"
            << "Sel_phihat(Ehat_n): rank " << r.sel_phihat_rank_matrix << " (ker R, dim " << r.ker_dim << ")\n"
            << "Sel_phi(E_n): rank " << r.sel_phi_rank_matrix << " (ker R^T)\n";
        if (r.sel_phi_rank_direct) out << "Sel_phi(E_n): rank " << *r.sel_phi_rank_direct << " (trace forms)\n";
        out << "exceptional: " << (r.exceptional() ? "yes" : "no") << "\n"
            << "checks: tamratio " << (r.tamratio_ok ? "ok" : "FAIL") << ", kernel_match "
            << (r.kernel_match_ok ? "ok" : "FAIL") << ", g_identity " << (r.g_identity_ok ? "ok" : "FAIL");
        if (r.direct_match_ok) out << ", direct_phi " << (*r.direct_match_ok ? "ok" : "FAIL");
        out << "\n";
    }
    if (!r.ok()) throw InvariantViolation("invariant violated for n = " + std::to_string(r.n));
    return 0;
}

std::string vec_str(const F3Vector& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v.get(i));
    return s + ")";
}

int cmd_matrix(const Options& o, std::ostream& out) {
    const CubefreeN n = make_cubefree(o.n);
    const F3Matrix m = build_matrix(n);
    const RankKernel rk = rank_kernel(m);
    const RankKernel rkt = rank_kernel(m.transpose());
    const u64 size = selmer_size_from_kernel(n, rk.kernel.dim);
    if (want_json(o)) {
        ordered_json j;
        j["n"] = n.n;
        j["rows"] = m.rows();
        j["cols"] = m.cols();
        j["row_labels"] = m.row_labels;
        j["col_labels"] = m.col_labels;
        ordered_json entries = ordered_json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            std::vector<int> row;
            for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(i, c));
            entries.push_back(row);
        }
        j["entries"] = entries;
        j["rank"] = rk.rank;
        ordered_json basis = ordered_json::array();
        for (const auto& v : rk.kernel.basis) {
            std::vector<int> e;
            for (std::size_t i = 0; i < v.size(); ++i) e.push_back(v.get(i));
            basis.push_back(e);
        }
        j["kernel_basis"] = basis;
        j["ker_dim"] = rk.kernel.dim;
        j["ker_transpose_dim"] = rkt.kernel.dim;
        j["sel_phihat_size"] = size;
        j["sel_phi_rank"] = rkt.kernel.dim;
        out << j.dump(2) << "\n";
        return 0;
    }
    out << "R for n = " << n.n << " (" << m.rows() << " x " << m.cols() << ")\n";
    out << std::setw(8) << "";
    for (u64 q : m.col_labels) out << std::setw(8) << ("q=" + std::to_string(q));
    out << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const u64 lab = m.row_labels[i];
        out << std::setw(8) << (lab == 0 ? std::string("rho") : "pi_" + std::to_string(lab));
        for (std::size_t c = 0; c < m.cols(); ++c) out << std::setw(8) << m.at(i, c);
        out << "\n";
    }
    out << "rank R = " << rk.rank << "\n";
    out << "ker R basis:";
    if (rk.kernel.basis.empty()) out << " (none)";
    for (const auto& v : rk.kernel.basis) out << " " << vec_str(v);
    out << "\n";
    out << "dim ker R = " << rk.kernel.dim << ", dim ker R^T = " << rkt.kernel.dim << "\n";
    out << "#Sel_phihat(Ehat_n) = " << size << ", rank Sel_phi(E_n) = " << rkt.kernel.dim << "\n";
    return 0;
}

std::vector<u64> parse_coeffs(const std::string& s) {
    std::vector<u64> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long long x = 0;
        try {
            x = std::stoull(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("--coeffs: not an integer: '" + item + "'");
        }
        if (pos != item.size() || item.empty() || item[0] == '-')
            throw std::invalid_argument("--coeffs: not a positive integer: '" + item + "'");
        v.push_back(x);
    }
    if (v.size() != 3) throw std::invalid_argument("--coeffs expects A,B,C");
    return v;
}

int cmd_local(const Options& o, std::ostream& out) {
    const auto v = parse_coeffs(o.coeffs);
    const DiagonalCubic c = DiagonalCubic::make(v[0], v[1], v[2]);
    ordered_json places = ordered_json::array();
    bool disagree = false;
    for (u64 p : bad_primes(c)) {
        const LocalVerdict lv = solvable_at(c, p);
        ordered_json pj;
        pj["p"] = p;
        pj["solvable"] = lv.solvable;
        pj["rule"] = to_string(lv.rule);
        if (p <= o.oracle_prime_limit) {
            const bool h = hensel_oracle(c, p);
            pj["oracle"] = h;
            disagree = disagree || h != lv.solvable;
        } else {
            pj["oracle"] = nullptr;
        }
        places.push_back(pj);
    }
    const bool all = solvable_everywhere(c);
    if (want_json(o)) {
        ordered_json j;
        j["coeffs"] = v;
        j["places"] = places;
        j["real"] = true;
        j["solvable_everywhere"] = all;
        out << j.dump(2) << "\n";
    } else {
        out << to_string(c) << "\n";
        for (const auto& pj : places) {
            out << "p=" << pj["p"].get<u64>() << ": " << (pj["solvable"].get<bool>() ? "solvable" : "not solvable")
                << " (" << pj["rule"].get<std::string>() << ")";
            if (!pj["oracle"].is_null()) out << ", oracle " << (pj["oracle"].get<bool>() ? "solvable" : "not solvable");
            out << "\n";
        }
        out << "real: solvable\n";
        out << "everywhere locally solvable: " << (all ? "yes" : "no") << "\n";
    }
    if (disagree) throw InvariantViolation("Hensel oracle disagrees with the local criterion");
    return 0;
}

int cmd_isogeny(const Options& o, std::ostream& out) {
    if (o.n == 0) throw std::invalid_argument("--n must be positive");
    const RationalPoint P = RationalPoint::affine(parse_rational(o.x), parse_rational(o.y));
    const CurveId src{o.n, o.hat ? Side::Ehat : Side::E};
    const CurveId dst{o.n, o.hat ? Side::E : Side::Ehat};
    if (!on_curve(P, src))
        throw std::invalid_argument("point " + to_string(P) + " is not on " + (o.hat ? "Ehat_n" : "E_n"));
    const RationalPoint img = o.hat ? phihat(P, o.n) : phi(P, o.n);
    const RationalPoint back = o.hat ? phi(img, o.n) : phihat(img, o.n);
    const bool comp = back == multiply(P, 3, src);
    if (want_json(o)) {
        ordered_json j;
        j["n"] = o.n;
        j["source"] = o.hat ? "Ehat" : "E";
        j["point"] = to_string(P);
        j["image"] = to_string(img);
        j["image_on_curve"] = on_curve(img, dst);
        j["composition_is_times_3"] = comp;
        out << j.dump(2) << "\n";
    } else {
        out << (o.hat ? "phihat" : "phi") << to_string(P) << " = " << to_string(img) << " on "
            << (o.hat ? "E_n" : "Ehat_n") << "\n";
        out << (o.hat ? "phi(phihat(P))" : "phihat(phi(P))") << " = " << to_string(back)
            << ", [3]P = " << to_string(multiply(P, 3, src)) << ": " << (comp ? "equal" : "DIFFERENT") << "\n";
    }
    if (!comp) throw InvariantViolation("isogeny composition is not multiplication by 3");
    return 0;
}

const char* kCsvRecordHeader =
    "n,cf2n,v3,omega1,omega2,delta,eps,sel_phihat_size,sel_phihat_rank,sel_phi_rank,matrix_rows,matrix_cols,ker_dim,"
    "exceptional,kernel_match,tamratio,g_identity";

void write_record(std::ostream& os, const SweepRecord& r, const std::string& format) {
    if (format == "csv") {
        os << r.n << ',' << r.cf2n << ',' << r.v3 << ',' << r.omega1 << ',' << r.omega2 << ',' << r.delta << ','
           << r.eps << ',' << r.sel_phihat_size << ',' << r.sel_phihat_rank << ',' << r.sel_phi_rank << ','
           << r.matrix_rows << ',' << r.matrix_cols << ',' << r.ker_dim << ',' << r.exceptional << ','
           << r.checks.kernel_match << ',' << r.checks.tamratio << ',' << r.checks.g_identity << '\n';
    } else if (format == "text") {
        os << "n=" << r.n << " size=" << r.sel_phihat_size << " ranks=" << r.sel_phihat_rank << "/" << r.sel_phi_rank
           << (r.exceptional ? " exceptional" : "") << (r.checks.all() ? "" : " FAIL") << '\n';
    } else {
        os << to_json(r) << '\n';
    }
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const std::string format = o.format.empty() ? "json" : o.format;
    SweepOptions so;
    so.jobs = o.jobs;
    so.oracle = o.oracle_sample != 0;
    so.oracle_every = o.oracle_sample;
    so.oracle_dense = o.oracle_sample ? o.oracle_dense : 0;
    so.oracle_prime_limit = o.oracle_prime_limit;
    if (format == "csv") out << kCsvRecordHeader << "\n";
    const SweepSummary s = sweep(o.nmax, so, [&](const SweepRecord& r) { write_record(out, r, format); });
    err << "sweep N=" << s.N << ": " << s.count << " cubefree n, " << s.exceptional << " exceptional, " << s.failures
        << " check failures; oracle on " << s.oracle_n << " n, " << s.oracle_checks << " primes checked, "
        << s.oracle_skipped << " skipped above " << so.oracle_prime_limit << ", " << s.oracle_failures
        << " disagreements\n";
    if (!s.ok()) throw InvariantViolation(s.diagnostic);
    return 0;
}

int cmd_moments(const Options& o, std::ostream& out) {
    const MomentReport rep = moments(o.nmax, o.k, o.jobs);
    const std::string format = o.format.empty() ? "csv" : o.format;
    if (format == "json") {
        ordered_json j;
        j["N"] = rep.N;
        j["k"] = rep.k;
        auto vals = [](const MomentValues& v) {
            return ordered_json{{"count", v.count}, {"weighted", fmt(v.weighted)}, {"raw", fmt(v.raw)},
                                {"tamagawa", fmt(v.tamagawa)}};
        };
        j["all"] = vals(rep.all);
        ordered_json pc;
        for (const auto& [cls, v] : rep.per_class) pc[std::to_string(cls)] = vals(v);
        j["per_class"] = pc;
        out << j.dump(2) << "\n";
    } else if (format == "text") {
        out << "N = " << rep.N << ", k = " << rep.k << ", #D(N) = " << rep.all.count << "\n"
            << "weighted moment = " << fmt(rep.all.weighted) << " (" << fmt_ld(rep.all.weighted.get_d()) << ")\n"
            << "raw moment = " << fmt(rep.all.raw) << " (" << fmt_ld(rep.all.raw.get_d()) << ")\n"
            << "tamagawa moment = " << fmt(rep.all.tamagawa) << " (" << fmt_ld(rep.all.tamagawa.get_d()) << ")\n";
    } else {
        out << "N,k,class,count,weighted,raw,tamagawa\n";
        auto row = [&](const std::string& cls, const MomentValues& v) {
            out << rep.N << ',' << rep.k << ',' << cls << ',' << v.count << ',' << fmt(v.weighted) << ',' << fmt(v.raw)
                << ',' << fmt(v.tamagawa) << '\n';
        };
        row("all", rep.all);
        for (const auto& [cls, v] : rep.per_class) row(std::to_string(cls), v);
    }
    return 0;
}

int cmd_density(const Options& o, std::ostream& out) {
    std::vector<std::pair<u64, u64>> buckets;
    if (o.bucket_size) {
        for (u64 lo = 1; lo <= o.nmax; lo += o.bucket_size) buckets.emplace_back(lo, std::min(o.nmax, lo + o.bucket_size - 1));
    } else {
        buckets = decade_buckets(o.nmax);
    }
    const auto rows = exceptional_density(o.nmax, buckets, o.jobs);
    const std::string format = o.format.empty() ? "csv" : o.format;
    if (format == "json") {
        ordered_json j = ordered_json::array();
        for (const auto& r : rows)
            j.push_back({{"lo", r.lo}, {"hi", r.hi}, {"cubefree", r.cubefree}, {"exceptional", r.exceptional},
                         {"proportion", r.proportion ? ordered_json(fmt(*r.proportion)) : ordered_json(nullptr)}});
        out << j.dump(2) << "\n";
    } else if (format == "text") {
        for (const auto& r : rows)
            out << "[" << r.lo << ", " << r.hi << "]: " << r.exceptional << " / " << r.cubefree << " = "
                << (r.proportion ? fmt(*r.proportion) + " (" + fmt_ld(r.proportion->get_d()) + ")" : "absent") << "\n";
    } else {
        out << "lo,hi,cubefree,exceptional,proportion\n";
        for (const auto& r : rows)
            out << r.lo << ',' << r.hi << ',' << r.cubefree << ',' << r.exceptional << ','
                << (r.proportion ? fmt(*r.proportion) : "") << '\n';
    }
    return 0;
}

int cmd_constant(const Options& o, std::ostream& out) {
    const ConstantReport c = compute_ck(o.k, o.prime_bound);
    if (want_json(o)) {
        ordered_json j;
        j["k"] = c.k;
        j["prime_bound"] = c.prime_bound;
        j["prefactor"] = fmt(c.prefactor);
        j["gamma"] = c.gamma.get_str();
        j["product"] = static_cast<double>(c.product);
        j["value"] = static_cast<double>(c.value);
        out << j.dump(2) << "\n";
    } else {
        out << "k = " << c.k << ", B = " << c.prime_bound << "\n"
            << "Gamma((3^k+1)/2) = " << c.gamma.get_str() << "\n"
            << "prefactor = " << fmt(c.prefactor) << "\n"
            << "truncated product = " << fmt_ld(c.product) << "\n"
            << "c_k(B) = " << fmt_ld(c.value) << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"3-isogeny Selmer groups of y^2 = x^3 + n^2"};
    app.require_subcommand(1);

    auto fmt_opt = [&](CLI::App* s, const std::vector<std::string>& allowed) {
        s->add_option("--format", o.format, "Output format")->check(CLI::IsMember(allowed));
        s->add_option("--out", o.out_path, "Write output to a file");
    };

    auto* sel = app.add_subcommand("selmer", "Selmer groups of E_n and Ehat_n by every method");
    sel->add_option("--n", o.n, "Cubefree n")->required();
    sel->add_flag("--direct-phi", o.direct_phi, "Also compute Sel_phi from the trace forms");
    sel->add_flag("--json", o.json, "JSON output");
    fmt_opt(sel, {"json", "text"});

    auto* mat = app.add_subcommand("matrix", "The cubic residue symbol matrix R");
    mat->add_option("--n", o.n, "Cubefree n")->required();
    mat->add_flag("--json", o.json, "JSON output");
    fmt_opt(mat, {"json", "text"});

    auto* loc = app.add_subcommand("local", "Local solvability of A X^3 + B Y^3 + C Z^3 = 0");
    loc->add_option("--coeffs", o.coeffs, "A,B,C")->required();
    loc->add_flag("--json", o.json, "JSON output");
    loc->add_option("--oracle-prime-limit", o.oracle_prime_limit, "Largest prime sent to the Hensel oracle");
    fmt_opt(loc, {"json", "text"});

    auto* iso = app.add_subcommand("isogeny", "Evaluate phi (or phihat with --hat) at a rational point");
    iso->add_option("--n", o.n, "n")->required();
    iso->add_option("--x", o.x, "x as p/q")->required();
    iso->add_option("--y", o.y, "y as p/q")->required();
    iso->add_flag("--hat", o.hat, "Point lies on Ehat_n; apply phihat");
    iso->add_flag("--json", o.json, "JSON output");
    fmt_opt(iso, {"json", "text"});

    auto* sw = app.add_subcommand("sweep", "Verify every cubefree n <= nmax");
    sw->add_option("--nmax", o.nmax, "Upper bound N")->required()->check(CLI::PositiveNumber);
    sw->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sw->add_option("--oracle-sample", o.oracle_sample, "Hensel oracle on every n divisible by this (0 disables)");
    sw->add_option("--oracle-dense", o.oracle_dense, "Hensel oracle on every n up to this bound");
    sw->add_option("--oracle-prime-limit", o.oracle_prime_limit, "Largest prime sent to the Hensel oracle");
    fmt_opt(sw, {"json", "csv", "text"});

    auto* mo = app.add_subcommand("moments", "Weighted, raw and Tamagawa moments over D(N)");
    mo->add_option("--nmax", o.nmax, "Upper bound N")->required()->check(CLI::PositiveNumber);
    mo->add_option("--k", o.k, "Moment order")->check(CLI::PositiveNumber);
    mo->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    fmt_opt(mo, {"json", "csv", "text"});

    auto* de = app.add_subcommand("density", "Proportion of exceptional n per bucket");
    de->add_option("--nmax", o.nmax, "Upper bound N")->required()->check(CLI::PositiveNumber);
    de->add_option("--bucket-size", o.bucket_size, "Uniform buckets of this width (default: decades)");
    de->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    fmt_opt(de, {"json", "csv", "text"});

    auto* co = app.add_subcommand("constant", "The constant c_k truncated at primes <= B");
    co->add_option("--k", o.k, "k")->check(CLI::PositiveNumber);
    co->add_option("--prime-bound", o.prime_bound, "Prime bound B");
    co->add_flag("--json", o.json, "JSON output");
    fmt_opt(co, {"json", "text"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    std::ofstream file;
    if (!o.out_path.empty()) {
        file.open(o.out_path);
        if (!file) {
            err << "error: cannot open " << o.out_path << "\n";
            return 2;
        }
    }
    std::ostream& sink = o.out_path.empty() ? out : file;

    try {
        if (sel->parsed()) return cmd_selmer(o, sink);
        if (mat->parsed()) return cmd_matrix(o, sink);
        if (loc->parsed()) return cmd_local(o, sink);
        if (iso->parsed()) return cmd_isogeny(o, sink);
        if (sw->parsed()) return cmd_sweep(o, sink, err);
        if (mo->parsed()) return cmd_moments(o, sink);
        if (de->parsed()) return cmd_density(o, sink);
        if (co->parsed()) return cmd_constant(o, sink);
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "invariant violation: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace selmer3

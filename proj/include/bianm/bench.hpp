// SPDX-License-Identifier: Apache-2.0
//
// bianm: gridless one-bit channel estimation via binary atomic norm minimization
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Monte Carlo NMSE-vs-SNR driver.
//
// Every random draw is a function of (master seed, SNR index, trial index), so
// runs are byte-for-byte reproducible regardless of worker count. Within a
// trial the channel and pilot come from one stream and the noise from another;
// all oversample counts reuse the same noise stream, and all algorithms see the
// same observation.

#ifndef BIANM_BENCH_HPP_
#define BIANM_BENCH_HPP_

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "bianm/anm_solver.hpp"
#include "bianm/channel_sim.hpp"
#include "json.hpp"

namespace bianm::bench {

enum class Algorithm { kBianm, kRebianm };
enum class PilotScheme { kRandomQpsk, kAllOnes };

inline std::string to_string(Algorithm a) { return a == Algorithm::kBianm ? "bianm" : "rebianm"; }
inline std::string to_string(PilotScheme p) { return p == PilotScheme::kRandomQpsk ? "random_qpsk" : "all_ones"; }

inline Algorithm parse_algorithm(const std::string& s) {
    if (s == "bianm") return Algorithm::kBianm;
    if (s == "rebianm") return Algorithm::kRebianm;
    throw InvalidArgument("unknown algorithm '" + s + "' (expected bianm or rebianm)");
}

inline PilotScheme parse_pilot(const std::string& s) {
    if (s == "random_qpsk") return PilotScheme::kRandomQpsk;
    if (s == "all_ones") return PilotScheme::kAllOnes;
    throw InvalidArgument("unknown pilot scheme '" + s + "' (expected random_qpsk or all_ones)");
}

struct ExperimentConfig {
    Dims dims{8, 8};
    int paths = 3;
    std::vector<double> snr_db{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    int trials = 100;
    std::vector<int> oversample{5};  // 1 disables oversampling
    std::vector<Algorithm> algorithms{Algorithm::kBianm, Algorithm::kRebianm};
    PilotScheme pilot = PilotScheme::kRandomQpsk;
    bool min_sep = true;
    std::uint64_t seed = 1;
    SolverParams solver;
    std::string out_dir = "bianm_out";
    int workers = 0;  // 0 = hardware concurrency
    // Off by default so rows.csv is reproducible byte for byte.
    bool record_wall_time = false;

    void validate() const {
        if (paths < 1 || paths > std::min(dims.m, dims.n)) {
            throw InvalidArgument("paths must lie in [1, min(m, n)]");
        }
        if (trials < 1) throw InvalidArgument("trials must be >= 1");
        if (snr_db.empty()) throw InvalidArgument("snr_db must be non-empty");
        for (double s : snr_db) {
            if (std::isnan(s)) throw InvalidArgument("snr_db entries must be numbers");
        }
        if (oversample.empty()) throw InvalidArgument("oversample must be non-empty");
        for (int o : oversample) {
            if (o < 1 || o % 2 == 0) throw InvalidArgument("oversample counts must be odd and >= 1");
        }
        if (std::set<int>(oversample.begin(), oversample.end()).size() != oversample.size()) {
            throw InvalidArgument("oversample counts must be distinct");
        }
        if (algorithms.empty()) throw InvalidArgument("algorithms must be non-empty");
        if (std::set<Algorithm>(algorithms.begin(), algorithms.end()).size() != algorithms.size()) {
            throw InvalidArgument("algorithms must be distinct");
        }
        if (workers < 0) throw InvalidArgument("workers must be >= 0");
        solver.validate();
        for (Algorithm a : algorithms) {
            if (a == Algorithm::kRebianm && solver.reweight_iters < 1) {
                throw InvalidArgument("rebianm needs solver.reweight_iters >= 1");
            }
        }
    }
};

// ---- JSON schema ----------------------------------------------------------

namespace detail {

template <typename T>
T take(const nlohmann::json& j, const char* key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(where + "." + key + ": " + e.what());
    }
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw InvalidArgument(where + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) throw InvalidArgument("unknown config key '" + where + "." + key + "'");
    }
}

// An integer or a list of integers.
inline std::vector<int> int_or_list(const nlohmann::json& j, const std::string& where) {
    if (j.is_number_integer()) return {j.get<int>()};
    if (j.is_array()) {
        std::vector<int> out;
        for (const auto& v : j) {
            if (!v.is_number_integer()) throw InvalidArgument(where + ": expected integers");
            out.push_back(v.get<int>());
        }
        return out;
    }
    throw InvalidArgument(where + ": expected an integer or a list of integers");
}

}  // namespace detail

inline SolverParams solver_from_json(const nlohmann::json& j) {
    detail::reject_unknown(j,
                           {"rho", "max_iters", "tol_primal", "tol_dual", "reweight_iters", "zeta0", "zeta_decay",
                            "adaptive_rho", "relaxation"},
                           "solver");
    SolverParams p;
    if (j.contains("rho")) p.rho = detail::take<double>(j, "rho", "solver");
    if (j.contains("max_iters")) p.max_iters = detail::take<int>(j, "max_iters", "solver");
    if (j.contains("tol_primal")) p.tol_primal = detail::take<double>(j, "tol_primal", "solver");
    if (j.contains("tol_dual")) p.tol_dual = detail::take<double>(j, "tol_dual", "solver");
    if (j.contains("reweight_iters")) p.reweight_iters = detail::take<int>(j, "reweight_iters", "solver");
    if (j.contains("zeta0")) p.zeta0 = detail::take<double>(j, "zeta0", "solver");
    if (j.contains("zeta_decay")) p.zeta_decay = detail::take<double>(j, "zeta_decay", "solver");
    if (j.contains("adaptive_rho")) p.adaptive_rho = detail::take<bool>(j, "adaptive_rho", "solver");
    if (j.contains("relaxation")) p.relaxation = detail::take<double>(j, "relaxation", "solver");
    return p;
}

inline nlohmann::json to_json(const SolverParams& p) {
    return {{"rho", p.rho},
            {"max_iters", p.max_iters},
            {"tol_primal", p.tol_primal},
            {"tol_dual", p.tol_dual},
            {"reweight_iters", p.reweight_iters},
            {"zeta0", p.zeta0},
            {"zeta_decay", p.zeta_decay},
            {"adaptive_rho", p.adaptive_rho},
            {"relaxation", p.relaxation}};
}

/// Parses a config document; absent keys keep their defaults, unknown keys
/// are errors. Does not validate value ranges (call validate()).
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    const std::string top = "config";
    detail::reject_unknown(j,
                           {"m", "n", "paths", "snr_db", "trials", "oversample", "algorithms", "pilot", "min_sep",
                            "seed", "solver", "out_dir", "workers", "record_wall_time"},
                           top);
    ExperimentConfig c;
    int m = c.dims.m, n = c.dims.n;
    if (j.contains("m")) m = detail::take<int>(j, "m", top);
    if (j.contains("n")) n = detail::take<int>(j, "n", top);
    c.dims = Dims(m, n);
    if (j.contains("paths")) c.paths = detail::take<int>(j, "paths", top);
    if (j.contains("snr_db")) c.snr_db = detail::take<std::vector<double>>(j, "snr_db", top);
    if (j.contains("trials")) c.trials = detail::take<int>(j, "trials", top);
    if (j.contains("oversample")) c.oversample = detail::int_or_list(j.at("oversample"), top + ".oversample");
    if (j.contains("algorithms")) {
        c.algorithms.clear();
        for (const auto& s : detail::take<std::vector<std::string>>(j, "algorithms", top)) {
            c.algorithms.push_back(parse_algorithm(s));
        }
    }
    if (j.contains("pilot")) c.pilot = parse_pilot(detail::take<std::string>(j, "pilot", top));
    if (j.contains("min_sep")) c.min_sep = detail::take<bool>(j, "min_sep", top);
    if (j.contains("seed")) c.seed = detail::take<std::uint64_t>(j, "seed", top);
    if (j.contains("solver")) c.solver = solver_from_json(j.at("solver"));
    if (j.contains("out_dir")) c.out_dir = detail::take<std::string>(j, "out_dir", top);
    if (j.contains("workers")) c.workers = detail::take<int>(j, "workers", top);
    if (j.contains("record_wall_time")) c.record_wall_time = detail::take<bool>(j, "record_wall_time", top);
    return c;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    std::vector<std::string> algos;
    for (Algorithm a : c.algorithms) algos.push_back(to_string(a));
    return {{"m", c.dims.m},
            {"n", c.dims.n},
            {"paths", c.paths},
            {"snr_db", c.snr_db},
            {"trials", c.trials},
            {"oversample", c.oversample},
            {"algorithms", algos},
            {"pilot", to_string(c.pilot)},
            {"min_sep", c.min_sep},
            {"seed", c.seed},
            {"solver", to_json(c.solver)},
            {"out_dir", c.out_dir},
            {"workers", c.workers},
            {"record_wall_time", c.record_wall_time}};
}

// ---- seeding --------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_index, std::size_t trial) {
    return splitmix64(splitmix64(splitmix64(master) ^ snr_index) ^ trial);
}

// Independent sub-streams of one trial.
inline constexpr std::uint64_t kChannelStream = 1;
inline constexpr std::uint64_t kNoiseStream = 2;

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t which) {
    return std::mt19937_64(splitmix64(seed ^ (which * 0xd1b54a32d192ed03ULL)));
}

// ---- running --------------------------------------------------------------

struct ResultRow {
    std::string algorithm;  // series label, e.g. "bianm_os5"
    double snr_db = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double nmse = 0.0;  // NaN when the solver raised a numerical error
    int iterations = 0;
    bool converged = false;
    double wall_time_s = 0.0;  // NaN unless wall times are recorded
};

inline std::string series_label(Algorithm a, int oversample) {
    return to_string(a) + "_os" + std::to_string(oversample);
}

/// Runs one (SNR, trial) cell for every oversample count and algorithm.
inline std::vector<ResultRow> run_trial(const ExperimentConfig& cfg, std::size_t snr_index, int trial) {
    const std::uint64_t seed = trial_seed(cfg.seed, snr_index, static_cast<std::size_t>(trial));
    const double snr = cfg.snr_db[snr_index];

    auto channel_rng = stream(seed, kChannelStream);
    const auto paths = sample_paths(cfg.paths, cfg.dims, cfg.min_sep, channel_rng);
    const auto channel = build_channel(paths, cfg.dims);
    const auto pilot = cfg.pilot == PilotScheme::kAllOnes ? PilotConfig::all_ones(cfg.dims.n)
                                                          : PilotConfig::random_qpsk(cfg.dims.n, channel_rng);

    const bool want_plain = std::ranges::find(cfg.algorithms, Algorithm::kBianm) != cfg.algorithms.end();
    const bool want_reweighted = std::ranges::find(cfg.algorithms, Algorithm::kRebianm) != cfg.algorithms.end();

    std::vector<ResultRow> rows;
    for (int os : cfg.oversample) {
        auto noise_rng = stream(seed, kNoiseStream);
        const auto obs = measure_one_bit(channel, pilot, snr, os, noise_rng);

        using clock = std::chrono::steady_clock;
        auto make_row = [&](Algorithm a) {
            ResultRow r;
            r.algorithm = series_label(a, os);
            r.snr_db = snr;
            r.trial = trial;
            r.seed = seed;
            r.nmse = std::numeric_limits<double>::quiet_NaN();
            r.wall_time_s = std::numeric_limits<double>::quiet_NaN();
            return r;
        };
        auto record = [&](ResultRow& row, const SolveResult& res, double seconds) {
            row.nmse = nmse(res.h_hat, channel.h);
            row.iterations = res.iterations;
            row.converged = res.converged;
            if (cfg.record_wall_time) row.wall_time_s = seconds;
        };

        // The reweighted estimator starts from the plain solve, so it is
        // computed once and shared.
        ResultRow plain_row = make_row(Algorithm::kBianm);
        ResultRow reweighted_row = make_row(Algorithm::kRebianm);
        const auto t0 = clock::now();
        try {
            const SolveResult plain = solve_bianm(obs, cfg.dims, cfg.solver);
            const double plain_s = std::chrono::duration<double>(clock::now() - t0).count();
            record(plain_row, plain, plain_s);
            if (want_reweighted) {
                try {
                    const SolveResult rw = refine_reweighted(obs, cfg.dims, cfg.solver, plain);
                    record(reweighted_row, rw, std::chrono::duration<double>(clock::now() - t0).count());
                } catch (const NumericalError&) {
                    reweighted_row.iterations = plain.iterations;
                }
            }
        } catch (const NumericalError&) {
            // divergence or degenerate solution: NaN nmse, converged = false
        }
        if (want_plain) rows.push_back(plain_row);
        if (want_reweighted) rows.push_back(reweighted_row);
    }
    return rows;
}

inline bool canonical_less(const ResultRow& a, const ResultRow& b) {
    return std::tie(a.algorithm, a.snr_db, a.trial) < std::tie(b.algorithm, b.snr_db, b.trial);
}

/// All trials on a bounded worker pool; rows come back in canonical order.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t cells = cfg.snr_db.size() * static_cast<std::size_t>(cfg.trials);
    std::vector<std::vector<ResultRow>> out(cells);

    unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cells)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < cells; i = next++) {
            try {
                out[i] = run_trial(cfg, i / static_cast<std::size_t>(cfg.trials),
                                   static_cast<int>(i % static_cast<std::size_t>(cfg.trials)));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cells;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<ResultRow> rows;
    for (auto& v : out) rows.insert(rows.end(), v.begin(), v.end());
    std::stable_sort(rows.begin(), rows.end(), canonical_less);
    return rows;
}

// ---- summary --------------------------------------------------------------

struct SummaryRow {
    std::string algorithm;
    double snr_db = 0.0;
    int trials = 0;
    double mean_nmse = 0.0;
    double median_nmse = 0.0;
    double convergence_rate = 0.0;
};

inline double to_db(double x) { return 10.0 * std::log10(x); }

inline double median_of(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Mean and median NMSE per (series, SNR). Rows with NaN NMSE count toward the
/// trial total and against the convergence rate but not toward the averages.
inline std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
    if (rows.empty()) throw InvalidArgument("summarize: no rows");
    std::map<std::pair<std::string, double>, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows) groups[{r.algorithm, r.snr_db}].push_back(&r);

    std::vector<SummaryRow> out;
    for (const auto& [key, members] : groups) {
        SummaryRow s;
        s.algorithm = key.first;
        s.snr_db = key.second;
        s.trials = static_cast<int>(members.size());
        std::vector<double> values;
        int converged = 0;
        for (const ResultRow* r : members) {
            if (std::isfinite(r->nmse)) values.push_back(r->nmse);
            converged += r->converged ? 1 : 0;
        }
        double sum = 0.0;
        for (double v : values) sum += v;
        s.mean_nmse = values.empty() ? std::numeric_limits<double>::quiet_NaN() : sum / values.size();
        s.median_nmse = median_of(values);
        s.convergence_rate = static_cast<double>(converged) / s.trials;
        out.push_back(s);
    }
    return out;
}

// ---- output ---------------------------------------------------------------

/// Shortest round-trip decimal form; "nan" for NaN.
inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline constexpr const char* kRowsHeader = "algorithm,snr_db,trial,seed,nmse,iterations,converged,wall_time_s";
inline constexpr const char* kSummaryHeader =
    "algorithm,snr_db,trials,mean_nmse,median_nmse,mean_nmse_db,median_nmse_db,convergence_rate";

inline std::string rows_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    os << kRowsHeader << '\n';
    for (const auto& r : rows) {
        os << r.algorithm << ',' << fmt_double(r.snr_db) << ',' << r.trial << ',' << r.seed << ','
           << fmt_double(r.nmse) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
           << fmt_double(r.wall_time_s) << '\n';
    }
    return os.str();
}

inline std::string summary_csv(const std::vector<SummaryRow>& summary) {
    std::ostringstream os;
    os << kSummaryHeader << '\n';
    for (const auto& s : summary) {
        os << s.algorithm << ',' << fmt_double(s.snr_db) << ',' << s.trials << ',' << fmt_double(s.mean_nmse) << ','
           << fmt_double(s.median_nmse) << ',' << fmt_double(to_db(s.mean_nmse)) << ','
           << fmt_double(to_db(s.median_nmse)) << ',' << fmt_double(s.convergence_rate) << '\n';
    }
    return os.str();
}

/// Line plot of mean NMSE in dB against SNR, one polyline per series. The x
/// axis spans exactly [min SNR, max SNR].
inline std::string nmse_svg(const std::vector<SummaryRow>& summary) {
    constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 170, kTop = 30, kBottom = 55;
    const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (const auto& s : summary) {
        x_lo = std::min(x_lo, s.snr_db);
        x_hi = std::max(x_hi, s.snr_db);
        if (!(s.mean_nmse > 0.0) || !std::isfinite(s.mean_nmse)) continue;
        const double db = to_db(s.mean_nmse);
        y_lo = std::min(y_lo, db);
        y_hi = std::max(y_hi, db);
        series[s.algorithm].emplace_back(s.snr_db, db);
    }
    if (!std::isfinite(y_lo)) {
        y_lo = -1.0;
        y_hi = 0.0;
    }
    y_lo = 5.0 * std::floor(y_lo / 5.0);
    y_hi = 5.0 * std::ceil(y_hi / 5.0);
    if (y_hi <= y_lo) y_hi = y_lo + 5.0;
    const bool flat_x = !(x_hi > x_lo);
    auto px = [&](double x) { return flat_x ? kLeft + pw / 2 : kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * ph; };

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double y = y_lo; y <= y_hi + 1e-9; y += 5.0) {
        os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << py(y) << "\" y2=\"" << py(y)
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << fmt_double(y)
           << "</text>\n";
    }
    std::set<double> xs;
    for (const auto& s : summary) xs.insert(s.snr_db);
    for (double x : xs) {
        os << "<line x1=\"" << px(x) << "\" x2=\"" << px(x) << "\" y1=\"" << kTop << "\" y2=\"" << kTop + ph
           << "\" stroke=\"#eee\"/>\n";
        os << "<text x=\"" << px(x) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fmt_double(x)
           << "</text>\n";
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">SNR (dB)</text>\n";
    os << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << "NMSE (dB)</text>\n";

    std::size_t idx = 0;
    for (const auto& [name, pts] : series) {
        const char* color = kColors[idx % (sizeof(kColors) / sizeof(kColors[0]))];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : pts) os << px(x) << ',' << py(y) << ' ';
        os << "\"/>\n";
        for (const auto& [x, y] : pts) {
            os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = kTop + 14 + 18.0 * static_cast<double>(idx);
        os << "<line x1=\"" << kLeft + pw + 12 << "\" x2=\"" << kLeft + pw + 36 << "\" y1=\"" << ly << "\" y2=\""
           << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << ly + 4 << "\">" << name << "</text>\n";
        ++idx;
    }
    os << "</svg>\n";
    return os.str();
}

/// Failure to write output files.
class OutputError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw OutputError("failed writing " + path.string());
}

/// Writes rows.csv, summary.csv, nmse_vs_snr.svg and resolved_config.json
/// into cfg.out_dir, creating it if needed.
inline void emit_outputs(const std::vector<SummaryRow>& summary, const std::vector<ResultRow>& rows,
                         const ExperimentConfig& cfg) {
    const std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw OutputError("cannot create output directory " + dir.string() + ": " + ec.message());
    write_file(dir / "rows.csv", rows_csv(rows));
    write_file(dir / "summary.csv", summary_csv(summary));
    write_file(dir / "nmse_vs_snr.svg", nmse_svg(summary));
    write_file(dir / "resolved_config.json", to_json(cfg).dump(2) + "\n");
}

}  // namespace bianm::bench

#endif  // BIANM_BENCH_HPP_

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

// bianm-lab: Monte Carlo NMSE-vs-SNR experiments.
//
//   bianm-lab run --config exp.json [--m 8 --n 8 --snr -10,0,10 --algo bianm,rebianm ...]
//
// Exit status: 0 success, 1 bad configuration, 2 runtime or filesystem error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "bianm/bench.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Overrides {
    std::string config_path;
    std::optional<int> m, n, paths, trials, workers;
    std::vector<double> snr;
    std::vector<int> oversample;
    std::vector<std::string> algo;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

bianm::bench::ExperimentConfig resolve(const Overrides& o) {
    nlohmann::json doc = nlohmann::json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw bianm::InvalidArgument("cannot read config file " + o.config_path);
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw bianm::InvalidArgument(o.config_path + ": " + e.what());
        }
    }
    if (o.m) doc["m"] = *o.m;
    if (o.n) doc["n"] = *o.n;
    if (o.paths) doc["paths"] = *o.paths;
    if (o.trials) doc["trials"] = *o.trials;
    if (o.workers) doc["workers"] = *o.workers;
    if (!o.snr.empty()) doc["snr_db"] = o.snr;
    if (!o.oversample.empty()) doc["oversample"] = o.oversample;
    if (!o.algo.empty()) doc["algorithms"] = o.algo;
    if (o.seed) doc["seed"] = *o.seed;
    if (o.out_dir) doc["out_dir"] = *o.out_dir;

    auto cfg = bianm::bench::config_from_json(doc);
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-bit MIMO-OFDM channel estimation experiments"};
    app.require_subcommand(1);

    Overrides o;
    auto* run = app.add_subcommand("run", "run a Monte Carlo experiment and write CSV/SVG/JSON outputs");
    run->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    run->add_option("--m", o.m, "antennas");
    run->add_option("--n", o.n, "subcarriers");
    run->add_option("--paths", o.paths, "propagation paths per channel");
    run->add_option("--snr", o.snr, "SNR list in dB")->delimiter(',');
    run->add_option("--trials", o.trials, "trials per SNR");
    run->add_option("--oversample", o.oversample, "majority-vote copy counts (odd)")->delimiter(',');
    run->add_option("--algo", o.algo, "bianm and/or rebianm")->delimiter(',');
    run->add_option("--seed", o.seed, "master seed");
    run->add_option("--out-dir", o.out_dir, "output directory");
    run->add_option("--workers", o.workers, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    bianm::bench::ExperimentConfig cfg;
    try {
        cfg = resolve(o);
    } catch (const std::exception& e) {
        std::cerr << "bianm-lab: config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const auto rows = bianm::bench::run_experiment(cfg);
        const auto summary = bianm::bench::summarize(rows);
        bianm::bench::emit_outputs(summary, rows, cfg);
        for (const auto& s : summary) {
            std::cout << s.algorithm << "  snr " << s.snr_db << " dB  median NMSE "
                      << bianm::bench::to_db(s.median_nmse) << " dB  converged " << s.convergence_rate << '\n';
        }
        std::cout << "wrote " << cfg.out_dir << '\n';
    } catch (const std::exception& e) {
        std::cerr << "bianm-lab: error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}

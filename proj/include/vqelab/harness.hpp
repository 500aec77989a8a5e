// Copyright 2026 The vqelab Authors.

// Licensed under the Apache License, Version 2.0 (the License);
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

// http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an AS IS BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "circuit.hpp"
#include "common.hpp"
#include "metric.hpp"
#include "optimizer.hpp"
#include "pauli.hpp"
#include "shadows.hpp"

namespace vqelab {

inline constexpr const char *version_string = "0.1.0";

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    ModelFamily model = ModelFamily::Ising;
    std::size_t n = 4;
    std::optional<double> alpha;
    std::size_t layers = 1;
    std::vector<OptimizerKind> optimizers{OptimizerKind::Vanilla, OptimizerKind::QNG,
                                          OptimizerKind::WAQNG};
    double lr = 0.02;
    std::size_t steps = 500;
    std::vector<std::uint64_t> seeds{0};
    double rcond = 1e-8;
    double ridge = 0.0;
    std::string out = "runs";
    std::size_t threads = 0; ///< 0 = hardware concurrency; never affects outputs

    [[nodiscard]] Hamiltonian hamiltonian() const { return build_model(model, n, alpha); }
    [[nodiscard]] Circuit circuit() const { return efficient_su2(n, layers); }
    [[nodiscard]] StepConfig step_config() const { return {lr, {rcond, ridge}}; }

    void validate() const {
        VQELAB_REQUIRE(!optimizers.empty(), "config: optimizer list is empty");
        VQELAB_REQUIRE(!seeds.empty(), "config: seed list is empty");
        for (std::size_t i = 0; i < optimizers.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                VQELAB_REQUIRE(optimizers[i] != optimizers[j], "config: duplicate optimizer");
            }
        }
        auto sorted = seeds;
        std::sort(sorted.begin(), sorted.end());
        VQELAB_REQUIRE(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                       "config: duplicate seed");
        VQELAB_REQUIRE(steps >= 1, "config: steps must be >= 1");
        VQELAB_REQUIRE(!out.empty(), "config: output directory is empty");
        step_config().validate();
        (void)hamiltonian();
        (void)circuit();
    }

    bool operator==(const ExperimentConfig &) const = default;
};

namespace harness_detail {

inline std::uint64_t parse_u64(std::string_view tok, const std::string &what) {
    std::uint64_t v = 0;
    const auto *end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (tok.empty() || ec != std::errc{} || ptr != end) {
        throw InvalidArgument("config: malformed " + what + ": '" + std::string{tok} + "'");
    }
    return v;
}

/// "0..49" (inclusive) or "1, 5, 9"; ranges and single values may be mixed.
inline std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
    std::vector<std::uint64_t> out;
    for (auto part : detail::split(text, ',')) {
        part = detail::trim(part);
        const auto dots = part.find("..");
        if (dots == std::string_view::npos) {
            out.push_back(parse_u64(part, "seed"));
            continue;
        }
        const auto lo = parse_u64(detail::trim(part.substr(0, dots)), "seed range");
        const auto hi = parse_u64(detail::trim(part.substr(dots + 2)), "seed range");
        VQELAB_REQUIRE(lo <= hi && hi - lo < 1000000, "config: bad seed range");
        for (auto s = lo; s <= hi; ++s) {
            out.push_back(s);
        }
    }
    return out;
}

inline std::string format_double(double v) { return detail::format_double(v); }

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw RuntimeError("cannot open '" + path.string() + "' for writing");
    }
    f << content;
    f.close();
    if (!f) {
        throw RuntimeError("failed writing '" + path.string() + "'");
    }
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw RuntimeError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace harness_detail

/// Canonical `key = value` text. `threads` and `out` are included; the
/// content hash covers only the keys that change results.
inline std::string serialize_config(const ExperimentConfig &c) {
    using harness_detail::format_double;
    std::string s;
    s += "model = " + to_string(c.model) + "\n";
    s += "n = " + std::to_string(c.n) + "\n";
    if (c.alpha) {
        s += "alpha = " + format_double(*c.alpha) + "\n";
    }
    s += "layers = " + std::to_string(c.layers) + "\n";
    s += "optimizers = ";
    for (std::size_t i = 0; i < c.optimizers.size(); ++i) {
        s += (i ? "," : "") + to_string(c.optimizers[i]);
    }
    s += "\nlr = " + format_double(c.lr) + "\n";
    s += "steps = " + std::to_string(c.steps) + "\n";
    s += "seeds = ";
    for (std::size_t i = 0; i < c.seeds.size(); ++i) {
        s += (i ? "," : "") + std::to_string(c.seeds[i]);
    }
    s += "\nrcond = " + format_double(c.rcond) + "\n";
    s += "ridge = " + format_double(c.ridge) + "\n";
    s += "out = " + c.out + "\n";
    s += "threads = " + std::to_string(c.threads) + "\n";
    return s;
}

/// Line-based `key = value`; '#' starts a comment. Unknown or repeated keys
/// are errors. Missing keys keep their defaults.
inline ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig c;
    std::map<std::string, bool> seen;
    std::size_t line_no = 0;
    for (auto line : detail::split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key{detail::trim(line.substr(0, eq))};
        const auto value = detail::trim(line.substr(eq + 1));
        if (seen[key]) {
            throw InvalidArgument("config: duplicate key '" + key + "'");
        }
        seen[key] = true;
        if (key == "model") {
            c.model = parse_model_family(value);
        } else if (key == "n") {
            c.n = harness_detail::parse_u64(value, "n");
        } else if (key == "alpha") {
            c.alpha = detail::parse_double(value, "alpha");
        } else if (key == "layers") {
            c.layers = harness_detail::parse_u64(value, "layers");
        } else if (key == "optimizers") {
            c.optimizers.clear();
            for (auto name : detail::split(value, ',')) {
                c.optimizers.push_back(parse_optimizer_kind(detail::trim(name)));
            }
        } else if (key == "lr") {
            c.lr = detail::parse_double(value, "lr");
        } else if (key == "steps") {
            c.steps = harness_detail::parse_u64(value, "steps");
        } else if (key == "seeds") {
            c.seeds = harness_detail::parse_seed_list(value);
        } else if (key == "rcond") {
            c.rcond = detail::parse_double(value, "rcond");
        } else if (key == "ridge") {
            c.ridge = detail::parse_double(value, "ridge");
        } else if (key == "out") {
            c.out = std::string{value};
        } else if (key == "threads") {
            c.threads = harness_detail::parse_u64(value, "threads");
        } else {
            throw InvalidArgument("config: unknown key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path &path) {
    return parse_config(harness_detail::read_file(path));
}

inline std::string config_hash(const ExperimentConfig &c) {
    ExperimentConfig canonical = c;
    canonical.out = "";
    canonical.threads = 0;
    return harness_detail::hex64(harness_detail::fnv1a(serialize_config(canonical)));
}

inline nlohmann::ordered_json config_to_json(const ExperimentConfig &c) {
    nlohmann::ordered_json j;
    j["model"] = to_string(c.model);
    j["n"] = c.n;
    j["alpha"] = c.alpha ? nlohmann::ordered_json(*c.alpha) : nlohmann::ordered_json(nullptr);
    j["layers"] = c.layers;
    auto opts = nlohmann::ordered_json::array();
    for (auto k : c.optimizers) {
        opts.push_back(to_string(k));
    }
    j["optimizers"] = opts;
    j["lr"] = c.lr;
    j["steps"] = c.steps;
    j["seeds"] = c.seeds;
    j["rcond"] = c.rcond;
    j["ridge"] = c.ridge;
    j["out"] = c.out;
    j["threads"] = c.threads;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::ordered_json &j) {
    ExperimentConfig c;
    try {
        c.model = parse_model_family(j.at("model").get<std::string>());
        c.n = j.at("n").get<std::size_t>();
        c.alpha = j.at("alpha").is_null() ? std::nullopt
                                          : std::optional<double>(j.at("alpha").get<double>());
        c.layers = j.at("layers").get<std::size_t>();
        c.optimizers.clear();
        for (const auto &o : j.at("optimizers")) {
            c.optimizers.push_back(parse_optimizer_kind(o.get<std::string>()));
        }
        c.lr = j.at("lr").get<double>();
        c.steps = j.at("steps").get<std::size_t>();
        c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        c.rcond = j.at("rcond").get<double>();
        c.ridge = j.at("ridge").get<double>();
        c.out = j.at("out").get<std::string>();
        c.threads = j.at("threads").get<std::size_t>();
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("config json: ") + e.what());
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

struct CurveSummary {
    std::vector<double> mean;
    std::vector<double> std; ///< sample standard deviation (0 for one seed)
};

/// Per-step mean and sample standard deviation across seeds.
inline CurveSummary summarize(const std::vector<std::vector<double>> &curves) {
    VQELAB_REQUIRE(!curves.empty(), "summarize: no curves");
    const std::size_t len = curves.front().size();
    for (const auto &c : curves) {
        VQELAB_REQUIRE(c.size() == len, "summarize: curves differ in length");
    }
    CurveSummary s{std::vector<double>(len, 0.0), std::vector<double>(len, 0.0)};
    const auto count = static_cast<double>(curves.size());
    for (std::size_t t = 0; t < len; ++t) {
        double sum = 0.0;
        for (const auto &c : curves) {
            sum += c[t];
        }
        s.mean[t] = sum / count;
        if (curves.size() > 1) {
            double sq = 0.0;
            for (const auto &c : curves) {
                sq += (c[t] - s.mean[t]) * (c[t] - s.mean[t]);
            }
            s.std[t] = std::sqrt(sq / (count - 1.0));
        }
    }
    return s;
}

struct ExperimentResult {
    ExperimentConfig config;
    std::map<OptimizerKind, std::vector<RunRecord>> runs; ///< seed order as configured
    std::map<OptimizerKind, CurveSummary> summaries;
    std::optional<double> ground_energy;
    std::vector<std::filesystem::path> files; ///< every file written, in write order

    [[nodiscard]] std::vector<std::vector<double>> curves(OptimizerKind k) const {
        std::vector<std::vector<double>> out;
        for (const auto &r : runs.at(k)) {
            out.push_back(r.energies);
        }
        return out;
    }
};

inline std::string run_file_name(OptimizerKind k, std::uint64_t seed) {
    return "run_" + to_string(k) + "_seed" + std::to_string(seed) + ".csv";
}

inline std::string summary_file_name(OptimizerKind k) { return "summary_" + to_string(k) + ".csv"; }

inline std::string energy_csv(const std::vector<double> &energies) {
    std::string s = "step,energy\n";
    for (std::size_t t = 0; t < energies.size(); ++t) {
        s += std::to_string(t) + "," + harness_detail::format_double(energies[t]) + "\n";
    }
    return s;
}

inline std::string summary_csv(const CurveSummary &sum) {
    std::string s = "step,mean,std\n";
    for (std::size_t t = 0; t < sum.mean.size(); ++t) {
        s += std::to_string(t) + "," + harness_detail::format_double(sum.mean[t]) + "," +
             harness_detail::format_double(sum.std[t]) + "\n";
    }
    return s;
}

/// Reads the `mean` column of a summary CSV.
inline std::vector<double> read_summary_means(const std::filesystem::path &path) {
    const auto text = harness_detail::read_file(path);
    const auto lines = detail::split(text, '\n');
    VQELAB_REQUIRE(!lines.empty() && detail::trim(lines[0]) == "step,mean,std",
                   "summary csv: bad header in '" + path.string() + "'");
    std::vector<double> means;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = detail::trim(lines[i]);
        if (line.empty()) {
            continue;
        }
        const auto cols = detail::split(line, ',');
        VQELAB_REQUIRE(cols.size() == 3, "summary csv: expected 3 columns in '" + path.string() + "'");
        VQELAB_REQUIRE(harness_detail::parse_u64(cols[0], "step") == means.size(),
                       "summary csv: steps out of order in '" + path.string() + "'");
        means.push_back(detail::parse_double(cols[1], "mean"));
    }
    VQELAB_REQUIRE(!means.empty(), "summary csv: no rows in '" + path.string() + "'");
    return means;
}

namespace harness_detail {

/// Runs fn(0..count-1) on a small worker pool; rethrows the lowest-index failure.
inline void parallel_for(std::size_t count, std::size_t threads,
                         const std::function<void(std::size_t)> &fn) {
    if (threads == 0) {
        threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace harness_detail

/// Executes every (optimizer, seed) pair without touching the filesystem.
inline ExperimentResult simulate_experiment(const ExperimentConfig &config) {
    config.validate();
    const auto h = config.hamiltonian();
    const auto circuit = config.circuit();
    const auto cfg = config.step_config();

    struct Task {
        OptimizerKind kind;
        std::size_t seed_index;
    };
    std::vector<Task> tasks;
    for (auto k : config.optimizers) {
        for (std::size_t s = 0; s < config.seeds.size(); ++s) {
            tasks.push_back({k, s});
        }
    }
    std::vector<std::optional<RunRecord>> records(tasks.size());
    harness_detail::parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
        records[i] = run_vqe(circuit, h, tasks[i].kind, cfg, config.steps,
                             config.seeds[tasks[i].seed_index]);
    });

    ExperimentResult result;
    result.config = config;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        result.runs[tasks[i].kind].push_back(std::move(*records[i]));
    }
    for (auto k : config.optimizers) {
        result.summaries[k] = summarize(result.curves(k));
    }
    if (config.n <= 12) {
        result.ground_energy = ground_energy_exact(h).energy;
    }
    return result;
}

inline nlohmann::ordered_json manifest_json(const ExperimentResult &r) {
    const auto &c = r.config;
    nlohmann::ordered_json m;
    m["code"] = "vqelab";
    m["version"] = version_string;
    m["config"] = config_to_json(c);
    m["config_hash"] = config_hash(c);
    m["hamiltonian"] = serialize_hamiltonian(c.hamiltonian());
    m["n_params"] = c.circuit().n_params();
    m["seeds"] = c.seeds;
    m["rcond"] = c.rcond;
    m["ridge"] = c.ridge;
    m["ground_energy"] =
        r.ground_energy ? nlohmann::ordered_json(*r.ground_energy) : nlohmann::ordered_json(nullptr);
    m["init"] = "uniform[-1,1] per parameter, shared across optimizers per seed";
    m["gap_convention"] = {{"a", "qng"}, {"b", "waqng"}, {"normalization", "a"}};
    auto files = nlohmann::ordered_json::array();
    for (const auto &f : r.files) {
        files.push_back(f.filename().string());
    }
    m["files"] = files;
    return m;
}

/// Writes the result set into config.out and records the file list.
inline void persist_experiment(ExperimentResult &r) {
    namespace fs = std::filesystem;
    const fs::path dir{r.config.out};
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw RuntimeError("cannot create output directory '" + dir.string() + "'");
    }
    r.files.clear();
    for (auto k : r.config.optimizers) {
        for (const auto &rec : r.runs.at(k)) {
            const auto path = dir / run_file_name(k, rec.seed);
            harness_detail::write_file(path, energy_csv(rec.energies));
            r.files.push_back(path);
        }
    }
    for (auto k : r.config.optimizers) {
        const auto path = dir / summary_file_name(k);
        harness_detail::write_file(path, summary_csv(r.summaries.at(k)));
        r.files.push_back(path);
    }
    const auto manifest_path = dir / "manifest.json";
    r.files.push_back(manifest_path);
    harness_detail::write_file(manifest_path, manifest_json(r).dump(2) + "\n");
}

inline ExperimentResult run_experiment(const ExperimentConfig &config) {
    auto r = simulate_experiment(config);
    persist_experiment(r);
    return r;
}

inline ExperimentConfig load_manifest_config(const std::filesystem::path &manifest) {
    try {
        const auto j = nlohmann::ordered_json::parse(harness_detail::read_file(manifest));
        return config_from_json(j.at("config"));
    } catch (const nlohmann::json::exception &e) {
        throw InvalidArgument(std::string("manifest: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Gap analysis
// ---------------------------------------------------------------------------

/// Which curve supplies the initial-minus-final normalizer. `Self` normalizes
/// each mean curve by its own drop before differencing.
enum class GapNormalization { A, B, Self };

inline std::string to_string(GapNormalization g) {
    switch (g) {
    case GapNormalization::A:
        return "a";
    case GapNormalization::B:
        return "b";
    default:
        return "self";
    }
}

inline GapNormalization parse_gap_normalization(std::string_view s) {
    if (s == "a") {
        return GapNormalization::A;
    }
    if (s == "b") {
        return GapNormalization::B;
    }
    if (s == "self") {
        return GapNormalization::Self;
    }
    throw InvalidArgument("unknown gap normalization '" + std::string{s} + "'");
}

struct GapAnalysis {
    std::vector<double> gaps; ///< one per recorded step
    double auc = 0.0;         ///< plain sum of gaps
    double normalization = 0.0;
    std::optional<double> normalization_b; ///< second constant under Self
    GapNormalization mode = GapNormalization::A;
};

namespace harness_detail {

inline double drop_of(const std::vector<double> &m, const char *which) {
    const double n = m.front() - m.back();
    const double scale = std::max({1.0, std::abs(m.front()), std::abs(m.back())});
    if (!std::isfinite(n) || std::abs(n) <= 1e-14 * scale) {
        throw InvalidArgument(std::string("gap_analysis: curve ") + which +
                              " is flat; normalization constant is zero");
    }
    return n;
}

} // namespace harness_detail

/// gap_t = (mean_a(t) - mean_b(t)) / N; with a = QNG and b = WA-QNG a
/// positive gap means WA-QNG sits lower.
inline GapAnalysis gap_from_means(const std::vector<double> &mean_a, const std::vector<double> &mean_b,
                                  GapNormalization mode = GapNormalization::A) {
    VQELAB_REQUIRE(!mean_a.empty() && mean_a.size() == mean_b.size(),
                   "gap_analysis: curves must be non-empty and of equal length");
    GapAnalysis g;
    g.mode = mode;
    g.gaps.resize(mean_a.size());
    if (mode == GapNormalization::Self) {
        const double na = harness_detail::drop_of(mean_a, "a");
        const double nb = harness_detail::drop_of(mean_b, "b");
        g.normalization = na;
        g.normalization_b = nb;
        for (std::size_t t = 0; t < g.gaps.size(); ++t) {
            g.gaps[t] = (mean_a[t] - mean_a.back()) / na - (mean_b[t] - mean_b.back()) / nb;
        }
    } else {
        g.normalization = mode == GapNormalization::A ? harness_detail::drop_of(mean_a, "a")
                                                      : harness_detail::drop_of(mean_b, "b");
        for (std::size_t t = 0; t < g.gaps.size(); ++t) {
            g.gaps[t] = (mean_a[t] - mean_b[t]) / g.normalization;
        }
    }
    for (double x : g.gaps) {
        g.auc += x;
    }
    return g;
}

inline GapAnalysis gap_analysis(const std::vector<std::vector<double>> &curves_a,
                                const std::vector<std::vector<double>> &curves_b,
                                GapNormalization mode = GapNormalization::A) {
    VQELAB_REQUIRE(curves_a.size() == curves_b.size(), "gap_analysis: seed counts differ");
    return gap_from_means(summarize(curves_a).mean, summarize(curves_b).mean, mode);
}

inline std::string gap_csv(const GapAnalysis &g) {
    std::string s = "step,gap\n";
    for (std::size_t t = 0; t < g.gaps.size(); ++t) {
        s += std::to_string(t) + "," + harness_detail::format_double(g.gaps[t]) + "\n";
    }
    return s;
}

// ---------------------------------------------------------------------------
// Invariant verification suite
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;     ///< worst observed error
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    SpectralConfig spectral;

    [[nodiscard]] bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
    }

    [[nodiscard]] nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["passed"] = all_passed();
        j["rcond"] = spectral.rcond;
        j["ridge"] = spectral.ridge;
        auto arr = nlohmann::ordered_json::array();
        for (const auto &c : checks) {
            arr.push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"detail", c.detail}});
        }
        j["checks"] = arr;
        return j;
    }
};

struct VerifyOptions {
    std::optional<std::string> filter; ///< substring of the check name
    SpectralConfig spectral{};
    std::uint64_t seed = 20260101;
};

namespace verify_detail {

struct Instance {
    Circuit circuit;
    ParameterVector params;
};

inline Instance random_instance(std::size_t n, std::size_t layers, std::mt19937_64 &rng) {
    auto c = efficient_su2(n, layers);
    std::uniform_real_distribution<double> d(-std::numbers::pi, std::numbers::pi);
    ParameterVector p(static_cast<Eigen::Index>(c.n_params()));
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        p(i) = d(rng);
    }
    return {std::move(c), std::move(p)};
}

inline PauliString random_global_string(std::size_t n, std::mt19937_64 &rng) {
    std::vector<PauliAxis> axes(n);
    for (auto &a : axes) {
        a = static_cast<PauliAxis>(1 + rng() % 3);
    }
    return {n, axes};
}

inline double rel_fro(const RealMatrix &a, const RealMatrix &b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

inline CheckResult make(std::string name, double worst, double tol, std::string detail) {
    return {std::move(name), worst < tol, worst, tol, std::move(detail)};
}

inline CheckResult qng_special_case(std::mt19937_64 &rng) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + rng() % 4;
        const auto inst = random_instance(n, 1, rng);
        const Hamiltonian h{n, {{1.0 + static_cast<double>(rng() % 4), random_global_string(n, rng)}}};
        worst = std::max(worst, rel_fro(weighted_metric(inst.circuit, inst.params, h),
                                        qfi_pure(inst.circuit, inst.params)));
    }
    return make("qng_special_case", worst, 1e-9, "max ||W - F||/||F|| over 20 global-term instances");
}

inline CheckResult purity(std::mt19937_64 &rng) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + rng() % 4;
        const auto inst = random_instance(n, 1, rng);
        Support all(n);
        for (std::size_t q = 0; q < n; ++q) {
            all[q] = q;
        }
        const RealMatrix diff =
            2.0 * hs_tensor(inst.circuit, inst.params, all) - qfi_pure(inst.circuit, inst.params);
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    return make("purity_hs_qfi", worst, 1e-9, "max |2T - F| elementwise over 20 instances");
}

inline CheckResult gauss_newton(std::mt19937_64 &rng) {
    double worst = 0.0;
    std::uniform_real_distribution<double> alpha(0.1, 0.9);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 3;
        const auto inst = random_instance(n, 1 + rng() % 2, rng);
        const auto h = t % 3 == 0   ? build_model(ModelFamily::Ising, n)
                       : t % 3 == 1 ? build_model(ModelFamily::Heisenberg, n)
                                    : build_model(ModelFamily::WeightedAlpha, n, alpha(rng));
        const auto gn = gauss_newton_residual_jacobian(inst.circuit, inst.params, h);
        const RealMatrix w = weighted_metric(inst.circuit, inst.params, h);
        worst = std::max(worst, rel_fro(2.0 * gn.jacobian.transpose() * gn.jacobian, w));
    }
    return make("gauss_newton", worst, 1e-9, "max ||W - 2 J^T J||/||W|| over 10 instances");
}

inline CheckResult dw_taylor(std::mt19937_64 &rng) {
    double worst = 0.0;
    std::normal_distribution<double> nd;
    for (int t = 0; t < 10; ++t) {
        const auto inst = random_instance(3, 1, rng);
        const auto h = build_model(ModelFamily::WeightedAlpha, 3, 0.5);
        RealVector dir(inst.params.size());
        for (Eigen::Index i = 0; i < dir.size(); ++i) {
            dir(i) = nd(rng);
        }
        const RealVector delta = 1e-3 * dir.normalized();
        const double dw = dw_distance(inst.circuit, inst.params, delta, h);
        const double quad = delta.dot(weighted_metric(inst.circuit, inst.params, h) * delta);
        worst = std::max(worst, std::abs(dw - quad) / std::max(dw, 1e-300));
    }
    return make("dw_taylor", worst, 1e-2, "max |D_W - d^T W d| / D_W for |d| = 1e-3");
}

inline CheckResult gradient_fd(std::mt19937_64 &rng) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 2 + rng() % 4;
        const auto inst = random_instance(n, 1, rng);
        const auto h = build_model(t % 2 ? ModelFamily::Ising : ModelFamily::Heisenberg, n);
        const auto g = grad_parameter_shift(inst.circuit, inst.params, h);
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            ParameterVector a = inst.params;
            ParameterVector b = inst.params;
            a(i) += 1e-5;
            b(i) -= 1e-5;
            const double fd = (energy(inst.circuit, a, h) - energy(inst.circuit, b, h)) / 2e-5;
            worst = std::max(worst, std::abs(g(i) - fd));
        }
    }
    return make("gradient_fd", worst, 1e-6, "max |shift - central FD| over 20 instances");
}

inline CheckResult shadow_unbiasedness(std::mt19937_64 &rng, std::uint64_t seed) {
    // Worst |mean - exact| in units of the standard error, over two states pairs.
    double worst = 0.0;
    for (std::size_t k = 1; k <= 2; ++k) {
        const auto a = random_instance(k, 1, rng);
        const auto b = random_instance(k, 1, rng);
        const auto sa = run(a.circuit, a.params);
        const auto sb = run(b.circuit, b.params);
        const double exact = std::norm(sa.amplitudes().dot(sb.amplitudes()));
        Support support(k);
        for (std::size_t q = 0; q < k; ++q) {
            support[q] = q;
        }
        constexpr int reps = 50;
        std::vector<double> est;
        for (int r = 0; r < reps; ++r) {
            est.push_back(estimate_overlap(collect_shadows(sa, support, 2000, mix_seed(seed, k, r, 0)),
                                           collect_shadows(sb, support, 2000, mix_seed(seed, k, r, 1))));
        }
        double m = 0.0;
        for (double x : est) {
            m += x;
        }
        m /= reps;
        double v = 0.0;
        for (double x : est) {
            v += (x - m) * (x - m);
        }
        const double se = std::sqrt(v / (reps - 1) / reps);
        worst = std::max(worst, std::abs(m - exact) / se);
    }
    return make("shadow_unbiasedness", worst, 3.0, "max |mean - exact| / stderr, 50 reps of T = 2000");
}

inline CheckResult pinv_property(std::mt19937_64 &rng, const SpectralConfig &spectral) {
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
        const auto inst = random_instance(3, 1, rng);
        const RealMatrix w =
            weighted_metric(inst.circuit, inst.params, build_model(ModelFamily::Ising, 3));
        const RealMatrix p = pinv_psd(w, spectral);
        worst = std::max(worst, (w * p * w - w).norm() / w.norm());
    }
    return make("pinv_moore_penrose", worst, 1e-6, "max ||W W+ W - W||/||W|| under the configured rcond");
}

} // namespace verify_detail

inline std::vector<std::string> verify_check_names() {
    return {"qng_special_case", "purity_hs_qfi",       "gauss_newton",      "dw_taylor",
            "gradient_fd",      "shadow_unbiasedness", "pinv_moore_penrose"};
}

/// Runs every registered invariant check whose name contains the filter.
inline VerifyReport verify_suite(const VerifyOptions &opts = {}) {
    opts.spectral.validate();
    VerifyReport report;
    report.spectral = opts.spectral;
    const auto names = verify_check_names();
    bool any = false;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto &name = names[i];
        if (opts.filter && name.find(*opts.filter) == std::string::npos) {
            continue;
        }
        any = true;
        // Each check draws from its own stream so filtering does not shift the others.
        std::mt19937_64 rng(mix_seed(opts.seed, i));
        try {
            using namespace verify_detail;
            if (name == "qng_special_case") {
                report.checks.push_back(qng_special_case(rng));
            } else if (name == "purity_hs_qfi") {
                report.checks.push_back(purity(rng));
            } else if (name == "gauss_newton") {
                report.checks.push_back(gauss_newton(rng));
            } else if (name == "dw_taylor") {
                report.checks.push_back(dw_taylor(rng));
            } else if (name == "gradient_fd") {
                report.checks.push_back(gradient_fd(rng));
            } else if (name == "shadow_unbiasedness") {
                report.checks.push_back(shadow_unbiasedness(rng, mix_seed(opts.seed, i, 1)));
            } else {
                report.checks.push_back(pinv_property(rng, opts.spectral));
            }
        } catch (const std::exception &e) {
            report.checks.push_back({name, false, 0.0, 0.0, std::string("exception: ") + e.what()});
        }
    }
    VQELAB_REQUIRE(any, "verify: no check matches filter '" + opts.filter.value_or("") + "'");
    return report;
}

} // namespace vqelab

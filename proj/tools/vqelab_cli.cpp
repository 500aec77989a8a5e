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
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <vqelab/harness.hpp>

namespace fs = std::filesystem;
using namespace vqelab;

namespace {

std::string fmt(double v) { return detail::format_double(v); }

/// Named preparation for `shadows overlap`: zero, one, plus, minus, plus-i,
/// bell-half (qubit 0 of a Bell pair, i.e. I/2 on the support).
Statevector named_state(const std::string &name) {
    const double s = 1.0 / std::numbers::sqrt2;
    const Complex i{0.0, 1.0};
    ComplexVector v = ComplexVector::Zero(2);
    if (name == "zero") {
        v << 1.0, 0.0;
    } else if (name == "one") {
        v << 0.0, 1.0;
    } else if (name == "plus") {
        v << s, s;
    } else if (name == "minus") {
        v << s, -s;
    } else if (name == "plus-i") {
        v << s, s * i;
    } else if (name == "bell-half") {
        ComplexVector b = ComplexVector::Zero(4);
        b << s, 0.0, 0.0, s;
        return {2, b};
    } else {
        throw InvalidArgument("unknown state '" + name + "' (zero, one, plus, minus, plus-i, bell-half)");
    }
    // Pad to two qubits so every named state shares the support {0}.
    ComplexVector padded = ComplexVector::Zero(4);
    padded.head(2) = v;
    return {2, padded};
}

Support parse_support(const std::string &text) {
    Support out;
    for (auto tok : detail::split(text, ',')) {
        out.push_back(detail::parse_index(detail::trim(tok), "support qubit"));
    }
    return out;
}

fs::path summary_path(const std::string &where, const std::string &opt) {
    const fs::path p{where};
    return fs::is_directory(p) ? p / summary_file_name(parse_optimizer_kind(opt)) : p;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"vqelab: VQE optimizers with weighted subsystem metrics"};
    app.require_subcommand(1);

    // run
    auto *run_cmd = app.add_subcommand("run", "Run an experiment described by a config file");
    std::string config_path;
    std::optional<std::string> out_override;
    run_cmd->add_option("--config", config_path, "key = value config file")->required();
    run_cmd->add_option("--out", out_override, "Output directory (overrides the config)");

    // ground
    auto *ground_cmd = app.add_subcommand("ground", "Exact ground energy of a model Hamiltonian");
    std::string model_name;
    std::size_t n_qubits = 0;
    std::optional<double> alpha;
    ground_cmd->add_option("--model", model_name, "ising | heisenberg | weighted_alpha")->required();
    ground_cmd->add_option("--n", n_qubits, "Number of qubits")->required();
    ground_cmd->add_option("--alpha", alpha, "Weight parameter for weighted_alpha");

    // gap
    auto *gap_cmd = app.add_subcommand("gap", "Normalized gap curve and discrete AUC between two summaries");
    std::string gap_a;
    std::string gap_b;
    std::string gap_out;
    std::string opt_a = "qng";
    std::string opt_b = "waqng";
    std::string normalize = "a";
    gap_cmd->add_option("--a", gap_a, "Run directory (or summary CSV) of curve a")->required();
    gap_cmd->add_option("--b", gap_b, "Run directory (or summary CSV) of curve b")->required();
    gap_cmd->add_option("--out", gap_out, "Output CSV (step,gap)")->required();
    gap_cmd->add_option("--opt-a", opt_a, "Optimizer whose summary is read from --a")->capture_default_str();
    gap_cmd->add_option("--opt-b", opt_b, "Optimizer whose summary is read from --b")->capture_default_str();
    gap_cmd->add_option("--normalize", normalize, "Normalizer curve: a | b | self")->capture_default_str();

    // verify
    auto *verify_cmd = app.add_subcommand("verify", "Run the invariant verification suite");
    std::optional<std::string> filter;
    double verify_rcond = SpectralConfig{}.rcond;
    double verify_ridge = 0.0;
    verify_cmd->add_option("--filter", filter, "Only checks whose name contains this text");
    verify_cmd->add_option("--rcond", verify_rcond, "Pseudo-inverse cutoff under test")->capture_default_str();
    verify_cmd->add_option("--ridge", verify_ridge, "Pseudo-inverse ridge under test")->capture_default_str();

    // shadows
    auto *shadows_cmd = app.add_subcommand("shadows", "Classical-shadow estimators");
    shadows_cmd->require_subcommand(1);
    std::size_t shots = 50000;
    std::uint64_t seed = 1;
    auto *overlap_cmd = shadows_cmd->add_subcommand("overlap", "Estimate tr(rho sigma) of two named states");
    std::string state_a = "zero";
    std::string state_b = "zero";
    overlap_cmd->add_option("--state-a", state_a, "zero | one | plus | minus | plus-i | bell-half")
        ->capture_default_str();
    overlap_cmd->add_option("--state-b", state_b, "Second state")->capture_default_str();
    overlap_cmd->add_option("--t", shots, "Snapshots per set")->capture_default_str();
    overlap_cmd->add_option("--seed", seed, "Seed (set b uses a derived seed)")->capture_default_str();

    auto *element_cmd =
        shadows_cmd->add_subcommand("metric-element", "Shadow estimate of 2 tr(d_i rho d_j rho)");
    std::size_t me_n = 2;
    std::size_t me_layers = 1;
    std::size_t me_i = 0;
    std::size_t me_j = 0;
    std::string me_support = "0";
    std::uint64_t param_seed = 0;
    element_cmd->add_option("--n", me_n, "Qubits of the EfficientSU2 circuit")->capture_default_str();
    element_cmd->add_option("--layers", me_layers, "Layers")->capture_default_str();
    element_cmd->add_option("--i", me_i, "First parameter index")->capture_default_str();
    element_cmd->add_option("--j", me_j, "Second parameter index")->capture_default_str();
    element_cmd->add_option("--support", me_support, "Comma-separated support qubits")->capture_default_str();
    element_cmd->add_option("--param-seed", param_seed, "Seed of the uniform [-1, 1] parameters")
        ->capture_default_str();
    element_cmd->add_option("--t", shots, "Snapshots per set")->capture_default_str();
    element_cmd->add_option("--seed", seed, "Shadow seed")->capture_default_str();

    auto *budget_cmd = shadows_cmd->add_subcommand("budget", "Snapshots needed per metric element");
    std::size_t budget_k = 1;
    double eps = 0.1;
    double delta = 0.1;
    budget_cmd->add_option("--k", budget_k, "Locality")->capture_default_str();
    budget_cmd->add_option("--eps", eps, "Additive error")->capture_default_str();
    budget_cmd->add_option("--delta", delta, "Failure probability")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            auto cfg = load_config(config_path);
            if (out_override) {
                cfg.out = *out_override;
            }
            const auto r = run_experiment(cfg);
            std::cout << "wrote " << r.files.size() << " files to " << cfg.out << "\n";
            if (r.ground_energy) {
                std::cout << "ground_energy " << fmt(*r.ground_energy) << "\n";
            }
            for (auto k : cfg.optimizers) {
                std::cout << to_string(k) << " final_mean " << fmt(r.summaries.at(k).mean.back()) << "\n";
            }
        } else if (*ground_cmd) {
            const auto h = build_model(parse_model_family(model_name), n_qubits, alpha);
            std::cout << fmt(ground_energy_exact(h).energy) << "\n";
        } else if (*gap_cmd) {
            const auto g = gap_from_means(read_summary_means(summary_path(gap_a, opt_a)),
                                          read_summary_means(summary_path(gap_b, opt_b)),
                                          parse_gap_normalization(normalize));
            harness_detail::write_file(gap_out, gap_csv(g));
            std::cout << "auc " << fmt(g.auc) << "\nnormalization " << fmt(g.normalization) << "\n";
            if (g.normalization_b) {
                std::cout << "normalization_b " << fmt(*g.normalization_b) << "\n";
            }
        } else if (*verify_cmd) {
            VerifyOptions opts;
            opts.filter = filter;
            opts.spectral = {verify_rcond, verify_ridge};
            const auto report = verify_suite(opts);
            std::cout << report.to_json().dump(2) << "\n";
            return report.all_passed() ? 0 : 1;
        } else if (*overlap_cmd) {
            const auto a = named_state(state_a);
            const auto b = named_state(state_b);
            const auto sa = collect_shadows(a, {0}, shots, seed);
            const auto sb = collect_shadows(b, {0}, shots, mix_seed(seed, 1));
            const double exact =
                (reduced_density(a, {0}).entries * reduced_density(b, {0}).entries).trace().real();
            std::cout << "estimate " << fmt(estimate_overlap(sa, sb)) << "\nexact " << fmt(exact)
                      << "\nvariance_bound " << fmt(overlap_variance_bound(1, shots)) << "\n";
        } else if (*element_cmd) {
            const auto circuit = efficient_su2(me_n, me_layers);
            const auto params = init_params(circuit.n_params(), param_seed);
            const auto support = parse_support(me_support);
            const double est = estimate_metric_element(circuit, params, me_i, me_j, support, shots, seed);
            const double exact = 2.0 * hs_tensor(circuit, params, support)(
                                           static_cast<Eigen::Index>(me_i), static_cast<Eigen::Index>(me_j));
            std::cout << "estimate " << fmt(est) << "\nexact " << fmt(exact) << "\n";
        } else if (*budget_cmd) {
            std::cout << shots_budget(budget_k, eps, delta) << "\n";
        }
    } catch (const InvalidArgument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

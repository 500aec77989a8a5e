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

// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <vqelab/harness.hpp>

#include "test_helpers.hpp"

using namespace vqelab;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kIdentityTol = 1e-9;      // criteria 1-3
constexpr double kTaylorTol = 1e-2;        // criterion 4
constexpr double kTaylorStep = 1e-3;       // criterion 4
constexpr double kGradTol = 1e-6;          // criterion 5
constexpr double kFdStep = 1e-5;           // criterion 5
constexpr double kOverlapTol = 0.05;       // criterion 6
constexpr double kVarianceFactor = 3.0;    // criterion 6
constexpr double kGroundTol = 0.05;        // criterion 7
constexpr double kThresholdFrac = 0.10;    // criterion 7
constexpr double kRuntime1 = 5.0;          // seconds
constexpr double kRuntime6 = 120.0;
constexpr double kRuntime7 = 600.0;

// Shared experiment protocol: lr 0.02, 500 steps, uniform [-1, 1] init.
// Both natural-gradient methods use the same pseudo-inverse settings.
constexpr double kLr = 0.02;
constexpr std::size_t kSteps = 500;
constexpr double kRcond = 1e-8;
constexpr double kRidge = 1e-2;

struct Outcome {
    bool passed;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
    std::ostringstream ss;
    ss.precision(digits);
    ss << v;
    return ss.str();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<std::uint64_t> seed_range(std::size_t count) {
    std::vector<std::uint64_t> s(count);
    for (std::size_t i = 0; i < count; ++i) {
        s[i] = i;
    }
    return s;
}

ExperimentConfig protocol(ModelFamily model, std::size_t n, std::optional<double> alpha,
                          std::size_t layers, std::vector<OptimizerKind> opts, std::size_t seeds,
                          const fs::path &out) {
    ExperimentConfig c;
    c.model = model;
    c.n = n;
    c.alpha = alpha;
    c.layers = layers;
    c.optimizers = std::move(opts);
    c.lr = kLr;
    c.steps = kSteps;
    c.seeds = seed_range(seeds);
    c.rcond = kRcond;
    c.ridge = kRidge;
    c.out = out.string();
    return c;
}

struct Instance {
    Circuit circuit;
    ParameterVector params;
    Hamiltonian h;
};

/// Criteria 1-2 instance set: n <= 4, one layer, one global Pauli term.
std::vector<Instance> global_term_instances() {
    std::mt19937_64 rng(101);
    std::vector<Instance> out;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t) % 4;
        auto c = efficient_su2(n, 1);
        auto p = test::random_params(c.n_params(), rng);
        std::vector<PauliAxis> axes(n);
        for (auto &a : axes) {
            a = static_cast<PauliAxis>(1 + rng() % 3);
        }
        const double coeff = std::uniform_real_distribution<double>(0.5, 3.0)(rng);
        out.push_back({std::move(c), std::move(p), Hamiltonian{n, {{coeff, PauliString{n, axes}}}}});
    }
    return out;
}

Outcome criterion1() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (const auto &inst : global_term_instances()) {
        const auto w = weighted_metric(inst.circuit, inst.params, inst.h);
        const auto f = qfi_pure(inst.circuit, inst.params);
        worst = std::max(worst, (w - f).norm() / f.norm());
    }
    const double secs = seconds_since(t0);
    return {worst < kIdentityTol && secs < kRuntime1,
            "max ||W - F||/||F|| = " + fmt(worst) + " (tol " + fmt(kIdentityTol) + "), " + fmt(secs, 3) +
                " s (limit " + fmt(kRuntime1) + " s)"};
}

Outcome criterion2() {
    double worst = 0.0;
    for (const auto &inst : global_term_instances()) {
        const std::size_t n = inst.circuit.n_qubits();
        Support all(n);
        for (std::size_t q = 0; q < n; ++q) {
            all[q] = q;
        }
        const RealMatrix d =
            2.0 * hs_tensor(inst.circuit, inst.params, all) - qfi_pure(inst.circuit, inst.params);
        worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
    return {worst < kIdentityTol,
            "max |2 T_full - F| = " + fmt(worst) + " (tol " + fmt(kIdentityTol) + ")"};
}

Outcome criterion3() {
    std::mt19937_64 rng(303);
    double worst = 0.0;
    const std::vector<Hamiltonian> models{
        build_model(ModelFamily::WeightedAlpha, 3, 0.8), build_model(ModelFamily::WeightedAlpha, 3, 0.2),
        build_model(ModelFamily::WeightedAlpha, 3, 0.5), build_model(ModelFamily::Ising, 3),
        build_model(ModelFamily::Heisenberg, 3),         build_model(ModelFamily::Ising, 4),
        build_model(ModelFamily::Heisenberg, 4),         test::random_hamiltonian(4, 6, 3, rng),
        test::random_hamiltonian(2, 3, 2, rng),          test::random_hamiltonian(5, 5, 2, rng)};
    for (const auto &h : models) {
        const auto c = efficient_su2(h.n_qubits(), 1 + rng() % 2);
        const auto p = test::random_params(c.n_params(), rng);
        const auto gn = gauss_newton_residual_jacobian(c, p, h);
        const RealMatrix w = weighted_metric(c, p, h);
        worst = std::max(worst, (w - 2.0 * gn.jacobian.transpose() * gn.jacobian).norm() / w.norm());
    }
    return {worst < kIdentityTol,
            "max ||W - 2 J^T J||/||W|| = " + fmt(worst) + " over 10 instances (tol " + fmt(kIdentityTol) + ")"};
}

Outcome criterion4() {
    std::mt19937_64 rng(404);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    int count = 0;
    for (const auto &h : {build_model(ModelFamily::WeightedAlpha, 3, 0.4), build_model(ModelFamily::Ising, 4),
                          build_model(ModelFamily::Heisenberg, 3)}) {
        const auto c = efficient_su2(h.n_qubits(), 2);
        for (int t = 0; t < 10; ++t) {
            const auto p = test::random_params(c.n_params(), rng);
            RealVector dir(p.size());
            for (Eigen::Index i = 0; i < dir.size(); ++i) {
                dir(i) = nd(rng);
            }
            const RealVector delta = kTaylorStep * dir.normalized();
            const double dw = dw_distance(c, p, delta, h);
            const double quad = delta.dot(weighted_metric(c, p, h) * delta);
            worst = std::max(worst, std::abs(dw - quad) / dw);
            ++count;
        }
    }
    return {worst < kTaylorTol, "max |D_W - d^T W d| / D_W = " + fmt(worst) + " over " + std::to_string(count) +
                                    " unit directions x 1e-3 (tol " + fmt(kTaylorTol) + ")"};
}

Outcome criterion5() {
    std::mt19937_64 rng(505);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t) % 5;
        const auto c = test::random_circuit(n, 8 + rng() % 16, rng);
        const auto h = test::random_hamiltonian(n, 1 + rng() % 5, 2, rng);
        const auto p = test::random_params(c.n_params(), rng);
        const auto g = grad_parameter_shift(c, p, h);
        const auto fd = test::fd_gradient([&](const ParameterVector &x) { return energy(c, x, h); }, p, kFdStep);
        if (g.size() > 0) {
            worst = std::max(worst, (g - fd).cwiseAbs().maxCoeff());
        }
    }
    return {worst < kGradTol, "max |shift - FD(h=1e-5)| = " + fmt(worst) + " over 20 instances (tol " +
                                  fmt(kGradTol) + ")"};
}

Outcome criterion6() {
    const auto t0 = Clock::now();
    constexpr std::size_t t_big = 50000;
    const Statevector zero{2};
    const Circuit bell_c{2, {Gate::ry(0, 0), Gate::cnot(0, 1)}};
    ParameterVector bell_p(1);
    bell_p << std::numbers::pi / 2;
    const auto bell = run(bell_c, bell_p);

    const double same = estimate_overlap(collect_shadows(zero, {0}, t_big, 601),
                                         collect_shadows(zero, {0}, t_big, 602));
    const double half = estimate_overlap(collect_shadows(bell, {0}, t_big, 603),
                                         collect_shadows(zero, {0}, t_big, 604));
    std::vector<double> reps;
    for (std::uint64_t r = 0; r < 200; ++r) {
        reps.push_back(estimate_overlap(collect_shadows(Statevector{1}, {0}, 5000, mix_seed(606, r, 0)),
                                        collect_shadows(Statevector{1}, {0}, 5000, mix_seed(606, r, 1))));
    }
    double m = 0.0;
    for (double x : reps) {
        m += x;
    }
    m /= static_cast<double>(reps.size());
    double var = 0.0;
    for (double x : reps) {
        var += (x - m) * (x - m);
    }
    var /= static_cast<double>(reps.size() - 1);
    const double bound = overlap_variance_bound(1, 5000);
    const double secs = seconds_since(t0);
    const bool ok = std::abs(same - 1.0) <= kOverlapTol && std::abs(half - 0.5) <= kOverlapTol &&
                    var <= kVarianceFactor * bound && secs < kRuntime6;
    return {ok, "<0|0> = " + fmt(same) + ", Bell-half vs |0> = " + fmt(half) + " (tol " + fmt(kOverlapTol) +
                    "); var = " + fmt(var) + " <= 3 x " + fmt(bound) + "; " + fmt(secs, 3) + " s"};
}

std::size_t steps_to(const std::vector<double> &curve, double threshold) {
    for (std::size_t t = 0; t < curve.size(); ++t) {
        if (curve[t] <= threshold) {
            return t;
        }
    }
    return curve.size(); // never reached
}

Outcome criterion7(const fs::path &out) {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (auto model : {ModelFamily::Ising, ModelFamily::Heisenberg}) {
        const auto cfg = protocol(model, 4, std::nullopt, 4,
                                  {OptimizerKind::Vanilla, OptimizerKind::QNG, OptimizerKind::WAQNG}, 20,
                                  out / ("c7_" + to_string(model)));
        const auto r = run_experiment(cfg);
        const double eg = *r.ground_energy;
        auto finals = [&](OptimizerKind k) {
            std::vector<double> v;
            for (const auto &rec : r.runs.at(k)) {
                v.push_back(rec.energies.back());
            }
            return median(v);
        };
        std::vector<double> init_gap;
        for (const auto &rec : r.runs.at(OptimizerKind::QNG)) {
            init_gap.push_back(rec.energies.front() - eg);
        }
        const double threshold = eg + kThresholdFrac * median(init_gap);
        auto median_steps = [&](OptimizerKind k) {
            std::vector<double> v;
            for (const auto &rec : r.runs.at(k)) {
                v.push_back(static_cast<double>(steps_to(rec.energies, threshold)));
            }
            return median(v);
        };
        const double fv = finals(OptimizerKind::Vanilla);
        const double fq = finals(OptimizerKind::QNG);
        const double fw = finals(OptimizerKind::WAQNG);
        const double sq = median_steps(OptimizerKind::QNG);
        const double sw = median_steps(OptimizerKind::WAQNG);
        const bool near = std::abs(fw - eg) <= kGroundTol;
        const bool faster = sw < sq;
        const bool vanilla_worst = fv > fq && fv > fw;
        ok = ok && near && faster && vanilla_worst;
        detail += to_string(model) + ": E0 = " + fmt(eg, 6) + ", median final vanilla/qng/waqng = " + fmt(fv, 6) +
                  "/" + fmt(fq, 6) + "/" + fmt(fw, 6) + " [" + (near ? "ok" : "far") +
                  "], median steps to threshold qng/waqng = " + fmt(sq) + "/" + fmt(sw) + " [" +
                  (faster ? "ok" : "not faster") + "], vanilla worst [" + (vanilla_worst ? "ok" : "no") + "]; ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < kRuntime7;
    return {ok, detail + fmt(secs, 3) + " s"};
}

/// AUC of QNG (a) minus WA-QNG (b), normalized by the QNG curve.
double sweep_auc(const ExperimentConfig &cfg) {
    const auto r = run_experiment(cfg);
    return gap_analysis(r.curves(OptimizerKind::QNG), r.curves(OptimizerKind::WAQNG), GapNormalization::A).auc;
}

Outcome criterion8(const fs::path &out) {
    std::vector<double> aucs;
    std::string detail = "AUC(alpha = 0.8, 0.6, 0.4, 0.2) = ";
    for (double alpha : {0.8, 0.6, 0.4, 0.2}) {
        const auto cfg = protocol(ModelFamily::WeightedAlpha, 3, alpha, 1,
                                  {OptimizerKind::QNG, OptimizerKind::WAQNG}, 50,
                                  out / ("c8_alpha" + fmt(alpha)));
        aucs.push_back(sweep_auc(cfg));
        detail += fmt(aucs.back()) + (alpha > 0.3 ? ", " : "");
    }
    bool ok = true;
    for (std::size_t i = 1; i < aucs.size(); ++i) {
        ok = ok && aucs[i] > aucs[i - 1];
    }
    return {ok, detail + " (must strictly increase)"};
}

Outcome criterion9(const fs::path &out) {
    std::vector<double> aucs;
    std::string detail = "AUC(n = 2, 3, 4, 5) = ";
    for (std::size_t n = 2; n <= 5; ++n) {
        const auto cfg = protocol(ModelFamily::Ising, n, std::nullopt, 1,
                                  {OptimizerKind::QNG, OptimizerKind::WAQNG}, 50,
                                  out / ("c9_n" + std::to_string(n)));
        aucs.push_back(sweep_auc(cfg));
        detail += fmt(aucs.back()) + (n < 5 ? ", " : "");
    }
    bool ok = true;
    for (std::size_t i = 1; i < aucs.size(); ++i) {
        ok = ok && aucs[i] > aucs[i - 1];
    }
    return {ok, detail + " (must increase)"};
}

Outcome criterion10(const fs::path &out) {
    auto cfg = protocol(ModelFamily::WeightedAlpha, 3, 0.4, 1,
                        {OptimizerKind::Vanilla, OptimizerKind::QNG, OptimizerKind::WAQNG}, 10, out / "c10_a");
    cfg.threads = 1;
    const auto a = run_experiment(cfg);
    cfg.out = (out / "c10_b").string();
    cfg.threads = 0;
    run_experiment(cfg);
    std::size_t compared = 0;
    std::size_t differing = 0;
    for (const auto &f : a.files) {
        if (f.extension() != ".csv") {
            continue;
        }
        ++compared;
        differing += harness_detail::read_file(f) != harness_detail::read_file(out / "c10_b" / f.filename());
    }
    return {compared > 0 && differing == 0,
            std::to_string(compared) + " CSV files compared across two runs (1 thread vs pool), " +
                std::to_string(differing) + " differ"};
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Acceptance criteria"};
    std::string out = "acceptance_runs";
    std::vector<int> only;
    app.add_option("--out", out, "Directory for experiment artifacts")->capture_default_str();
    app.add_option("--criterion", only, "Run only these criteria (1-10)");
    CLI11_PARSE(app, argc, argv);

    const fs::path dir{out};
    const std::vector<std::function<Outcome()>> criteria{
        criterion1,
        criterion2,
        criterion3,
        criterion4,
        criterion5,
        criterion6,
        [&] { return criterion7(dir); },
        [&] { return criterion8(dir); },
        [&] { return criterion9(dir); },
        [&] { return criterion10(dir); },
    };
    for (int c : only) {
        if (c < 1 || c > 10) {
            std::cerr << "criterion must be in 1..10\n";
            return 2;
        }
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) {
            continue;
        }
        Outcome o{false, ""};
        try {
            o = criteria[i]();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.passed ? 0 : 1;
        std::cout << "criterion " << id << ": " << (o.passed ? "PASS" : "FAIL") << " | " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}

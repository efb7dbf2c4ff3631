#include "mbqc/figures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mbqc {

namespace {

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int worker_threads() {
    const char* env = std::getenv("MBQC_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return n > 0 ? n : 1;
}

// Runs f(row) for every row index; rows are independent work items with
// positionally derived seeds, so the thread count never changes results.
void parallel_rows(int n_rows, const std::function<void(int)>& f) {
    const int workers = std::min(worker_threads(), n_rows);
    if (workers <= 1) {
        for (int i = 0; i < n_rows; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n_rows; i = next.fetch_add(1)) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

// Positional seed for (row, column-slot) so parallel evaluation order is
// irrelevant.
std::uint64_t cell_seed(std::uint64_t master, int row, int slot) {
    return derive_seed(master, static_cast<std::uint64_t>(row) * 64 + slot);
}

std::vector<double> make_grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (int i = 0;; ++i) {
        const double v = lo + i * step;
        if (v > hi + 1e-9) break;
        g.push_back(v);
    }
    return g;
}

const std::array<std::array<double, 3>, 4> kEulerSets = {{
    {M_PI / 4, 0, 0},
    {M_PI / 2, M_PI / 2, 0},
    {0, M_PI / 4, M_PI / 4},
    {0, M_PI, 0},
}};

const char* kEulerNames[4] = {"euler_qpi4_0_0", "euler_qpi2_qpi2_0", "euler_0_qpi4_qpi4",
                              "euler_0_pi_0"};

}  // namespace

void FidelityReport::validate() const {
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw std::logic_error("report row width mismatch");
        }
    }
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][0] < rows[i - 1][0] - 1e-12) {
            throw std::logic_error("report grid axis must be non-decreasing");
        }
    }
    for (const auto& row : rows) {
        for (size_t c = 0; c < columns.size(); ++c) {
            const auto& name = columns[c];
            const bool is_fid = name.rfind("fidelity", 0) == 0 || name.rfind("F_", 0) == 0;
            if (is_fid && (row[c] < -1e-9 || row[c] > 1.0 + 1e-9)) {
                throw std::logic_error("fidelity out of [0,1] in report");
            }
        }
    }
}

std::string FidelityReport::to_csv() const {
    std::ostringstream os;
    for (size_t c = 0; c < columns.size(); ++c) {
        os << (c ? "," : "") << columns[c];
    }
    os << "\r\n";
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            os << (c ? "," : "") << csv_num(row[c]);
        }
        os << "\r\n";
    }
    return os.str();
}

double point_fidelity(const Protocol& proto, const PhaseAssignment& phases, RunMode mode,
                      bool bloch, const std::vector<InputState>& fixed_inputs,
                      int bloch_order) {
    const LogicalProtocol lp = logical_protocol(proto, phases, mode);
    auto eval = [&](const Eigen::VectorXcd& psi) {
        return mode == RunMode::PostselectZeros ? postselect_fidelity(lp, psi)
                                                : born_average_fidelity(lp, psi);
    };
    if (!bloch) return eval(logical_input(fixed_inputs));
    const BlochQuadrature q{bloch_order, bloch_order};
    if (lp.lines == 1) {
        return bloch_average([&](const InputState& in) { return eval(in.amps); }, q);
    }
    return bloch_average(
        [&](const InputState& a) {
            return bloch_average(
                [&](const InputState& b) { return eval(logical_input({a, b})); }, q);
        },
        q);
}

double transfer_bloch_fidelity(int n, const PhaseAssignment& phases, int bloch_order) {
    return point_fidelity(transfer_protocol(n), phases, RunMode::Exhaustive, true, {},
                          bloch_order);
}

double rotation_bloch_fidelity(const std::string& variant, const std::array<double, 3>& euler,
                               const PhaseAssignment& phases, int bloch_order) {
    return point_fidelity(rotation_protocol(variant, euler), phases, RunMode::PostselectZeros,
                          true, {}, bloch_order);
}

double rotation_a_fidelity(const std::string& variant, const std::array<double, 3>& euler,
                           const PhaseAssignment& phases, int order) {
    LogicalProtocol lp =
        logical_protocol(rotation_protocol(variant, euler), phases, RunMode::PostselectZeros);
    std::vector<double> nodes, weights;
    gauss_legendre(order, nodes, weights);
    double total = 0.0;
    for (int i = 0; i < order; ++i) {
        const double a = 0.5 * (nodes[i] + 1.0);
        total += 0.5 * weights[i] * postselect_fidelity(lp, InputState::from_a(a).amps);
    }
    return total;
}

namespace {

// Fast path for the heavy transfer sweeps: the Born-weighted fidelity is a
// quadratic form in the input, so its Bloch average has a closed form. Agrees
// with transfer_bloch_fidelity to quadrature accuracy (see tests).
double transfer_bloch_fidelity_fast(int n, const PhaseAssignment& phases) {
    LogicalProtocol lp = logical_protocol(transfer_protocol(n), phases, RunMode::Exhaustive);
    return born_bloch_average_exact(lp);
}

PhaseAssignment explicit_phases(const ClusterLayout& layout, const std::vector<double>& thetas) {
    std::map<std::string, double> values;
    for (size_t i = 0; i < layout.edges.size(); ++i) values[layout.edges[i].slot] = thetas[i];
    return PhaseAssignment::explicit_map(values);
}

GaussianSpec gaussian_spec_for(int dims, const SweepBudget& budget, std::uint64_t seed) {
    GaussianSpec spec;
    if (dims <= 4) {
        spec.scheme = GaussianScheme::GaussHermite;
        spec.order = budget.gh_order;
    } else {
        spec.scheme = GaussianScheme::MonteCarlo;
        spec.samples = budget.mc_samples;
    }
    spec.seed = seed;
    return spec;
}

}  // namespace

Estimate transfer_gaussian_fidelity(int n, double sigma, const SweepBudget& budget,
                                    std::uint64_t seed) {
    const ClusterLayout layout = linear_layout(n);
    const int dims = static_cast<int>(layout.edges.size());
    auto eval = [&](const std::vector<double>& thetas) {
        return transfer_bloch_fidelity_fast(n, explicit_phases(layout, thetas));
    };
    return gaussian_average(eval, dims, sigma, gaussian_spec_for(dims, budget, seed),
                            budget.eval_budget);
}

Estimate rotation_gaussian_fidelity(const std::string& variant,
                                    const std::array<double, 3>& euler, double sigma,
                                    const SweepBudget& budget, std::uint64_t seed) {
    GaussianSpec spec;
    spec.scheme = GaussianScheme::GaussHermite;
    spec.order = std::max(budget.gh_order, 24);
    spec.seed = seed;
    auto eval = [&](const std::vector<double>& thetas) {
        return rotation_a_fidelity(variant, euler, PhaseAssignment::common(thetas[0]),
                                   budget.bloch_order);
    };
    return gaussian_average(eval, 1, sigma, spec, budget.eval_budget);
}

double cnot_postselect_fidelity(const std::string& variant, const PhaseAssignment& phases,
                                double a, double c) {
    ProtocolResult r = run_cnot(variant, phases, InputState::from_a(a), InputState::from_a(c),
                                RunMode::PostselectZeros);
    return r.branches.at(0).valid ? r.branches.at(0).fid : 0.0;
}

Estimate cnot_gaussian_fidelity(const std::string& variant, double sigma, int samples,
                                std::uint64_t seed) {
    const ClusterLayout layout = builtin_layout(variant);
    std::uint64_t state = seed;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < samples; ++i) {
        const InputState control = random_input(state);
        const InputState target = random_input(state);
        std::map<std::string, double> values;
        for (const auto& e : layout.edges) {
            values[e.slot] = sigma * random_normal(state);
        }
        ProtocolResult r = run_cnot(variant, PhaseAssignment::explicit_map(values), control,
                                    target, RunMode::PostselectZeros);
        const double v = r.branches.at(0).valid ? r.branches.at(0).fid : 0.0;
        sum += v;
        sum2 += v * v;
    }
    Estimate est;
    est.value = sum / samples;
    const double var = std::max(0.0, sum2 / samples - est.value * est.value);
    est.std_error = std::sqrt(var / samples);
    est.evals = samples;
    return est;
}

CnotComparison cnot_paired_comparison(double sigma, int samples, std::uint64_t seed) {
    const char* names[4] = {"cnot4", "helix", "squashed-i", "squashed-i-redundant"};
    ClusterLayout layouts[4];
    std::set<std::string> slot_union;
    for (int v = 0; v < 4; ++v) {
        layouts[v] = builtin_layout(names[v]);
        for (const auto& e : layouts[v].edges) slot_union.insert(e.slot);
    }

    std::uint64_t state = seed;
    double sum[4] = {0, 0, 0, 0}, sum2[4] = {0, 0, 0, 0};
    double gsum[3] = {0, 0, 0}, gsum2[3] = {0, 0, 0};
    for (int i = 0; i < samples; ++i) {
        const InputState control = random_input(state);
        const InputState target = random_input(state);
        std::map<std::string, double> values;
        for (const auto& slot : slot_union) values[slot] = sigma * random_normal(state);
        // The halved bridge bond inherits the draw of the bond it replaces, so
        // the squashed-i / redundant difference isolates the extra bond.
        values[slot_name(8, 16)] = values.at(slot_name(8, 12));
        double f[4];
        for (int v = 0; v < 4; ++v) {
            std::map<std::string, double> mine;
            for (const auto& e : layouts[v].edges) mine[e.slot] = values.at(e.slot);
            ProtocolResult r = run_cnot(names[v], PhaseAssignment::explicit_map(mine), control,
                                        target, RunMode::PostselectZeros);
            f[v] = r.branches.at(0).valid ? r.branches.at(0).fid : 0.0;
            sum[v] += f[v];
            sum2[v] += f[v] * f[v];
        }
        for (int g = 0; g < 3; ++g) {
            const double d = f[g] - f[g + 1];
            gsum[g] += d;
            gsum2[g] += d * d;
        }
    }
    CnotComparison out;
    auto finish = [samples](double s, double s2) {
        Estimate e;
        e.value = s / samples;
        e.std_error = std::sqrt(std::max(0.0, s2 / samples - e.value * e.value) / samples);
        e.evals = samples;
        return e;
    };
    for (int v = 0; v < 4; ++v) out.fidelity[v] = finish(sum[v], sum2[v]);
    for (int g = 0; g < 3; ++g) out.gap[g] = finish(gsum[g], gsum2[g]);
    return out;
}

namespace {

FidelityReport fig9a(std::uint64_t seed, const SweepBudget& budget) {
    FidelityReport r;
    r.name = "fig9a";
    r.seed = seed;
    r.columns = {"theta", "F_3", "F_5", "F_7", "F_9", "classical_threshold"};
    r.notes = "transfer, common theta, exhaustive outcomes, Bloch-averaged inputs";
    const auto grid = make_grid(0.0, 1.2, 0.05);
    const int ns[4] = {3, 5, 7, 9};
    r.rows.assign(grid.size(), {});
    parallel_rows(static_cast<int>(grid.size()), [&](int i) {
        std::vector<double> row = {grid[i]};
        for (int n : ns) {
            row.push_back(transfer_bloch_fidelity(n, PhaseAssignment::common(grid[i]),
                                                  budget.bloch_order));
        }
        row.push_back(kClassicalThreshold);
        r.rows[i] = row;
    });
    r.validate();
    return r;
}

FidelityReport fig9b(std::uint64_t seed, const SweepBudget& budget) {
    FidelityReport r;
    r.name = "fig9b";
    r.seed = seed;
    r.columns = {"sigma", "F_3", "F_3_stderr", "F_5", "F_5_stderr", "F_7", "F_7_stderr",
                 "F_9",   "F_9_stderr", "classical_threshold"};
    r.notes = "transfer, iid gaussian phases (GH <=4 dims, MC beyond), Bloch-averaged";
    const auto grid = make_grid(0.0, 1.0, 0.1);
    const int ns[4] = {3, 5, 7, 9};
    r.rows.assign(grid.size(), {});
    parallel_rows(static_cast<int>(grid.size()), [&](int i) {
        std::vector<double> row = {grid[i]};
        for (int k = 0; k < 4; ++k) {
            Estimate e =
                transfer_gaussian_fidelity(ns[k], grid[i], budget, cell_seed(seed, i, k));
            row.push_back(e.value);
            row.push_back(e.std_error);
        }
        row.push_back(kClassicalThreshold);
        r.rows[i] = row;
    });
    r.validate();
    return r;
}

FidelityReport fig6a(std::uint64_t seed, const SweepBudget& budget) {
    FidelityReport r;
    r.name = "fig6a";
    r.seed = seed;
    r.columns = {"sigma"};
    for (const char* n : kEulerNames) r.columns.push_back(std::string("F_") + n);
    r.notes = "rot5, postselect-zeros, uniform-a input average, common gaussian phase (GH)";
    const auto grid = make_grid(0.0, 1.0, 0.1);
    r.rows.assign(grid.size(), {});
    parallel_rows(static_cast<int>(grid.size()), [&](int i) {
        std::vector<double> row = {grid[i]};
        for (int k = 0; k < 4; ++k) {
            row.push_back(rotation_gaussian_fidelity("rot5", kEulerSets[k], grid[i], budget,
                                                     cell_seed(seed, i, k))
                              .value);
        }
        r.rows[i] = row;
    });
    r.validate();
    return r;
}

FidelityReport fig6b(std::uint64_t seed, const SweepBudget& budget) {
    FidelityReport r;
    r.name = "fig6b";
    r.seed = seed;
    r.columns = {"sigma"};
    for (const char* n : kEulerNames) {
        r.columns.push_back(std::string("diff_") + n);
        r.columns.push_back(std::string("diff_") + n + "_stderr");
    }
    r.notes = "F_R5 - F_R7, postselect-zeros, uniform-a inputs, common gaussian phase (GH)";
    const auto grid = make_grid(0.0, 1.0, 0.1);
    r.rows.assign(grid.size(), {});
    parallel_rows(static_cast<int>(grid.size()), [&](int i) {
        std::vector<double> row = {grid[i]};
        for (int k = 0; k < 4; ++k) {
            Estimate r5 = rotation_gaussian_fidelity("rot5", kEulerSets[k], grid[i], budget,
                                                     cell_seed(seed, i, 2 * k));
            Estimate r7 = rotation_gaussian_fidelity("rot7", kEulerSets[k], grid[i], budget,
                                                     cell_seed(seed, i, 2 * k + 1));
            row.push_back(r5.value - r7.value);
            row.push_back(std::sqrt(r5.std_error * r5.std_error + r7.std_error * r7.std_error));
        }
        r.rows[i] = row;
    });
    return r;
}

FidelityReport fig8a(std::uint64_t seed, const SweepBudget&) {
    FidelityReport r;
    r.name = "fig8a";
    r.seed = seed;
    r.columns = {"theta", "a", "fidelity"};
    r.notes = "squashed-i, postselect-zeros, a = c, common theta";
    const auto thetas = make_grid(0.0, 1.2, 0.05);
    const auto as = make_grid(0.0, 1.0, 0.05);
    r.rows.assign(thetas.size() * as.size(), {});
    parallel_rows(static_cast<int>(thetas.size()), [&](int i) {
        for (size_t j = 0; j < as.size(); ++j) {
            r.rows[i * as.size() + j] = {
                thetas[i], as[j],
                cnot_postselect_fidelity("squashed-i", PhaseAssignment::common(thetas[i]),
                                         as[j], as[j])};
        }
    });
    r.validate();
    return r;
}

FidelityReport fig8b(std::uint64_t seed, const SweepBudget& budget) {
    FidelityReport r;
    r.name = "fig8b";
    r.seed = seed;
    const char* variants[4] = {"cnot4", "helix", "squashed_i", "squashed_i_redundant"};
    const char* layout_names[4] = {"cnot4", "helix", "squashed-i", "squashed-i-redundant"};
    r.columns = {"sigma"};
    for (const char* v : variants) {
        r.columns.push_back(std::string("F_") + v);
        r.columns.push_back(std::string("F_") + v + "_stderr");
    }
    r.notes = "postselect-zeros, MC over Haar input pairs and iid gaussian phases, n = " +
              std::to_string(budget.mc_samples);
    const auto grid = make_grid(0.2, 1.0, 0.2);
    r.rows.assign(grid.size(), {});
    parallel_rows(static_cast<int>(grid.size()), [&](int i) {
        std::vector<double> row = {grid[i]};
        for (int v = 0; v < 4; ++v) {
            // The 16-qubit variant costs ~4x the 15-qubit one per sample.
            const int n = v == 3 ? budget.mc_samples / 2 : budget.mc_samples;
            Estimate e =
                cnot_gaussian_fidelity(layout_names[v], grid[i], n, cell_seed(seed, i, v));
            row.push_back(e.value);
            row.push_back(e.std_error);
        }
        r.rows[i] = row;
    });
    r.validate();
    return r;
}

}  // namespace

std::vector<std::string> figure_names() {
    return {"fig6a", "fig6b", "fig8a", "fig8b", "fig9a", "fig9b"};
}

FidelityReport figure(const std::string& name, std::uint64_t seed, const SweepBudget& budget) {
    if (name == "fig6a") return fig6a(seed, budget);
    if (name == "fig6b") return fig6b(seed, budget);
    if (name == "fig8a") return fig8a(seed, budget);
    if (name == "fig8b") return fig8b(seed, budget);
    if (name == "fig9a") return fig9a(seed, budget);
    if (name == "fig9b") return fig9b(seed, budget);
    throw std::invalid_argument("unknown figure name " + name);
}

namespace {

struct BoundVariant {
    Protocol proto;
    std::vector<InputState> fixed_inputs;
};

BoundVariant bind_variant(const SweepSpec& spec, const std::string& variant) {
    BoundVariant b;
    if (spec.protocol == "transfer") {
        b.proto = transfer_protocol(std::stoi(variant));
        b.fixed_inputs = {InputState::from_a(spec.a)};
    } else if (spec.protocol == "rotate") {
        b.proto = rotation_protocol(variant, spec.euler);
        b.fixed_inputs = {InputState::from_a(spec.a)};
    } else if (spec.protocol == "cnot") {
        b.proto = cnot_protocol(variant);
        const InputState control = InputState::from_a(spec.a);
        const InputState target = InputState::from_a(spec.c);
        b.fixed_inputs = variant == "cnot4" ? std::vector<InputState>{target, control}
                                            : std::vector<InputState>{control, target};
    } else {
        throw std::invalid_argument("unknown sweep protocol " + spec.protocol);
    }
    return b;
}

long sweep_cost_estimate(const SweepSpec& spec) {
    long per_point = 1;
    if (spec.axis == "sigma") {
        per_point = spec.coupling == "common"
                        ? spec.budget.gh_order
                        : static_cast<long>(spec.budget.mc_samples);
    }
    long bloch = spec.bloch ? static_cast<long>(spec.budget.bloch_order) *
                                  spec.budget.bloch_order
                            : 1;
    long branches = 1;
    for (const auto& v : spec.variants) {
        const ClusterLayout l = bind_variant(spec, v).proto.layout;
        if (spec.bloch && l.num_lines() > 1) bloch = bloch * bloch;
        if (spec.mode == RunMode::Exhaustive) {
            branches = std::max(branches,
                                long(1) << (l.pattern.size() + l.redundant.size()));
        }
    }
    return static_cast<long>(spec.grid.size()) * static_cast<long>(spec.variants.size()) *
           per_point * bloch * branches;
}

}  // namespace

FidelityReport sweep(const SweepSpec& spec) {
    FidelityReport r;
    r.name = "sweep-" + spec.protocol;
    r.seed = spec.seed;
    r.columns = {spec.axis};
    if (spec.grid.empty()) throw std::invalid_argument("sweep needs a non-empty grid");
    for (const auto& v : spec.variants) {
        r.columns.push_back("F_" + v);
        r.columns.push_back("F_" + v + "_stderr");
    }
    if (spec.protocol == "transfer") r.columns.push_back("classical_threshold");
    r.notes = "mode=" + std::string(spec.mode == RunMode::Exhaustive ? "exhaustive"
                                                                     : "postselect-zeros") +
              " coupling=" + spec.coupling + (spec.bloch ? " bloch" : " fixed-input");
    if (sweep_cost_estimate(spec) > spec.budget.eval_budget) {
        throw std::runtime_error("budget exceeded: sweep needs " +
                                 std::to_string(sweep_cost_estimate(spec)) + " evaluations");
    }

    r.rows.assign(spec.grid.size(), {});
    parallel_rows(static_cast<int>(spec.grid.size()), [&](int i) {
        const double x = spec.grid[i];
        std::vector<double> row = {x};
        for (size_t vi = 0; vi < spec.variants.size(); ++vi) {
            const BoundVariant bv = bind_variant(spec, spec.variants[vi]);
            Estimate e;
            const std::uint64_t pt_seed = cell_seed(spec.seed, i, static_cast<int>(vi));
            auto at_phases = [&](const PhaseAssignment& ph) {
                return point_fidelity(bv.proto, ph, spec.mode, spec.bloch, bv.fixed_inputs,
                                      spec.budget.bloch_order);
            };
            if (spec.axis == "theta") {
                e.value = at_phases(PhaseAssignment::common(x));
                e.evals = 1;
            } else if (spec.protocol == "cnot" && spec.bloch &&
                       spec.mode == RunMode::PostselectZeros) {
                // joint Monte Carlo over input pairs and phases
                e = cnot_gaussian_fidelity(spec.variants[vi], x, spec.budget.mc_samples,
                                           pt_seed);
            } else if (spec.coupling == "common") {
                auto eval = [&](const std::vector<double>& t) {
                    return at_phases(PhaseAssignment::common(t[0]));
                };
                e = gaussian_average(eval, 1, x, gaussian_spec_for(1, spec.budget, pt_seed),
                                     spec.budget.eval_budget);
            } else {
                const ClusterLayout& layout = bv.proto.layout;
                const int dims = static_cast<int>(layout.edges.size());
                auto eval = [&](const std::vector<double>& t) {
                    return at_phases(explicit_phases(layout, t));
                };
                e = gaussian_average(eval, dims, x, gaussian_spec_for(dims, spec.budget, pt_seed),
                                     spec.budget.eval_budget);
            }
            row.push_back(e.value);
            row.push_back(e.std_error);
        }
        if (spec.protocol == "transfer") row.push_back(kClassicalThreshold);
        r.rows[i] = row;
    });
    r.validate();
    return r;
}

}  // namespace mbqc

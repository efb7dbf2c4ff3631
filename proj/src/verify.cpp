#include "mbqc/verify.hpp"

#include "mbqc/averaging.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace mbqc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double uniform_pm_pi(std::uint64_t& state) {
    return kPi * (2.0 * ((static_cast<double>(splitmix64(state) >> 11) + 0.5) * 0x1.0p-53) - 1.0);
}

std::vector<double> random_params(const ClusterLayout& l, std::uint64_t& state) {
    std::vector<double> p(l.num_params);
    for (auto& v : p) v = uniform_pm_pi(state);
    return p;
}

std::vector<InputState> random_inputs(int lines, std::uint64_t& state) {
    std::vector<InputState> in;
    for (int l = 0; l < lines; ++l) in.push_back(random_input(state));
    return in;
}

}  // namespace

bool all_pass(const std::vector<CheckResult>& results) {
    for (const auto& r : results) {
        if (!r.pass) return false;
    }
    return true;
}

std::vector<CheckResult> stabilizer_suite() {
    std::vector<CheckResult> out;
    std::vector<std::string> names = builtin_names();
    names.push_back("linear(5)");
    for (const auto& name : names) {
        const ClusterLayout layout = builtin_layout(name);
        {
            CheckResult c{"stabilizer/" + name + "/ideal", true, ""};
            StateVector s = entangle_all(layout, PhaseAssignment::all_zero());
            for (int site : layout.sites) {
                EigenCheckResult e = correlation_eigencheck(s, layout, site);
                if (!e.is_eigenstate || e.eigenvalue != 1) {
                    c.pass = false;
                    c.detail = "site " + std::to_string(site) + " eigenvalue " +
                               std::to_string(e.eigenvalue) + " residual " +
                               std::to_string(e.residual);
                    break;
                }
            }
            out.push_back(c);
        }
        if (!layout.edges.empty()) {
            CheckResult c{"stabilizer/" + name + "/noisy", true, ""};
            StateVector s = entangle_all(layout, PhaseAssignment::common(0.5));
            for (int site : layout.sites) {
                EigenCheckResult e = correlation_eigencheck(s, layout, site);
                if (e.is_eigenstate || e.residual <= 1e-6) {
                    c.pass = false;
                    c.detail = "site " + std::to_string(site) + " unexpectedly an eigenstate";
                    break;
                }
            }
            out.push_back(c);
        }
    }
    return out;
}

std::vector<ScheduledBranch> run_schedule(const ClusterLayout& layout,
                                          const std::vector<double>& params,
                                          const PhaseAssignment& phases,
                                          const std::vector<Eigen::Vector2cd>& inputs,
                                          bool staged) {
    struct Event {
        bool entangle = false;
        int index = 0;  // edge or pattern index
    };
    std::vector<Event> events;
    if (staged) {
        if (layout.stages.empty()) {
            throw std::invalid_argument("layout " + layout.name + " has no stage structure");
        }
        for (const auto& st : layout.stages) {
            for (int e : st.edge_indices) events.push_back({true, e});
            for (int m : st.meas_indices) events.push_back({false, m});
        }
    } else {
        for (size_t e = 0; e < layout.edges.size(); ++e) {
            events.push_back({true, static_cast<int>(e)});
        }
        for (size_t m = 0; m < layout.pattern.size(); ++m) {
            events.push_back({false, static_cast<int>(m)});
        }
    }

    const auto thetas = phases.resolve(layout);
    std::vector<ScheduledBranch> out;
    std::vector<int> outcomes;
    std::map<int, int> by_site;

    std::function<void(StateVector, size_t, double)> walk = [&](StateVector state, size_t ev,
                                                                double prob) {
        while (ev < events.size() && events[ev].entangle) {
            const Edge& e = layout.edges[events[ev].index];
            state = apply_cphase(std::move(state), e.a, e.b, thetas.at(e.slot));
            ++ev;
        }
        if (ev == events.size()) {
            out.push_back({outcomes, prob, std::move(state)});
            return;
        }
        const MeasStep& m = layout.pattern[events[ev].index];
        const double angle = effective_angle(m, params, by_site);
        for (int outcome = 0; outcome < 2; ++outcome) {
            Projection proj = project_xy(state, m.site, angle, outcome);
            outcomes.push_back(outcome);
            by_site[m.site] = outcome;
            if (proj.state.valid) {
                walk(std::move(proj.state), ev + 1, prob * proj.probability);
            } else {
                out.push_back({outcomes, 0.0, StateVector{}});
            }
            outcomes.pop_back();
            by_site.erase(m.site);
        }
    };
    walk(encode_product(layout, inputs), 0, 1.0);
    return out;
}

std::vector<CheckResult> observation1_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;
    std::uint64_t state = seed;
    const std::vector<std::string> names = {"bbb1",       "bbb2",  "bbb3",      "box",
                                            "cnot4",      "rot5",  "bridge-ebb", "helix",
                                            "squashed-i", "linear(5)"};
    for (const auto& name : names) {
        const ClusterLayout layout = builtin_layout(name);
        const auto params = random_params(layout, state);
        auto inputs = random_inputs(layout.num_lines(), state);
        std::vector<Eigen::Vector2cd> in2;
        for (const auto& i : inputs) in2.push_back(i.amps);

        for (int noisy = 0; noisy < 2; ++noisy) {
            PhaseAssignment phases = PhaseAssignment::all_zero();
            if (noisy) {
                std::map<std::string, double> values;
                for (const auto& e : layout.edges) values[e.slot] = uniform_pm_pi(state);
                phases = PhaseAssignment::explicit_map(values);
            }
            CheckResult c{"observation1/" + name + (noisy ? "/noisy" : "/ideal"), true, ""};
            auto staged = run_schedule(layout, params, phases, in2, true);
            auto mono = run_schedule(layout, params, phases, in2, false);
            if (staged.size() != mono.size()) {
                c.pass = false;
                c.detail = "branch count mismatch";
            } else {
                for (size_t b = 0; b < staged.size(); ++b) {
                    if (staged[b].outcomes != mono[b].outcomes) {
                        c.pass = false;
                        c.detail = "branch ordering mismatch";
                        break;
                    }
                    if (std::abs(staged[b].probability - mono[b].probability) > 1e-10) {
                        c.pass = false;
                        c.detail = "probability mismatch at branch " + std::to_string(b);
                        break;
                    }
                    if (staged[b].probability <= 0.0) continue;
                    const double diff =
                        (staged[b].state.amps - mono[b].state.amps).norm();
                    if (diff > 1e-10) {
                        c.pass = false;
                        c.detail = "state mismatch at branch " + std::to_string(b) + " (" +
                                   std::to_string(diff) + ")";
                        break;
                    }
                }
            }
            out.push_back(c);
        }
    }
    return out;
}

std::vector<CheckResult> oracle_suite(int inputs_per_layout, std::uint64_t seed) {
    std::vector<CheckResult> out;
    std::uint64_t state = seed;
    const std::vector<std::string> names = {"bbb1",       "bbb2",  "bbb3",       "box",
                                            "cnot4",      "rot5",  "rot7",       "bridge-ebb",
                                            "helix",      "squashed-i"};
    for (const auto& name : names) {
        CheckResult c{"oracle/" + name, true, ""};
        const ClusterLayout layout = builtin_layout(name);
        for (int rep = 0; rep < inputs_per_layout && c.pass; ++rep) {
            const Protocol p = oracle_protocol(name, random_params(layout, state));
            const auto inputs = random_inputs(layout.num_lines(), state);
            ProtocolResult r =
                run_protocol(p, PhaseAssignment::all_zero(), inputs, RunMode::Exhaustive);
            if (std::abs(r.total_probability() - 1.0) > 1e-10) {
                c.pass = false;
                c.detail = "branch probabilities do not sum to 1";
                break;
            }
            for (const auto& b : r.branches) {
                if (!b.valid || std::abs(b.fid - 1.0) > 1e-10) {
                    c.pass = false;
                    std::ostringstream os;
                    os << "input " << rep << " fidelity " << b.fid << " at outcomes";
                    for (int o : b.outcomes) os << ' ' << o;
                    c.detail = os.str();
                    break;
                }
            }
        }
        out.push_back(c);
    }
    return out;
}

std::vector<CheckResult> byproduct_suite() {
    std::vector<CheckResult> out;
    {
        CheckResult c{"byproduct/transfer-closed-form", true, ""};
        for (int n : {3, 5, 7, 9}) {
            for (int bits = 0; bits < (1 << (n - 1)) && c.pass; ++bits) {
                std::vector<int> outcomes(n - 1);
                for (int i = 0; i < n - 1; ++i) outcomes[i] = (bits >> i) & 1;
                PauliFrame direct = transfer_frame(outcomes, n);
                PauliFrame stepped = PauliFrame::identity(1);
                for (int i = 0; i < n - 1; ++i) {
                    stepped = propagate(stepped, FrameGate::hadamard(0)).frame;
                    push_x(stepped, 0, outcomes[i]);
                }
                if (!direct.same_paulis(stepped)) {
                    c.pass = false;
                    c.detail = "mismatch at N=" + std::to_string(n) +
                               " bits=" + std::to_string(bits);
                }
            }
        }
        out.push_back(c);
    }
    {
        CheckResult c{"byproduct/squashed-i-zero", true, ""};
        std::map<int, int> zeros;
        for (int site : {1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 14}) zeros[site] = 0;
        PauliFrame f = squashed_i_frame(zeros);
        if (!(f.x[0] == 0 && f.x[1] == 0 && f.z[0] == 1 && f.z[1] == 0)) {
            c.pass = false;
            c.detail = "all-zero frame is not sz on the control output";
        }
        out.push_back(c);
    }
    {
        CheckResult c{"byproduct/cnot4-truth-table", true, ""};
        for (int s1 = 0; s1 < 2; ++s1) {
            for (int s3 = 0; s3 < 2; ++s3) {
                PauliFrame f = cnot4_frame(s1, s3);
                if (f.x[0] != s1 || f.x[1] != (s1 ^ s3) || f.z[0] || f.z[1]) {
                    c.pass = false;
                    c.detail = "mismatch at s1=" + std::to_string(s1) +
                               " s3=" + std::to_string(s3);
                }
            }
        }
        out.push_back(c);
    }
    {
        // Eq-form byproduct of the squashed-I equals the propagated one up to
        // the constant sz that cancels the circuit's own local sz.
        CheckResult c{"byproduct/squashed-i-propagated", true, ""};
        const ClusterLayout layout = builtin_layout("squashed-i");
        std::vector<int> sites;
        for (const auto& m : layout.pattern) sites.push_back(m.site);
        for (int bits = 0; bits < (1 << 13) && c.pass; ++bits) {
            std::vector<int> outcomes(13);
            std::map<int, int> by_site;
            for (int i = 0; i < 13; ++i) {
                outcomes[i] = (bits >> i) & 1;
                by_site[sites[i]] = outcomes[i];
            }
            PauliFrame closed = squashed_i_frame(by_site);
            PauliFrame stepped = stage_frame(layout, outcomes);
            stepped.z[0] ^= 1;
            if (!closed.same_paulis(stepped)) {
                c.pass = false;
                c.detail = "mismatch at bits=" + std::to_string(bits);
            }
        }
        out.push_back(c);
    }
    {
        CheckResult c{"byproduct/rotation-closed-form", true, ""};
        const ClusterLayout layout = builtin_layout("rot5");
        for (int bits = 0; bits < 16 && c.pass; ++bits) {
            std::vector<int> o = {bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1};
            PauliFrame stepped = stage_frame(layout, o);
            if (stepped.x[0] != (o[1] ^ o[3]) || stepped.z[0] != (o[0] ^ o[2])) {
                c.pass = false;
                c.detail = "mismatch at bits=" + std::to_string(bits);
            }
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace mbqc

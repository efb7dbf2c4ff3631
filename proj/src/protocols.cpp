#include "mbqc/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mbqc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kProbFloor = 1e-14;

double resolve_base(const MeasStep& m, const std::vector<double>& params) {
    if (m.param < 0) return m.base_angle;
    if (m.param >= static_cast<int>(params.size())) {
        throw std::invalid_argument("pattern parameter not bound");
    }
    return params[m.param];
}

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

StateVector project_raw(const StateVector& s, int site, double alpha, int outcome) {
    const int p = s.position(site);
    const int64_t stride = int64_t(1) << p;
    const int64_t dim = s.amps.size();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex c1 =
        (outcome == 0 ? 1.0 : -1.0) * std::exp(Complex(0, -alpha)) * inv_sqrt2;
    StateVector out;
    out.labels = s.labels;
    out.labels.erase(out.labels.begin() + p);
    out.amps.resize(dim / 2);
    int64_t k = 0;
    for (int64_t base = 0; base < dim; base += 2 * stride) {
        for (int64_t low = 0; low < stride; ++low) {
            const int64_t i0 = base + low;
            out.amps[k++] = inv_sqrt2 * s.amps[i0] + c1 * s.amps[i0 + stride];
        }
    }
    return out;
}

std::vector<Eigen::Vector2cd> to_vec2(const std::vector<InputState>& inputs) {
    std::vector<Eigen::Vector2cd> v;
    v.reserve(inputs.size());
    for (const auto& in : inputs) v.push_back(in.amps);
    return v;
}

// Frame update of one bbb1 step: optional Rz absorption, the teleport H, and
// the measurement byproduct.
void bbb1_frame_step(PauliFrame& f, int line, const MeasStep& m, int outcome) {
    const bool adaptive = m.param >= 0 || !m.flip_sites.empty();
    if (!adaptive) {
        if (near(m.base_angle, kPi / 2) || near(m.base_angle, -kPi / 2)) {
            // Rz(-+pi/2) sx = sx (-+i sz) Rz(-+pi/2)
            f.z[line] ^= f.x[line];
        } else if (!near(m.base_angle, 0.0)) {
            throw std::invalid_argument(
                "fixed measurement angles other than 0, +-pi/2 need an adaptive pattern");
        }
    }
    f = propagate(f, FrameGate::hadamard(line)).frame;
    push_x(f, line, outcome);
}

}  // namespace

InputState InputState::from_a(double a) { return from_a_phi(a, 0.0); }

InputState InputState::from_a_phi(double a, double phi) {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("need 0 <= a <= 1");
    InputState s;
    s.amps << Complex(a, 0), std::sqrt(1.0 - a * a) * std::exp(Complex(0, phi));
    return s;
}

InputState InputState::bloch(double polar, double azimuthal) {
    InputState s;
    s.amps << Complex(std::cos(polar / 2), 0),
        std::sin(polar / 2) * std::exp(Complex(0, azimuthal));
    return s;
}

InputState InputState::from_amps(const Eigen::Vector2cd& v) {
    if (std::abs(v.squaredNorm() - 1.0) > 1e-12) {
        throw std::invalid_argument("input state is not normalized");
    }
    InputState s;
    s.amps = v;
    return s;
}

double ProtocolResult::total_probability() const {
    double p = 0;
    for (const auto& b : branches) p += b.probability;
    return p;
}

double ProtocolResult::average_fidelity() const {
    double p = 0, pf = 0;
    for (const auto& b : branches) {
        if (!b.valid) continue;
        p += b.probability;
        pf += b.probability * b.fid;
    }
    return p > 0 ? pf / p : 0.0;
}

double effective_angle(const MeasStep& m, const std::vector<double>& params,
                       const std::map<int, int>& outcomes_by_site) {
    double angle = resolve_base(m, params);
    int flip = 0;
    for (int site : m.flip_sites) {
        auto it = outcomes_by_site.find(site);
        if (it == outcomes_by_site.end()) {
            throw std::logic_error("flip site measured out of order");
        }
        flip ^= it->second;
    }
    return flip ? -angle : angle;
}

PauliFrame stage_frame(const ClusterLayout& layout, const std::vector<int>& outcomes) {
    if (outcomes.size() != layout.pattern.size()) {
        throw std::invalid_argument("outcome count does not match pattern");
    }
    const int lines = layout.num_lines();
    PauliFrame f = PauliFrame::identity(lines);

    if (!layout.stages.empty()) {
        for (const auto& st : layout.stages) {
            if (st.kind == "bbb2") {
                f = propagate(f, FrameGate::cz(st.line, st.line2)).frame;
            } else if (st.kind == "bbb3") {
                const int s = outcomes[st.meas_indices[0]];
                f = propagate(f, FrameGate::cz(st.line, st.line2)).frame;
                f.z[st.line] ^= f.x[st.line];
                f.z[st.line2] ^= f.x[st.line2];
                push_z(f, st.line, s);
                push_z(f, st.line2, s);
            } else if (st.kind == "bbb1") {
                const int mi = st.meas_indices[0];
                bbb1_frame_step(f, st.line, layout.pattern[mi], outcomes[mi]);
            } else {
                throw std::invalid_argument("unknown stage kind " + st.kind);
            }
        }
        return f;
    }
    if (lines == 1) {
        for (size_t i = 0; i < layout.pattern.size(); ++i) {
            bbb1_frame_step(f, 0, layout.pattern[i], outcomes[i]);
        }
        return f;
    }
    throw std::invalid_argument("layout " + layout.name + " has no block structure to propagate");
}

namespace {

std::vector<LogicalGate> circuit_from_layout(const ClusterLayout& layout,
                                             const std::vector<double>& params) {
    std::vector<LogicalGate> gates;
    auto add_bbb1 = [&](int line, const MeasStep& m) {
        const double base = resolve_base(m, params);
        if (!near(base, 0.0)) gates.push_back(LogicalGate::rz(line, -base));
        gates.push_back(LogicalGate::h(line));
    };
    if (!layout.stages.empty()) {
        for (const auto& st : layout.stages) {
            if (st.kind == "bbb2") {
                gates.push_back(LogicalGate::cz(st.line, st.line2));
            } else if (st.kind == "bbb3") {
                const MeasStep& m = layout.pattern[st.meas_indices[0]];
                if (!near(resolve_base(m, params), kPi / 2)) {
                    throw std::invalid_argument("bbb3 equivalent circuit needs alpha = pi/2");
                }
                gates.push_back(LogicalGate::cz(st.line, st.line2));
                gates.push_back(LogicalGate::rz(st.line, kPi / 2));
                gates.push_back(LogicalGate::rz(st.line2, kPi / 2));
            } else {
                add_bbb1(st.line, layout.pattern[st.meas_indices[0]]);
            }
        }
        return gates;
    }
    if (layout.num_lines() == 1) {
        for (const auto& m : layout.pattern) add_bbb1(0, m);
        return gates;
    }
    throw std::invalid_argument("layout " + layout.name + " has no equivalent circuit");
}

}  // namespace

StateVector protocol_target(const Protocol& p, const std::vector<InputState>& inputs) {
    const auto& labels = p.target_labels;
    if (inputs.size() != labels.size()) {
        throw std::invalid_argument("need one input per logical line");
    }
    StateVector s = single_qubit_state(labels[0], inputs[0].amps);
    for (size_t l = 1; l < labels.size(); ++l) {
        s = tensor(s, single_qubit_state(labels[l], inputs[l].amps));
    }
    for (const auto& g : p.circuit) {
        switch (g.kind) {
            case LogicalGate::H:
                s = apply_1q(std::move(s), labels[g.line], gates::h());
                break;
            case LogicalGate::RZ:
                s = apply_1q(std::move(s), labels[g.line], gates::rz(g.angle));
                break;
            case LogicalGate::RX:
                s = apply_1q(std::move(s), labels[g.line], gates::rx(g.angle));
                break;
            case LogicalGate::CZ:
                s = apply_cphase(std::move(s), labels[g.line], labels[g.line2], 0.0);
                break;
        }
    }
    return s;
}

ProtocolResult run_protocol(const Protocol& p, const PhaseAssignment& phases,
                            const std::vector<InputState>& inputs, RunMode mode,
                            int max_branches) {
    const ClusterLayout& layout = p.layout;
    layout.validate();
    const int n_rem = static_cast<int>(layout.redundant.size());
    const int n_pat = static_cast<int>(layout.pattern.size());
    if (mode == RunMode::Exhaustive && n_rem + n_pat > 30) {
        throw std::runtime_error("branch budget exceeded");
    }
    if (mode == RunMode::Exhaustive && (int64_t(1) << (n_rem + n_pat)) > max_branches) {
        throw std::runtime_error("branch budget exceeded");
    }

    ProtocolResult result;
    result.layout_name = layout.name;
    result.phase_desc = phases.describe();
    result.mode = mode == RunMode::Exhaustive ? "exhaustive" : "postselect-zeros";
    result.ideal_target = protocol_target(p, inputs);

    const auto out_sites = layout.output_sites();
    StateVector initial = encode_inputs(layout, to_vec2(inputs), phases);

    std::vector<int> rem_outcomes, pat_outcomes;
    std::map<int, int> by_site;

    auto record_dead = [&](double prob) {
        BranchResult b;
        b.removal_outcomes = rem_outcomes;
        b.outcomes = pat_outcomes;
        b.removal_outcomes.resize(n_rem, -1);
        b.outcomes.resize(n_pat, -1);
        b.probability = prob;
        b.valid = false;
        result.branches.push_back(std::move(b));
    };

    std::function<void(const StateVector&, int, double)> walk_pattern =
        [&](const StateVector& state, int step, double prob) {
            if (step == n_pat) {
                BranchResult b;
                b.removal_outcomes = rem_outcomes;
                b.outcomes = pat_outcomes;
                b.probability = prob;
                b.raw = state;
                PauliFrame frame = p.decode(pat_outcomes);
                b.decoded = apply_decoding(state, frame, out_sites);
                for (const auto& [site, g] : p.post_gates) {
                    b.decoded = apply_1q(std::move(b.decoded), site,
                                         gates::by_name(std::string(1, g)));
                }
                b.fid = fidelity(b.decoded, result.ideal_target);
                result.branches.push_back(std::move(b));
                return;
            }
            const MeasStep& m = layout.pattern[step];
            const double angle = effective_angle(m, p.params, by_site);
            const int last = mode == RunMode::PostselectZeros ? 0 : 1;
            for (int outcome = 0; outcome <= last; ++outcome) {
                Projection proj = project_xy(state, m.site, angle, outcome);
                pat_outcomes.push_back(outcome);
                by_site[m.site] = outcome;
                if (!proj.state.valid) {
                    if (mode == RunMode::Exhaustive) record_dead(0.0);
                } else {
                    walk_pattern(proj.state, step + 1, prob * proj.probability);
                }
                pat_outcomes.pop_back();
                by_site.erase(m.site);
            }
        };

    std::function<void(const StateVector&, int, double)> walk_removals =
        [&](const StateVector& state, int idx, double prob) {
            if (idx == n_rem) {
                walk_pattern(state, 0, prob);
                return;
            }
            const int last = mode == RunMode::PostselectZeros ? 0 : 1;
            for (int outcome = 0; outcome <= last; ++outcome) {
                RemovalResult rr =
                    remove_redundant(state, layout, layout.redundant[idx].site, outcome);
                rem_outcomes.push_back(outcome);
                if (!rr.state.valid) {
                    if (mode == RunMode::Exhaustive) record_dead(0.0);
                } else {
                    StateVector corrected = apply_corrections(std::move(rr.state), rr.corrections);
                    walk_removals(corrected, idx + 1, prob * rr.probability);
                }
                rem_outcomes.pop_back();
            }
        };

    walk_removals(initial, 0, 1.0);
    return result;
}

std::vector<RawBranch> enumerate_raw(const ClusterLayout& layout,
                                     const std::vector<double>& params,
                                     const PhaseAssignment& phases,
                                     const std::vector<Eigen::Vector2cd>& inputs, RunMode mode,
                                     int max_branches) {
    const int n_rem = static_cast<int>(layout.redundant.size());
    const int n_pat = static_cast<int>(layout.pattern.size());
    if (mode == RunMode::Exhaustive && (n_rem + n_pat > 30 ||
                                        (int64_t(1) << (n_rem + n_pat)) > max_branches)) {
        throw std::runtime_error("branch budget exceeded");
    }
    std::vector<RawBranch> out;
    const auto out_sites = layout.output_sites();
    StateVector initial = encode_inputs(layout, inputs, phases);

    std::vector<int> rem_outcomes, pat_outcomes;
    std::map<int, int> by_site;
    const int last = mode == RunMode::PostselectZeros ? 0 : 1;

    std::function<void(const StateVector&, int)> walk_pattern = [&](const StateVector& state,
                                                                    int step) {
        if (step == n_pat) {
            RawBranch b;
            b.removal_outcomes = rem_outcomes;
            b.outcomes = pat_outcomes;
            b.vec = reorder(state, out_sites).amps;
            out.push_back(std::move(b));
            return;
        }
        const MeasStep& m = layout.pattern[step];
        const double angle = effective_angle(m, params, by_site);
        for (int outcome = 0; outcome <= last; ++outcome) {
            StateVector next = project_raw(state, m.site, angle, outcome);
            pat_outcomes.push_back(outcome);
            by_site[m.site] = outcome;
            walk_pattern(next, step + 1);
            pat_outcomes.pop_back();
            by_site.erase(m.site);
        }
    };

    std::function<void(const StateVector&, int)> walk_removals = [&](const StateVector& state,
                                                                     int idx) {
        if (idx == n_rem) {
            walk_pattern(state, 0);
            return;
        }
        const RedundantSite& r = layout.redundant[idx];
        for (int outcome = 0; outcome <= last; ++outcome) {
            StateVector next = project_raw(state, r.site, 0.0, outcome);
            next = apply_corrections(std::move(next), removal_corrections(r, outcome));
            rem_outcomes.push_back(outcome);
            walk_removals(next, idx + 1);
            rem_outcomes.pop_back();
        }
    };

    walk_removals(initial, 0);
    return out;
}

Protocol oracle_protocol(const std::string& builtin, const std::vector<double>& params) {
    Protocol p;
    p.name = builtin;
    p.layout = builtin_layout(builtin);
    if (static_cast<int>(params.size()) != p.layout.num_params) {
        throw std::invalid_argument("layout " + builtin + " needs " +
                                    std::to_string(p.layout.num_params) + " pattern parameters");
    }
    p.params = params;
    p.circuit = circuit_from_layout(p.layout, params);
    p.target_labels = p.layout.output_sites();
    ClusterLayout layout = p.layout;
    p.decode = [layout](const std::vector<int>& outcomes) {
        return stage_frame(layout, outcomes);
    };
    return p;
}

Protocol transfer_protocol(int n) {
    if (n < 2) throw std::invalid_argument("transfer needs a chain of at least two qubits");
    Protocol p;
    p.name = "transfer";
    p.layout = linear_layout(n);
    if (n % 2 == 0) p.circuit = {LogicalGate::h(0)};  // odd Hadamard count survives
    p.target_labels = {n};
    if (n % 2 == 1) {
        p.decode = [n](const std::vector<int>& o) { return transfer_frame(o, n); };
    } else {
        ClusterLayout layout = p.layout;
        p.decode = [layout](const std::vector<int>& o) { return stage_frame(layout, o); };
    }
    return p;
}

ProtocolResult run_transfer(int n, const PhaseAssignment& phases, const InputState& input,
                            RunMode mode) {
    if (mode == RunMode::Exhaustive && n > 15) {
        throw std::runtime_error("branch budget exceeded");
    }
    return run_protocol(transfer_protocol(n), phases, {input}, mode);
}

namespace {

// z-x-z Euler angles of a 2x2 unitary: Rz(a) Rx(b) Rz(c) = u up to phase.
std::array<double, 3> zxz_angles(const Eigen::Matrix2cd& u) {
    const double b = 2.0 * std::atan2(std::abs(u(0, 1)), std::abs(u(0, 0)));
    double apc = 0.0, amc = 0.0;
    if (std::abs(u(0, 0)) > 1e-9) apc = -2.0 * std::arg(u(0, 0));
    if (std::abs(u(0, 1)) > 1e-9) amc = -2.0 * (std::arg(u(0, 1)) + kPi / 2);
    return {(apc + amc) / 2, b, (apc - amc) / 2};
}

}  // namespace

Protocol rotation_protocol(const std::string& variant, const std::array<double, 3>& euler) {
    if (variant != "rot5" && variant != "rot7") {
        throw std::invalid_argument("rotation variant must be rot5 or rot7");
    }
    const double zeta = euler[0], nu = euler[1], xi = euler[2];
    Protocol p;
    p.name = variant;
    p.layout = builtin_layout(variant);
    p.circuit = {LogicalGate::rx(0, xi), LogicalGate::rz(0, nu), LogicalGate::rx(0, zeta)};
    p.target_labels = p.layout.output_sites();
    if (variant == "rot5") {
        p.params = {-xi, -nu, -zeta};
        p.decode = [](const std::vector<int>& o) {
            PauliFrame f = PauliFrame::identity(1);
            f.z[0] = (o[0] ^ o[2]) & 1;
            f.x[0] = (o[1] ^ o[3]) & 1;
            return f;
        };
    } else {
        // The two sx removals leave Hadamards in the wire, so the angles on
        // sites 1, 2, 5 realize the z-x-z decomposition of the same rotation.
        const Eigen::Matrix2cd u = (gates::rx(zeta) * gates::rz(nu) * gates::rx(xi)).eval();
        const auto a = zxz_angles(u);
        p.params = {-a[2], -a[1], -a[0]};
        ClusterLayout layout = p.layout;
        p.decode = [layout](const std::vector<int>& o) { return stage_frame(layout, o); };
    }
    return p;
}

ProtocolResult run_rotation(const std::string& variant, const std::array<double, 3>& euler,
                            const PhaseAssignment& phases, const InputState& input,
                            RunMode mode) {
    return run_protocol(rotation_protocol(variant, euler), phases, {input}, mode);
}

Protocol cnot_protocol(const std::string& variant) {
    Protocol p;
    p.name = variant;
    p.layout = builtin_layout(variant);

    if (variant == "squashed-i" || variant == "squashed-i-redundant") {
        // Line 0 is the control (1 -> 7), line 1 the target (9 -> 15).
        p.circuit = {LogicalGate::h(1), LogicalGate::cz(0, 1), LogicalGate::h(1)};
        p.target_labels = {7, 15};
        const std::vector<int> pattern_sites = [&] {
            std::vector<int> v;
            for (const auto& m : p.layout.pattern) v.push_back(m.site);
            return v;
        }();
        // The restored bridge of the redundant variant carries a residual
        // sz^{s8} on qubit 4, which shows up as a flip of qubit 4's outcome.
        const bool flip4 = variant == "squashed-i-redundant";
        p.decode = [pattern_sites, flip4](const std::vector<int>& o) {
            std::map<int, int> by_site;
            for (size_t i = 0; i < pattern_sites.size(); ++i) by_site[pattern_sites[i]] = o[i];
            if (flip4) by_site[4] ^= by_site[8];
            return squashed_i_frame(by_site);
        };
    } else if (variant == "helix") {
        // Line 0 is the control (in at 5), line 1 the target (in at 2). The
        // drawn output relabelling puts the control out on qubit 10 and the
        // target out on qubit 9.
        p.circuit = {LogicalGate::h(1), LogicalGate::cz(0, 1), LogicalGate::h(1)};
        p.target_labels = {10, 9};
        ClusterLayout layout = p.layout;
        p.decode = [layout](const std::vector<int>& o) { return stage_frame(layout, o); };
    } else if (variant == "cnot4") {
        // Line 0 (sites 1 -> 2) carries the target, line 1 (3 -> 4) the
        // control; outputs are read in the sx eigenbasis, so both outputs are
        // dressed with H before comparing against a plain CNOT.
        p.circuit = {LogicalGate::h(0), LogicalGate::cz(0, 1), LogicalGate::h(0)};
        p.target_labels = {2, 4};
        p.post_gates = {{2, 'H'}, {4, 'H'}};
        p.decode = [](const std::vector<int>& o) { return cnot4_frame(o[0], o[1]); };
    } else {
        throw std::invalid_argument("unknown cnot variant " + variant);
    }
    return p;
}

ProtocolResult run_cnot(const std::string& variant, const PhaseAssignment& phases,
                        const InputState& control, const InputState& target, RunMode mode) {
    Protocol p = cnot_protocol(variant);
    std::vector<InputState> inputs =
        variant == "cnot4" ? std::vector<InputState>{target, control}
                           : std::vector<InputState>{control, target};
    return run_protocol(p, phases, inputs, mode);
}

Eigen::Matrix4cd bbb3_matrix(double alpha, int outcome) {
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
    ClusterLayout layout = bbb3_block(1, 2, 3, alpha);
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    const Eigen::Vector2cd basis[2] = {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)};
    for (int z1 = 0; z1 < 2; ++z1) {
        for (int z0 = 0; z0 < 2; ++z0) {
            auto branches = enumerate_raw(layout, {}, PhaseAssignment::all_zero(),
                                          {basis[z0], basis[z1]}, RunMode::Exhaustive);
            for (const auto& b : branches) {
                if (b.outcomes[0] == outcome) m.col(z0 + 2 * z1) = b.vec;
            }
        }
    }
    return std::sqrt(2.0) * m;
}

}  // namespace mbqc

#pragma once

#include "mbqc/cluster.hpp"
#include "mbqc/pauli_frame.hpp"
#include "mbqc/state_vector.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace mbqc {

// One logical qubit a|0> + b e^{i phi}|1> with a, b real >= 0.
struct InputState {
    Eigen::Vector2cd amps;

    static InputState from_a(double a);
    static InputState from_a_phi(double a, double phi);
    static InputState bloch(double polar, double azimuthal);
    static InputState from_amps(const Eigen::Vector2cd& v);
};

enum class RunMode { Exhaustive, PostselectZeros };

struct LogicalGate {
    enum Kind { H, RZ, RX, CZ } kind = H;
    int line = 0;
    int line2 = 0;
    double angle = 0.0;

    static LogicalGate h(int line) { return {H, line, 0, 0.0}; }
    static LogicalGate rz(int line, double a) { return {RZ, line, 0, a}; }
    static LogicalGate rx(int line, double a) { return {RX, line, 0, a}; }
    static LogicalGate cz(int i, int j) { return {CZ, i, j, 0.0}; }
};

// A runnable measurement-pattern computation: layout plus bound pattern
// parameters, the equivalent circuit it simulates, and the byproduct decode.
struct Protocol {
    std::string name;
    ClusterLayout layout;
    std::vector<double> params;
    std::vector<LogicalGate> circuit;  // apply order
    std::vector<int> target_labels;    // label carrying circuit line l (default: output sites)
    std::function<PauliFrame(const std::vector<int>&)> decode;  // pattern-order outcomes
    std::vector<std::pair<int, char>> post_gates;  // e.g. x-basis read-out dressing
};

struct BranchResult {
    std::vector<int> removal_outcomes;
    std::vector<int> outcomes;  // pattern order
    double probability = 0.0;
    bool valid = true;  // false: ~zero-probability branch, subtree collapsed
    StateVector raw;
    StateVector decoded;
    double fid = 0.0;
};

struct ProtocolResult {
    std::string layout_name;
    std::string phase_desc;
    std::string mode;
    StateVector ideal_target;
    std::vector<BranchResult> branches;

    double total_probability() const;
    double average_fidelity() const;  // Born-weighted over recorded branches
};

// Effective angle of a pattern step: base * (-1)^(xor of flip-site outcomes).
double effective_angle(const MeasStep& m, const std::vector<double>& params,
                       const std::map<int, int>& outcomes_by_site);

// Byproduct frame accumulated by running the layout's block structure for the
// given pattern-order outcomes (fixed angles restricted to 0 and pi/2).
PauliFrame stage_frame(const ClusterLayout& layout, const std::vector<int>& outcomes);

// The ideal target state: circuit applied to the inputs, on target_labels.
StateVector protocol_target(const Protocol& p, const std::vector<InputState>& inputs);

ProtocolResult run_protocol(const Protocol& p, const PhaseAssignment& phases,
                            const std::vector<InputState>& inputs, RunMode mode,
                            int max_branches = 1 << 15);

// Unnormalized branch outputs (exact linear images of the encoded input),
// ordered with logical line l on bit l. Used for effective-operator
// extraction; never collapses zero-probability branches.
struct RawBranch {
    std::vector<int> removal_outcomes;
    std::vector<int> outcomes;
    Eigen::VectorXcd vec;
};
std::vector<RawBranch> enumerate_raw(const ClusterLayout& layout,
                                     const std::vector<double>& params,
                                     const PhaseAssignment& phases,
                                     const std::vector<Eigen::Vector2cd>& inputs, RunMode mode,
                                     int max_branches = 1 << 15);

// Protocol with the true propagated byproduct decode and the equivalent
// circuit of the built-in layout; params bind pattern angles where the
// layout has free ones (bbb1: alpha; box: alpha, beta; rot5/rot7: Euler).
Protocol oracle_protocol(const std::string& builtin, const std::vector<double>& params = {});

// Spec drivers -------------------------------------------------------------

// Bound protocol objects for the standard experiments; inputs are ordered by
// logical line (cnot_protocol documents which line is the control).
Protocol transfer_protocol(int n);
Protocol rotation_protocol(const std::string& variant, const std::array<double, 3>& euler);
Protocol cnot_protocol(const std::string& variant);

ProtocolResult run_transfer(int n, const PhaseAssignment& phases, const InputState& input,
                            RunMode mode);

// euler = (zeta, nu, xi); simulated rotation is Rx(zeta) Rz(nu) Rx(xi).
ProtocolResult run_rotation(const std::string& variant, const std::array<double, 3>& euler,
                            const PhaseAssignment& phases, const InputState& input, RunMode mode);

ProtocolResult run_cnot(const std::string& variant, const PhaseAssignment& phases,
                        const InputState& control, const InputState& target, RunMode mode);

// Effective two-logical-qubit operator of bbb3 extracted by process
// tomography over the computational basis, scaled so the outcome branches
// read diag(1 +- e^{-i alpha}, 1 -+ e^{-i alpha}, ...)/sqrt(2).
Eigen::Matrix4cd bbb3_matrix(double alpha, int outcome);

}  // namespace mbqc

#pragma once

#include "mbqc/state_vector.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace mbqc {

// Byproduct operator U_Sigma on a register of logical lines: per line
// sx^x sz^z, times a global phase i^phase_q. Composition stays in this set.
struct PauliFrame {
    std::vector<std::uint8_t> x, z;
    int phase_q = 0;  // global phase = i^phase_q

    static PauliFrame identity(int lines);
    int num_lines() const { return static_cast<int>(x.size()); }
    bool trivial_paulis() const;
    Complex phase() const;
    bool same_paulis(const PauliFrame& other) const;
};

// Operator product a*b (b acts first).
PauliFrame compose(const PauliFrame& a, const PauliFrame& b);

// Adds the byproduct sx^s on one line (applied after everything so far).
void push_x(PauliFrame& f, int line, int s);
void push_z(PauliFrame& f, int line, int s);

struct FrameGate {
    enum Kind { H, RotZ, CZ } kind = H;
    int line = 0;
    int line2 = 0;    // CZ only
    double alpha = 0;  // RotZ only

    static FrameGate hadamard(int line) { return {H, line, 0, 0.0}; }
    static FrameGate rot_z(int line, double alpha) { return {RotZ, line, 0, alpha}; }
    static FrameGate cz(int i, int j) { return {CZ, i, j, 0.0}; }
};

struct Propagated {
    PauliFrame frame;
    FrameGate gate;
};

// Moves the frame from the right of the gate to its left: G * F = F' * G'.
// H and CZ conjugate the frame and come back unchanged; Rz passes the frame
// through untouched but returns the sign-adapted angle
// Rz(a) sx^x = sx^x Rz((-1)^x a).
Propagated propagate(const PauliFrame& f, const FrameGate& g);

// Closed-form byproduct of the length-N transfer chain (N odd, N-1 outcomes):
// z = s1 xor s3 xor ..., x = s2 xor s4 xor ...
PauliFrame transfer_frame(const std::vector<int>& outcomes, int n);

// Closed-form byproduct of the four-qubit CNOT chain:
// line 0 gets sx^{s1}, line 1 gets sx^{s1 xor s3}.
PauliFrame cnot4_frame(int s1, int s3);

// Closed-form byproduct of the squashed-I CNOT; outcomes keyed by site id for
// the 13 measured sites. Line 0 is the output at site 7, line 1 at site 15.
PauliFrame squashed_i_frame(const std::map<int, int>& outcomes);

// Next adaptive measurement angle for the five-qubit Euler rotation pattern,
// given the outcomes recorded so far (0..3 of them). euler = (zeta, nu, xi).
double rotation_angles(const std::array<double, 3>& euler,
                       const std::vector<int>& outcomes_so_far);

// Applies the decoding operator (the frame's inverse) to the output qubits.
// Line i of the frame acts on output_sites[i].
StateVector apply_decoding(StateVector s, const PauliFrame& f,
                           const std::vector<int>& output_sites);

}  // namespace mbqc

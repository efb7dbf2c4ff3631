#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace mbqc {

using Complex = std::complex<double>;
using Gate2 = Eigen::Matrix2cd;

struct ClusterLayout;

// Dense pure state over labeled qubits. Bit j of an amplitude index is the
// computational-basis value of the qubit at position j of `labels`, so
// labels[0] is the least significant bit.
struct StateVector {
    std::vector<int> labels;
    Eigen::VectorXcd amps;
    bool valid = true;

    int num_qubits() const { return static_cast<int>(labels.size()); }
    int position(int site) const;
    bool has_site(int site) const;
    double norm_sq() const { return amps.squaredNorm(); }
};

namespace gates {

Gate2 h();
Gate2 x();
Gate2 y();
Gate2 z();
Gate2 s();
// Rz(a) = diag(e^{-ia/2}, e^{+ia/2}), Rx(a) = exp(-ia sx/2).
Gate2 rz(double alpha);
Gate2 rx(double alpha);
Gate2 by_name(const std::string& name);

}  // namespace gates

StateVector new_plus_state(int n, const std::vector<int>& labels);

// Single-qubit state |psi> on one labeled site.
StateVector single_qubit_state(int label, const Eigen::Vector2cd& psi);

// Kronecker product; `b`'s qubits end up above `a`'s (higher bits).
StateVector tensor(const StateVector& a, const StateVector& b);

StateVector apply_1q(StateVector s, int site, const Gate2& g);

// Controlled phase with unwanted phase theta on the |11> component:
// diag(1, 1, 1, -e^{i theta}). theta = 0 is the ideal S^{ab}.
StateVector apply_cphase(StateVector s, int a, int b, double theta);

struct Projection {
    double probability = 0.0;
    StateVector state;  // measured qubit removed; valid=false on the ~zero-probability branch
};

// Projects onto |+>^alpha (outcome 0) or |->^alpha (outcome 1) where
// |+->^alpha = (|0> +- e^{i alpha}|1>)/sqrt(2), removes the site, renormalizes.
Projection project_xy(const StateVector& s, int site, double alpha, int outcome);

// <x|y> after reordering y's labels to x's order.
Complex overlap(const StateVector& x, const StateVector& y);

// |<x|y>|^2
double fidelity(const StateVector& x, const StateVector& y);

// Returns a copy of `s` with qubits permuted to the given label order.
StateVector reorder(const StateVector& s, const std::vector<int>& new_labels);

struct EigenCheckResult {
    bool is_eigenstate = false;
    int eigenvalue = 0;     // +1 or -1 when is_eigenstate
    double residual = 0.0;  // ||K psi - <psi|K|psi> psi|| otherwise
};

// Applies the correlation operator K^(site) = sx^(site) (x) sz^(neighbors)
// and checks whether the state is a +-1 eigenstate within 1e-10.
EigenCheckResult correlation_eigencheck(const StateVector& s, const ClusterLayout& layout,
                                        int site);

}  // namespace mbqc

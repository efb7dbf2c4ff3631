#pragma once

#include "mbqc/protocols.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace mbqc {

// Golub-Welsch nodes/weights: Legendre on [-1,1] (weight 1), physicists'
// Hermite (weight e^{-x^2}).
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct BlochQuadrature {
    int polar_order = 16;
    int azimuth_order = 16;
};

// Uniform average over the Bloch sphere surface, Gauss-Legendre in cos(polar)
// times a periodic midpoint rule in azimuth.
double bloch_average(const std::function<double(const InputState&)>& f,
                     const BlochQuadrature& q = {});

enum class GaussianScheme { GaussHermite, MonteCarlo };

struct GaussianSpec {
    GaussianScheme scheme = GaussianScheme::GaussHermite;
    int order = 20;      // Gauss-Hermite points per dimension
    int samples = 20000;  // Monte Carlo
    std::uint64_t seed = 1;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;  // zero for quadrature
    long evals = 0;
};

// Expectation of f over `dims` i.i.d. mean-zero Gaussian phases of standard
// deviation sigma. sigma = 0 evaluates f at the origin. The common-theta
// coupling is the dims = 1 case.
Estimate gaussian_average(const std::function<double(const std::vector<double>&)>& f, int dims,
                          double sigma, const GaussianSpec& spec = {}, long eval_budget = 0);

// Deterministic per-point seed derivation.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Haar-random single-qubit state driven by the given rng stream.
InputState random_input(std::uint64_t& state);
std::uint64_t splitmix64(std::uint64_t& state);
double random_normal(std::uint64_t& state);

// --- Logical-register view of a protocol configuration ---------------------
//
// Per measurement branch, the unnormalized decoded map F_s = Dress D_s M_s on
// the 2^L-dimensional logical register (line l on bit l), plus the ideal
// unitary. The Born-weighted decoded fidelity of input psi is
// sum_s |<U psi|F_s psi>|^2; the postselected fidelity uses branch 0 only.
struct LogicalProtocol {
    int lines = 1;
    Eigen::MatrixXcd target;
    std::vector<Eigen::MatrixXcd> maps;
    std::vector<std::vector<int>> outcomes;
};

LogicalProtocol logical_protocol(const Protocol& p, const PhaseAssignment& phases, RunMode mode,
                                 int max_branches = 1 << 15);

double born_average_fidelity(const LogicalProtocol& lp, const Eigen::VectorXcd& psi);
double postselect_fidelity(const LogicalProtocol& lp, const Eigen::VectorXcd& psi);

// Exact Haar average of the Born-weighted fidelity over single-qubit inputs
// (one logical line): sum_s (|tr(U^dag F_s)|^2 + tr(F_s^dag F_s)) / 6.
double born_bloch_average_exact(const LogicalProtocol& lp);

Eigen::VectorXcd logical_input(const std::vector<InputState>& per_line);

}  // namespace mbqc

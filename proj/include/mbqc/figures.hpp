#pragma once

#include "mbqc/averaging.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mbqc {

constexpr double kClassicalThreshold = 2.0 / 3.0;

struct FidelityReport {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::uint64_t seed = 0;
    std::string notes;  // estimator configuration, one line

    void validate() const;  // fidelities in [0,1], grid axis non-decreasing
    std::string to_csv() const;
};

struct SweepBudget {
    int gh_order = 20;       // Gauss-Hermite points per dimension (<= 4 dims)
    int mc_samples = 20000;  // Monte Carlo samples (> 4 dims or joint input sampling)
    int bloch_order = 16;    // Bloch quadrature order per angle
    long eval_budget = 200000000;  // cap on branch x quadrature evaluations
};

// Preset figure data grids:
//   fig6a: rotation fidelity vs sigma, four Euler sets (rot5, postselected)
//   fig6b: F_R5 - F_R7 vs sigma for the same Euler sets
//   fig8a: squashed-I CNOT fidelity vs (theta, a) at a = c, postselected
//   fig8b: CNOT fidelity vs sigma for cnot4 / helix / squashed-I / redundant
//   fig9a: transfer fidelity vs common theta for N = 3,5,7,9, Bloch+outcome avg
//   fig9b: transfer fidelity vs sigma (i.i.d. phases) for N = 3,5,7,9
FidelityReport figure(const std::string& name, std::uint64_t seed,
                      const SweepBudget& budget = {});

std::vector<std::string> figure_names();

// Generic single-protocol sweep (the CLI `sweep` command).
struct SweepSpec {
    std::string protocol;               // transfer | rotate | cnot
    std::vector<std::string> variants;  // transfer: "3","5",...; rotate: rot5|rot7; cnot: layouts
    std::array<double, 3> euler{0, 0, 0};
    std::string axis = "theta";  // theta (common phase) | sigma (gaussian)
    std::vector<double> grid;
    std::string coupling = "iid";  // sigma axis: iid | common
    RunMode mode = RunMode::Exhaustive;
    bool bloch = true;   // average over inputs; otherwise use a (and c)
    double a = 1.0;      // real input amplitude(s) when bloch = false
    double c = 1.0;
    std::uint64_t seed = 1;
    SweepBudget budget;
};

FidelityReport sweep(const SweepSpec& spec);

// Shared evaluation helpers (used by figures, sweep and the acceptance suite).

// Fidelity of one protocol at one phase assignment: Born-weighted over
// outcomes (exhaustive) or the all-zero branch (postselect-zeros), either for
// fixed inputs or averaged over the input Bloch sphere(s).
double point_fidelity(const Protocol& proto, const PhaseAssignment& phases, RunMode mode,
                      bool bloch, const std::vector<InputState>& fixed_inputs,
                      int bloch_order = 16);

// Transfer: Born-weighted outcome average, Bloch-averaged over inputs.
double transfer_bloch_fidelity(int n, const PhaseAssignment& phases, int bloch_order = 16);

// Rotation: postselected fidelity, Bloch-averaged over inputs.
double rotation_bloch_fidelity(const std::string& variant, const std::array<double, 3>& euler,
                               const PhaseAssignment& phases, int bloch_order = 16);

// Rotation: postselected fidelity averaged over the real input family
// a|0> + sqrt(1-a^2)|1> with a uniform on [0,1].
double rotation_a_fidelity(const std::string& variant, const std::array<double, 3>& euler,
                           const PhaseAssignment& phases, int order = 16);

// Transfer: Gaussian average over i.i.d. edge phases.
Estimate transfer_gaussian_fidelity(int n, double sigma, const SweepBudget& budget,
                                    std::uint64_t seed);

// Rotation: Gaussian average with one common phase draw per shot (correlated
// edge noise), uniform-a inputs. Deterministic Gauss-Hermite.
Estimate rotation_gaussian_fidelity(const std::string& variant,
                                    const std::array<double, 3>& euler, double sigma,
                                    const SweepBudget& budget, std::uint64_t seed);

// CNOT: postselected fidelity for fixed real inputs a, c.
double cnot_postselect_fidelity(const std::string& variant, const PhaseAssignment& phases,
                                double a, double c);

// CNOT: Monte Carlo over Haar input pairs and i.i.d. Gaussian phases.
Estimate cnot_gaussian_fidelity(const std::string& variant, double sigma, int samples,
                                std::uint64_t seed);

// Paired comparison of the four CNOT constructions on common random numbers:
// per sample, the same input pair and the same phase draw per shared slot.
// Returns the per-variant means and the adjacent-difference estimates
// (cnot4-helix, helix-squashed-i, squashed-i-redundant), whose standard
// errors come from the paired per-sample gaps.
struct CnotComparison {
    std::array<Estimate, 4> fidelity;  // cnot4, helix, squashed-i, squashed-i-redundant
    std::array<Estimate, 3> gap;
};
CnotComparison cnot_paired_comparison(double sigma, int samples, std::uint64_t seed);

}  // namespace mbqc

#pragma once

#include "mbqc/protocols.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mbqc {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Correlation-operator eigenvalue checks: +1 at every site of every ideal
// built-in layout; nonzero residual everywhere once theta = 0.5 noise is on.
std::vector<CheckResult> stabilizer_suite();

// Staged (block-by-block) versus monolithic entangling: identical branch
// probabilities and post-measurement states, including nonzero phases.
std::vector<CheckResult> observation1_suite(std::uint64_t seed);

// theta = 0 equivalence of every built-in pattern with its circuit: all
// outcome branches, decoded, against the circuit target, for random inputs.
std::vector<CheckResult> oracle_suite(int inputs_per_layout, std::uint64_t seed);

// Closed-form byproducts against step-by-step propagation, and the published
// special cases.
std::vector<CheckResult> byproduct_suite();

bool all_pass(const std::vector<CheckResult>& results);

// Staged execution for Observation-1 tests: entangle/measure stage by stage
// (staged = true) or all edges first (staged = false). Returns one
// (probability, post-state on outputs) pair per outcome set, enumerated in
// pattern order.
struct ScheduledBranch {
    std::vector<int> outcomes;
    double probability = 0.0;
    StateVector state;
};
std::vector<ScheduledBranch> run_schedule(const ClusterLayout& layout,
                                          const std::vector<double>& params,
                                          const PhaseAssignment& phases,
                                          const std::vector<Eigen::Vector2cd>& inputs,
                                          bool staged);

}  // namespace mbqc

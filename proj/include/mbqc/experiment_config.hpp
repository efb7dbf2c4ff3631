#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace mbqc {

// Flat description of one CLI experiment; serializes to key = value lines.
// parse(serialize(c)) == c and serialize is canonical.
struct ExperimentConfig {
    std::string command = "transfer";  // transfer|rotate|cnot|bbb3|verify|sweep|figure
    std::string variant;               // layout name, figure name, or transfer N list
    int n = 3;
    std::array<double, 3> euler{0, 0, 0};
    double alpha = 1.5707963267948966;  // bbb3
    int outcome = 0;
    double a = 1.0, c = 1.0;
    std::string mode = "exhaustive";  // exhaustive | postselect-zeros
    std::string axis = "theta";       // theta | sigma
    double grid_min = 0.0, grid_max = 0.0, grid_step = 0.0;  // step 0: single point grid_min
    std::string coupling = "iid";     // common | iid
    bool bloch = false;
    std::string suite = "all";  // verify
    std::uint64_t seed = 1;
    int gh_order = 20;
    int mc_samples = 20000;
    int bloch_order = 16;
    long eval_budget = 200000000;
    std::string out_path;

    std::string serialize() const;
    static ExperimentConfig parse(const std::string& text);
    void validate() const;
};

}  // namespace mbqc

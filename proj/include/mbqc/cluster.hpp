#pragma once

#include "mbqc/state_vector.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mbqc {

enum class Role { Input, Body, Output, InOut };

struct SiteRole {
    Role role = Role::Body;
    int line = -1;  // logical line for input/output/inout sites
};

struct Edge {
    int a = 0, b = 0;   // a < b
    std::string slot;   // phase slot name, "theta_{a,b}" by default
};

// One measurement of the pattern. The effective angle is
//   base * (-1)^(xor of the outcomes of flip_sites)
// where base is base_angle, or params[param] when param >= 0.
struct MeasStep {
    int site = 0;
    double base_angle = 0.0;
    int param = -1;
    std::vector<int> flip_sites;
};

// A removable qubit. Wire kind: a chain qubit whose sx removal contracts the
// wire, exactly restorable when the downstream neighbor carries no other
// bonds. Bridge kind: a qubit splitting a bbb3 bridge bond; its removal is
// exactly restorable with diagonal corrections on the bridge end points.
struct RedundantSite {
    enum Kind { Wire, Bridge };
    int site = 0;
    int downstream = 0;  // surviving neighbor that receives the local corrections
    Kind kind = Wire;
    int aux = -1;  // bridge only: the far in/out qubit of the bbb3 structure
};

// Block boundary for staged (block-by-block) execution: indices into
// edges/pattern of the parent layout, plus what the block is and which
// logical lines it touches.
struct Stage {
    std::string kind;  // "bbb1" | "bbb2" | "bbb3"
    int line = -1;
    int line2 = -1;  // bbb2/bbb3 only
    std::vector<int> edge_indices;
    std::vector<int> meas_indices;
};

struct ClusterLayout {
    std::string name;
    std::vector<int> sites;
    std::vector<Edge> edges;
    std::map<int, SiteRole> roles;
    std::vector<MeasStep> pattern;
    std::vector<RedundantSite> redundant;
    std::vector<Stage> stages;  // in-memory only, not serialized
    int num_params = 0;

    int num_lines() const;
    std::vector<int> input_sites() const;   // indexed by logical line
    std::vector<int> output_sites() const;  // indexed by logical line
    std::vector<int> neighbors(int site) const;
    bool has_edge(int a, int b) const;
    const MeasStep* find_meas(int site) const;
    bool is_redundant(int site) const;
    void validate() const;
};

std::string slot_name(int a, int b);

// Unwanted-phase assignment for the entangling gates.
class PhaseAssignment {
  public:
    enum class Mode { AllZero, Common, Explicit, GaussianIid };

    static PhaseAssignment all_zero();
    static PhaseAssignment common(double theta);
    static PhaseAssignment explicit_map(std::map<std::string, double> values);
    static PhaseAssignment gaussian_iid(double sigma, std::uint64_t seed);

    // Concrete slot -> theta map covering every edge of the layout. Gaussian
    // mode draws i.i.d. values, deterministic in the seed and edge order.
    std::map<std::string, double> resolve(const ClusterLayout& layout) const;
    Mode mode() const { return mode_; }
    std::string describe() const;

  private:
    Mode mode_ = Mode::AllZero;
    double theta_ = 0.0;
    double sigma_ = 0.0;
    std::uint64_t seed_ = 0;
    std::map<std::string, double> values_;
};

// S^C_D |+>_C: every site in |+>, then one noisy controlled phase per edge.
StateVector entangle_all(const ClusterLayout& layout, const PhaseAssignment& phases);

// Pre-entangling product state: inputs on the input sites, |+> elsewhere.
StateVector encode_product(const ClusterLayout& layout,
                           const std::vector<Eigen::Vector2cd>& inputs);

// Input sites prepared in the given single-qubit states (one per logical
// line), everything else in |+>, then all edge gates.
StateVector encode_inputs(const ClusterLayout& layout,
                          const std::vector<Eigen::Vector2cd>& inputs,
                          const PhaseAssignment& phases);

// A block for concatenation: a layout over the shared site-id namespace plus
// the map from its local logical lines to the lines of the combined circuit.
struct ConcatBlock {
    ClusterLayout layout;
    std::vector<int> line_map;
};

// Glues blocks in order; consecutive blocks must overlap in exactly the site
// carrying each shared logical line (output of one block = input of the next).
ClusterLayout concat(const std::vector<ConcatBlock>& blocks, const std::string& name = "");

// Elementary blocks.
ClusterLayout bbb1_block(int from, int to, const MeasStep& meas);
ClusterLayout bbb1_block(int from, int to, double alpha);
ClusterLayout bbb2_block(int a, int b);
ClusterLayout bbb3_block(int a, int bridge, int b, double alpha);

// Built-in layouts: bbb1, bbb2, bbb3, box, cnot4, rot5, rot7, bridge-ebb,
// squashed-i, squashed-i-redundant, helix, linear(N).
ClusterLayout builtin_layout(const std::string& name);
ClusterLayout linear_layout(int n);
std::vector<std::string> builtin_names();

struct LocalCorrection {
    int site = 0;
    std::string gate;  // "X", "Z", "S" or "H", applied in list order
    bool operator==(const LocalCorrection&) const = default;
};

struct RemovalResult {
    double probability = 0.0;
    StateVector state;
    std::vector<LocalCorrection> corrections;
};

// The local operations owed after removing `entry.site` with the given
// outcome (applied in list order).
std::vector<LocalCorrection> removal_corrections(const RedundantSite& entry, int outcome);

// Measures a redundant site in the sx eigenbasis and removes it. The returned
// corrections restore the smaller cluster exactly at theta = 0; they are not
// applied here.
RemovalResult remove_redundant(const StateVector& s, const ClusterLayout& layout, int site,
                               int outcome);

StateVector apply_corrections(StateVector s, const std::vector<LocalCorrection>& corrections);

// Text serialization (sites/edges/roles/pattern/redundant), bit-exact
// round-trip: parse(serialize(x)) == x and serialize is canonical.
std::string serialize_layout(const ClusterLayout& layout);
ClusterLayout parse_layout(const std::string& text);

}  // namespace mbqc

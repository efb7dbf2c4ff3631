#include "mbqc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mbqc {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Deterministic standard normals independent of library distributions.
class NormalDraw {
  public:
    explicit NormalDraw(std::uint64_t seed) : rng_(seed) {}
    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

  private:
    double uniform() {
        // in (0,1]
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

bool is_input_like(Role r) { return r == Role::Input || r == Role::InOut; }
bool is_output_like(Role r) { return r == Role::Output || r == Role::InOut; }

}  // namespace

std::string slot_name(int a, int b) {
    if (a > b) std::swap(a, b);
    return "theta_{" + std::to_string(a) + "," + std::to_string(b) + "}";
}

int ClusterLayout::num_lines() const {
    int lines = 0;
    for (const auto& [site, sr] : roles) {
        if (sr.line >= 0) lines = std::max(lines, sr.line + 1);
    }
    return lines;
}

std::vector<int> ClusterLayout::input_sites() const {
    std::vector<int> out(num_lines(), -1);
    for (const auto& [site, sr] : roles) {
        if (is_input_like(sr.role)) out[sr.line] = site;
    }
    return out;
}

std::vector<int> ClusterLayout::output_sites() const {
    std::vector<int> out(num_lines(), -1);
    for (const auto& [site, sr] : roles) {
        if (is_output_like(sr.role)) out[sr.line] = site;
    }
    return out;
}

std::vector<int> ClusterLayout::neighbors(int site) const {
    std::vector<int> out;
    for (const auto& e : edges) {
        if (e.a == site) out.push_back(e.b);
        if (e.b == site) out.push_back(e.a);
    }
    return out;
}

bool ClusterLayout::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (const auto& e : edges) {
        if (e.a == a && e.b == b) return true;
    }
    return false;
}

const MeasStep* ClusterLayout::find_meas(int site) const {
    for (const auto& m : pattern) {
        if (m.site == site) return &m;
    }
    return nullptr;
}

bool ClusterLayout::is_redundant(int site) const {
    for (const auto& r : redundant) {
        if (r.site == site) return true;
    }
    return false;
}

void ClusterLayout::validate() const {
    std::set<int> site_set(sites.begin(), sites.end());
    if (site_set.size() != sites.size()) throw std::invalid_argument(name + ": duplicate sites");
    if (roles.size() != sites.size()) {
        throw std::invalid_argument(name + ": roles do not cover the sites exactly");
    }
    for (const auto& [site, sr] : roles) {
        if (!site_set.count(site)) throw std::invalid_argument(name + ": role for unknown site");
        if ((sr.line >= 0) != (sr.role != Role::Body)) {
            throw std::invalid_argument(name + ": line assignment inconsistent with role");
        }
    }

    const int lines = num_lines();
    std::vector<int> in_count(lines, 0), out_count(lines, 0);
    for (const auto& [site, sr] : roles) {
        if (is_input_like(sr.role)) in_count[sr.line]++;
        if (is_output_like(sr.role)) out_count[sr.line]++;
    }
    for (int l = 0; l < lines; ++l) {
        if (in_count[l] != 1 || out_count[l] != 1) {
            throw std::invalid_argument(name + ": each line needs one input and one output site");
        }
    }

    std::set<std::pair<int, int>> edge_set;
    for (const auto& e : edges) {
        if (e.a == e.b) throw std::invalid_argument(name + ": self-loop edge");
        if (!site_set.count(e.a) || !site_set.count(e.b)) {
            throw std::invalid_argument(name + ": edge references unknown site");
        }
        if (e.a > e.b) throw std::invalid_argument(name + ": edge not normalized");
        if (!edge_set.insert({e.a, e.b}).second) {
            throw std::invalid_argument(name + ": duplicate edge");
        }
    }

    // Every body/input site is either measured by the pattern or removed as
    // redundant; output and in-out sites are neither.
    std::set<int> handled;
    for (const auto& m : pattern) {
        if (!handled.insert(m.site).second) {
            throw std::invalid_argument(name + ": site measured twice");
        }
        for (int f : m.flip_sites) {
            if (!site_set.count(f)) throw std::invalid_argument(name + ": flip site unknown");
        }
    }
    for (const auto& r : redundant) {
        if (!handled.insert(r.site).second) {
            throw std::invalid_argument(name + ": redundant site also measured");
        }
        if (!site_set.count(r.downstream)) {
            throw std::invalid_argument(name + ": redundant downstream site unknown");
        }
        if (!has_edge(r.site, r.downstream)) {
            throw std::invalid_argument(name + ": redundant site not adjacent to downstream");
        }
    }
    for (const auto& [site, sr] : roles) {
        const bool should_measure = sr.role == Role::Body || sr.role == Role::Input;
        if (should_measure != (handled.count(site) > 0)) {
            throw std::invalid_argument(name + ": pattern does not match roles at site " +
                                        std::to_string(site));
        }
    }
    for (const auto& m : pattern) {
        if (m.param >= num_params) {
            throw std::invalid_argument(name + ": pattern parameter index out of range");
        }
    }
}

PhaseAssignment PhaseAssignment::all_zero() { return PhaseAssignment{}; }

PhaseAssignment PhaseAssignment::common(double theta) {
    PhaseAssignment p;
    p.mode_ = Mode::Common;
    p.theta_ = theta;
    return p;
}

PhaseAssignment PhaseAssignment::explicit_map(std::map<std::string, double> values) {
    PhaseAssignment p;
    p.mode_ = Mode::Explicit;
    p.values_ = std::move(values);
    return p;
}

PhaseAssignment PhaseAssignment::gaussian_iid(double sigma, std::uint64_t seed) {
    if (sigma < 0) throw std::invalid_argument("negative sigma");
    PhaseAssignment p;
    p.mode_ = Mode::GaussianIid;
    p.sigma_ = sigma;
    p.seed_ = seed;
    return p;
}

std::map<std::string, double> PhaseAssignment::resolve(const ClusterLayout& layout) const {
    std::map<std::string, double> out;
    switch (mode_) {
        case Mode::AllZero:
            for (const auto& e : layout.edges) out[e.slot] = 0.0;
            break;
        case Mode::Common:
            for (const auto& e : layout.edges) out[e.slot] = theta_;
            break;
        case Mode::Explicit:
            for (const auto& e : layout.edges) {
                auto it = values_.find(e.slot);
                if (it == values_.end()) {
                    throw std::invalid_argument("phase slot " + e.slot + " not covered");
                }
                out[e.slot] = it->second;
            }
            break;
        case Mode::GaussianIid: {
            NormalDraw draw(seed_);
            for (const auto& e : layout.edges) out[e.slot] = sigma_ * draw.next();
            break;
        }
    }
    return out;
}

std::string PhaseAssignment::describe() const {
    switch (mode_) {
        case Mode::AllZero:
            return "all-zero";
        case Mode::Common:
            return "common-theta(" + fmt_double(theta_) + ")";
        case Mode::Explicit:
            return "explicit(" + std::to_string(values_.size()) + " slots)";
        case Mode::GaussianIid:
            return "iid-gaussian(sigma=" + fmt_double(sigma_) +
                   ",seed=" + std::to_string(seed_) + ")";
    }
    return "";
}

StateVector entangle_all(const ClusterLayout& layout, const PhaseAssignment& phases) {
    const auto thetas = phases.resolve(layout);
    StateVector s = new_plus_state(static_cast<int>(layout.sites.size()), layout.sites);
    for (const auto& e : layout.edges) {
        s = apply_cphase(std::move(s), e.a, e.b, thetas.at(e.slot));
    }
    return s;
}

StateVector encode_product(const ClusterLayout& layout,
                           const std::vector<Eigen::Vector2cd>& inputs) {
    const auto in_sites = layout.input_sites();
    if (inputs.size() != in_sites.size()) {
        throw std::invalid_argument("need one input state per logical line");
    }
    const Eigen::Vector2cd plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    StateVector s;
    bool first = true;
    for (int site : layout.sites) {
        Eigen::Vector2cd v = plus;
        for (size_t l = 0; l < in_sites.size(); ++l) {
            if (in_sites[l] == site) v = inputs[l];
        }
        StateVector q = single_qubit_state(site, v);
        s = first ? q : tensor(s, q);
        first = false;
    }
    return s;
}

StateVector encode_inputs(const ClusterLayout& layout,
                          const std::vector<Eigen::Vector2cd>& inputs,
                          const PhaseAssignment& phases) {
    const auto thetas = phases.resolve(layout);
    StateVector s = encode_product(layout, inputs);
    for (const auto& e : layout.edges) {
        s = apply_cphase(std::move(s), e.a, e.b, thetas.at(e.slot));
    }
    return s;
}

ClusterLayout bbb1_block(int from, int to, const MeasStep& meas) {
    ClusterLayout l;
    l.name = "bbb1";
    l.sites = {from, to};
    l.edges = {{std::min(from, to), std::max(from, to), slot_name(from, to)}};
    l.roles[from] = {Role::Input, 0};
    l.roles[to] = {Role::Output, 0};
    MeasStep m = meas;
    m.site = from;
    l.pattern = {m};
    l.num_params = 0;
    for (const auto& p : l.pattern) l.num_params = std::max(l.num_params, p.param + 1);
    return l;
}

ClusterLayout bbb1_block(int from, int to, double alpha) {
    return bbb1_block(from, to, MeasStep{from, alpha, -1, {}});
}

ClusterLayout bbb2_block(int a, int b) {
    ClusterLayout l;
    l.name = "bbb2";
    l.sites = {a, b};
    l.edges = {{std::min(a, b), std::max(a, b), slot_name(a, b)}};
    l.roles[a] = {Role::InOut, 0};
    l.roles[b] = {Role::InOut, 1};
    return l;
}

ClusterLayout bbb3_block(int a, int bridge, int b, double alpha) {
    ClusterLayout l;
    l.name = "bbb3";
    l.sites = {a, bridge, b};
    l.edges = {{std::min(a, bridge), std::max(a, bridge), slot_name(a, bridge)},
               {std::min(bridge, b), std::max(bridge, b), slot_name(bridge, b)}};
    l.roles[a] = {Role::InOut, 0};
    l.roles[bridge] = {Role::Body, -1};
    l.roles[b] = {Role::InOut, 1};
    l.pattern = {MeasStep{bridge, alpha, -1, {}}};
    return l;
}

ClusterLayout concat(const std::vector<ConcatBlock>& blocks, const std::string& name) {
    if (blocks.empty()) throw std::invalid_argument("concat needs at least one block");
    ClusterLayout out;
    out.name = name;

    std::map<int, int> line_head;   // global line -> site currently carrying it
    std::map<int, int> line_input;  // global line -> first site
    std::set<int> seen_sites;
    std::set<std::pair<int, int>> seen_edges;

    for (const auto& blk : blocks) {
        const auto& bl = blk.layout;
        const auto b_in = bl.input_sites();
        const auto b_out = bl.output_sites();
        if (blk.line_map.size() != b_in.size()) {
            throw std::invalid_argument("concat: line map size mismatch for block " + bl.name);
        }

        // Gluing: the block picks up each shared logical line exactly at the
        // site where the previous block left it.
        for (size_t l = 0; l < b_in.size(); ++l) {
            const int g = blk.line_map[l];
            auto it = line_head.find(g);
            if (it != line_head.end()) {
                if (it->second != b_in[l]) {
                    throw std::invalid_argument("concat: overlap violation on line " +
                                                std::to_string(g));
                }
            } else {
                line_input[g] = b_in[l];
                line_head[g] = b_in[l];
            }
        }
        for (int site : bl.sites) {
            bool glued = false;
            for (size_t l = 0; l < b_in.size(); ++l) {
                if (b_in[l] == site) glued = true;
            }
            if (seen_sites.count(site)) {
                if (!glued) {
                    throw std::invalid_argument("concat: role conflict at site " +
                                                std::to_string(site));
                }
            } else {
                seen_sites.insert(site);
                out.sites.push_back(site);
            }
        }

        Stage stage;
        stage.kind = bl.name;
        stage.line = blk.line_map.empty() ? -1 : blk.line_map[0];
        stage.line2 = blk.line_map.size() > 1 ? blk.line_map[1] : -1;
        for (const auto& e : bl.edges) {
            if (!seen_edges.insert({e.a, e.b}).second) {
                throw std::invalid_argument("concat: duplicate edge");
            }
            stage.edge_indices.push_back(static_cast<int>(out.edges.size()));
            out.edges.push_back(e);
        }
        for (const auto& m : bl.pattern) {
            stage.meas_indices.push_back(static_cast<int>(out.pattern.size()));
            out.pattern.push_back(m);
        }
        out.stages.push_back(std::move(stage));

        for (size_t l = 0; l < b_out.size(); ++l) {
            line_head[blk.line_map[l]] = b_out[l];
        }
    }

    for (int site : out.sites) out.roles[site] = {Role::Body, -1};
    for (const auto& [g, site] : line_input) {
        const bool fixed = line_head.at(g) == site;
        out.roles[site] = {fixed ? Role::InOut : Role::Input, g};
    }
    for (const auto& [g, site] : line_head) {
        if (out.roles[site].role == Role::Body) out.roles[site] = {Role::Output, g};
    }

    for (const auto& m : out.pattern) out.num_params = std::max(out.num_params, m.param + 1);
    out.validate();
    return out;
}

ClusterLayout linear_layout(int n) {
    if (n < 1) throw std::invalid_argument("linear layout needs at least one site");
    if (n == 1) {
        ClusterLayout l;
        l.name = "linear(1)";
        l.sites = {1};
        l.roles[1] = {Role::InOut, 0};
        return l;
    }
    std::vector<ConcatBlock> blocks;
    for (int i = 1; i < n; ++i) {
        blocks.push_back({bbb1_block(i, i + 1, 0.0), {0}});
    }
    return concat(blocks, "linear(" + std::to_string(n) + ")");
}

namespace {

ClusterLayout make_rot5() {
    std::vector<ConcatBlock> blocks;
    blocks.push_back({bbb1_block(1, 2, MeasStep{1, 0.0, -1, {}}), {0}});
    blocks.push_back({bbb1_block(2, 3, MeasStep{2, 0.0, 0, {1}}), {0}});
    blocks.push_back({bbb1_block(3, 4, MeasStep{3, 0.0, 1, {2}}), {0}});
    blocks.push_back({bbb1_block(4, 5, MeasStep{4, 0.0, 2, {1, 3}}), {0}});
    ClusterLayout l = concat(blocks, "rot5");
    l.num_params = 3;
    return l;
}

ClusterLayout make_rot7() {
    // Seven-qubit wire; qubits 3 and 6 are the redundant ones, removed by
    // their sx (angle 0) measurements. Each removal leaves a Hadamard in the
    // simulated wire, so the rotation angles on sites 1, 2, 5 realize the
    // z-x-z Euler decomposition instead of rot5's x-z-x one.
    std::vector<ConcatBlock> blocks;
    blocks.push_back({bbb1_block(1, 2, MeasStep{1, 0.0, 0, {}}), {0}});
    blocks.push_back({bbb1_block(2, 3, MeasStep{2, 0.0, 1, {1}}), {0}});
    blocks.push_back({bbb1_block(3, 4, MeasStep{3, 0.0, -1, {}}), {0}});
    blocks.push_back({bbb1_block(4, 5, MeasStep{4, 0.0, -1, {}}), {0}});
    blocks.push_back({bbb1_block(5, 6, MeasStep{5, 0.0, 2, {2, 4}}), {0}});
    blocks.push_back({bbb1_block(6, 7, MeasStep{6, 0.0, -1, {}}), {0}});
    ClusterLayout l = concat(blocks, "rot7");
    l.num_params = 3;
    return l;
}

ClusterLayout make_box() {
    std::vector<ConcatBlock> blocks;
    blocks.push_back({bbb2_block(1, 2), {0, 1}});
    blocks.push_back({bbb1_block(1, 3, MeasStep{1, 0.0, 0, {}}), {0}});
    blocks.push_back({bbb1_block(2, 4, MeasStep{2, 0.0, 1, {}}), {1}});
    blocks.push_back({bbb2_block(3, 4), {0, 1}});
    ClusterLayout l = concat(blocks, "box");
    l.num_params = 2;
    return l;
}

ClusterLayout make_cnot4() {
    std::vector<ConcatBlock> blocks;
    blocks.push_back({bbb1_block(1, 2, 0.0), {0}});
    blocks.push_back({bbb2_block(2, 3), {0, 1}});
    blocks.push_back({bbb1_block(3, 4, 0.0), {1}});
    return concat(blocks, "cnot4");
}

ClusterLayout make_bridge_ebb() {
    std::vector<ConcatBlock> blocks;
    blocks.push_back({bbb3_block(1, 2, 3, kPi / 2), {0, 1}});
    blocks.push_back({bbb1_block(1, 4, kPi / 2), {0}});
    blocks.push_back({bbb1_block(3, 5, kPi / 2), {1}});
    return concat(blocks, "bridge-ebb");
}

ClusterLayout make_squashed_i() {
    const double y = kPi / 2;
    std::vector<ConcatBlock> blocks;
    blocks.push_back({bbb1_block(1, 2, 0.0), {0}});
    blocks.push_back({bbb1_block(2, 3, y), {0}});
    blocks.push_back({bbb1_block(3, 4, y), {0}});
    blocks.push_back({bbb1_block(9, 10, 0.0), {1}});
    blocks.push_back({bbb1_block(10, 11, 0.0), {1}});
    blocks.push_back({bbb1_block(11, 12, 0.0), {1}});
    blocks.push_back({bbb3_block(4, 8, 12, y), {0, 1}});
    blocks.push_back({bbb1_block(4, 5, y), {0}});
    blocks.push_back({bbb1_block(12, 13, y), {1}});
    blocks.push_back({bbb1_block(5, 6, y), {0}});
    blocks.push_back({bbb1_block(6, 7, y), {0}});
    blocks.push_back({bbb1_block(13, 14, 0.0), {1}});
    blocks.push_back({bbb1_block(14, 15, 0.0), {1}});
    return concat(blocks, "squashed-i");
}

ClusterLayout make_squashed_i_redundant() {
    ClusterLayout l = make_squashed_i();
    l.name = "squashed-i-redundant";
    l.stages.clear();
    // An extra bridging qubit 16 sits on the 8-12 link; its removal hands the
    // inherited phases to qubit 12.
    l.sites.push_back(16);
    l.roles[16] = {Role::Body, -1};
    std::vector<Edge> edges;
    for (const auto& e : l.edges) {
        if (e.a == 8 && e.b == 12) {
            edges.push_back({8, 16, slot_name(8, 16)});
            edges.push_back({12, 16, slot_name(12, 16)});
        } else {
            edges.push_back(e);
        }
    }
    l.edges = std::move(edges);
    RedundantSite r;
    r.site = 16;
    r.downstream = 12;
    r.kind = RedundantSite::Bridge;
    r.aux = 4;
    l.redundant = {r};
    l.validate();
    return l;
}

ClusterLayout make_helix() {
    std::vector<ConcatBlock> blocks;
    blocks.push_back({bbb1_block(5, 1, 0.0), {0}});
    blocks.push_back({bbb2_block(1, 2), {0, 1}});
    blocks.push_back({bbb1_block(1, 3, 0.0), {0}});
    blocks.push_back({bbb1_block(2, 4, 0.0), {1}});
    blocks.push_back({bbb2_block(3, 4), {0, 1}});
    blocks.push_back({bbb1_block(3, 6, 0.0), {0}});
    blocks.push_back({bbb1_block(6, 9, 0.0), {0}});
    blocks.push_back({bbb1_block(4, 7, 0.0), {1}});
    blocks.push_back({bbb1_block(7, 8, 0.0), {1}});
    blocks.push_back({bbb1_block(8, 10, 0.0), {1}});
    return concat(blocks, "helix");
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"bbb1",  "bbb2",       "bbb3",      "box",   "cnot4", "rot5",
            "rot7",  "bridge-ebb", "squashed-i", "squashed-i-redundant", "helix"};
}

ClusterLayout builtin_layout(const std::string& name) {
    if (name == "bbb1") {
        ClusterLayout l = bbb1_block(1, 2, MeasStep{1, 0.0, 0, {}});
        l.name = "bbb1";
        l.num_params = 1;
        l.stages.push_back({"bbb1", 0, -1, {0}, {0}});
        l.validate();
        return l;
    }
    if (name == "bbb2") {
        ClusterLayout l = bbb2_block(1, 2);
        l.stages.push_back({"bbb2", 0, 1, {0}, {}});
        l.validate();
        return l;
    }
    if (name == "bbb3") {
        ClusterLayout l = bbb3_block(1, 2, 3, kPi / 2);
        l.stages.push_back({"bbb3", 0, 1, {0, 1}, {0}});
        l.validate();
        return l;
    }
    if (name == "box") return make_box();
    if (name == "cnot4") return make_cnot4();
    if (name == "rot5") return make_rot5();
    if (name == "rot7") return make_rot7();
    if (name == "bridge-ebb") return make_bridge_ebb();
    if (name == "squashed-i") return make_squashed_i();
    if (name == "squashed-i-redundant") return make_squashed_i_redundant();
    if (name == "helix") return make_helix();
    if (name.rfind("linear(", 0) == 0 && name.back() == ')') {
        const int n = std::stoi(name.substr(7, name.size() - 8));
        return linear_layout(n);
    }
    throw std::invalid_argument("unknown layout name " + name);
}

std::vector<LocalCorrection> removal_corrections(const RedundantSite& entry, int outcome) {
    std::vector<LocalCorrection> out;
    if (entry.kind == RedundantSite::Wire) {
        if (outcome) out.push_back({entry.downstream, "X"});
        out.push_back({entry.downstream, "H"});
    } else {
        // Bridge: the halved bond realizes CZ with stray z-rotations; diagonal
        // gates on the bridge end points restore the ideal bond exactly.
        out.push_back({entry.aux, "S"});
        out.push_back({outcome ? entry.aux : entry.downstream, "Z"});
    }
    return out;
}

RemovalResult remove_redundant(const StateVector& s, const ClusterLayout& layout, int site,
                               int outcome) {
    const RedundantSite* entry = nullptr;
    for (const auto& r : layout.redundant) {
        if (r.site == site) entry = &r;
    }
    if (!entry) {
        throw std::invalid_argument("site " + std::to_string(site) + " is not redundant");
    }
    Projection p = project_xy(s, site, 0.0, outcome);
    RemovalResult out;
    out.probability = p.probability;
    out.state = std::move(p.state);
    out.corrections = removal_corrections(*entry, outcome);
    return out;
}

StateVector apply_corrections(StateVector s, const std::vector<LocalCorrection>& corrections) {
    for (const auto& c : corrections) {
        s = apply_1q(std::move(s), c.site, gates::by_name(c.gate));
    }
    return s;
}

std::string serialize_layout(const ClusterLayout& layout) {
    std::ostringstream os;
    os << "layout " << layout.name << "\n";
    os << "params " << layout.num_params << "\n";
    os << "sites";
    for (int s : layout.sites) os << ' ' << s;
    os << "\n";
    for (const auto& e : layout.edges) {
        os << "edge " << e.a << ' ' << e.b << ' ' << e.slot << "\n";
    }
    for (int s : layout.sites) {
        const auto& sr = layout.roles.at(s);
        os << "role " << s << ' ';
        switch (sr.role) {
            case Role::Input:
                os << "input " << sr.line;
                break;
            case Role::Output:
                os << "output " << sr.line;
                break;
            case Role::InOut:
                os << "inout " << sr.line;
                break;
            case Role::Body:
                os << "body";
                break;
        }
        os << "\n";
    }
    for (const auto& m : layout.pattern) {
        os << "meas " << m.site << ' ' << fmt_double(m.base_angle) << ' ' << m.param << " flips";
        for (int f : m.flip_sites) os << ' ' << f;
        os << "\n";
    }
    for (const auto& r : layout.redundant) {
        os << "redundant " << r.site << ' ' << r.downstream;
        if (r.kind == RedundantSite::Bridge) {
            os << " bridge " << r.aux;
        } else {
            os << " wire";
        }
        os << "\n";
    }
    return os.str();
}

ClusterLayout parse_layout(const std::string& text) {
    ClusterLayout l;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("layout parse error at line " + std::to_string(lineno) +
                                        ": " + why);
        };
        if (key == "layout") {
            ls >> l.name;
        } else if (key == "params") {
            if (!(ls >> l.num_params)) fail("bad params");
        } else if (key == "sites") {
            int s;
            while (ls >> s) l.sites.push_back(s);
        } else if (key == "edge") {
            Edge e;
            if (!(ls >> e.a >> e.b >> e.slot)) fail("bad edge");
            l.edges.push_back(e);
        } else if (key == "role") {
            int site;
            std::string role;
            if (!(ls >> site >> role)) fail("bad role");
            SiteRole sr;
            if (role == "body") {
                sr = {Role::Body, -1};
            } else {
                int ln;
                if (!(ls >> ln)) fail("role needs a line");
                if (role == "input") sr = {Role::Input, ln};
                else if (role == "output") sr = {Role::Output, ln};
                else if (role == "inout") sr = {Role::InOut, ln};
                else fail("unknown role " + role);
            }
            l.roles[site] = sr;
        } else if (key == "meas") {
            MeasStep m;
            std::string flips;
            if (!(ls >> m.site >> m.base_angle >> m.param >> flips) || flips != "flips") {
                fail("bad meas");
            }
            int f;
            while (ls >> f) m.flip_sites.push_back(f);
            l.pattern.push_back(m);
        } else if (key == "redundant") {
            RedundantSite r;
            std::string kind;
            if (!(ls >> r.site >> r.downstream >> kind)) fail("bad redundant");
            if (kind == "wire") {
                r.kind = RedundantSite::Wire;
            } else if (kind == "bridge") {
                r.kind = RedundantSite::Bridge;
                if (!(ls >> r.aux)) fail("bridge redundant needs an aux site");
            } else {
                fail("unknown redundant kind " + kind);
            }
            l.redundant.push_back(r);
        } else {
            fail("unknown key " + key);
        }
    }
    l.validate();
    return l;
}

EigenCheckResult correlation_eigencheck(const StateVector& s, const ClusterLayout& layout,
                                        int site) {
    if (!layout.roles.count(site)) {
        throw std::invalid_argument("site " + std::to_string(site) + " not in layout");
    }
    StateVector k = apply_1q(s, site, gates::x());
    for (int nb : layout.neighbors(site)) {
        k = apply_1q(std::move(k), nb, gates::z());
    }
    const Complex c = s.amps.dot(k.amps);
    EigenCheckResult out;
    out.residual = (k.amps - c * s.amps).norm();
    const double re = c.real();
    if (out.residual <= 1e-10 && std::abs(std::abs(re) - 1.0) <= 1e-10 &&
        std::abs(c.imag()) <= 1e-10) {
        out.is_eigenstate = true;
        out.eigenvalue = re > 0 ? 1 : -1;
        out.residual = 0.0;
    }
    return out;
}

}  // namespace mbqc

#include "mbqc/experiment_config.hpp"

#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mbqc {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string ExperimentConfig::serialize() const {
    std::ostringstream os;
    os << "command = " << command << "\n";
    os << "variant = " << variant << "\n";
    os << "n = " << n << "\n";
    os << "euler = " << fmt_double(euler[0]) << ' ' << fmt_double(euler[1]) << ' '
       << fmt_double(euler[2]) << "\n";
    os << "alpha = " << fmt_double(alpha) << "\n";
    os << "outcome = " << outcome << "\n";
    os << "a = " << fmt_double(a) << "\n";
    os << "c = " << fmt_double(c) << "\n";
    os << "mode = " << mode << "\n";
    os << "axis = " << axis << "\n";
    os << "grid_min = " << fmt_double(grid_min) << "\n";
    os << "grid_max = " << fmt_double(grid_max) << "\n";
    os << "grid_step = " << fmt_double(grid_step) << "\n";
    os << "coupling = " << coupling << "\n";
    os << "bloch = " << (bloch ? 1 : 0) << "\n";
    os << "suite = " << suite << "\n";
    os << "seed = " << seed << "\n";
    os << "gh_order = " << gh_order << "\n";
    os << "mc_samples = " << mc_samples << "\n";
    os << "bloch_order = " << bloch_order << "\n";
    os << "eval_budget = " << eval_budget << "\n";
    os << "out_path = " << out_path << "\n";
    return os.str();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig c;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::istringstream vs(value);
        auto bad = [&](const std::string& why) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ", field " +
                                        key + ": " + why);
        };
        if (key == "command") c.command = value;
        else if (key == "variant") c.variant = value;
        else if (key == "n") { if (!(vs >> c.n)) bad("integer expected"); }
        else if (key == "euler") {
            if (!(vs >> c.euler[0] >> c.euler[1] >> c.euler[2])) bad("three numbers expected");
        }
        else if (key == "alpha") { if (!(vs >> c.alpha)) bad("number expected"); }
        else if (key == "outcome") { if (!(vs >> c.outcome)) bad("bit expected"); }
        else if (key == "a") { if (!(vs >> c.a)) bad("number expected"); }
        else if (key == "c") { if (!(vs >> c.c)) bad("number expected"); }
        else if (key == "mode") c.mode = value;
        else if (key == "axis") c.axis = value;
        else if (key == "grid_min") { if (!(vs >> c.grid_min)) bad("number expected"); }
        else if (key == "grid_max") { if (!(vs >> c.grid_max)) bad("number expected"); }
        else if (key == "grid_step") { if (!(vs >> c.grid_step)) bad("number expected"); }
        else if (key == "coupling") c.coupling = value;
        else if (key == "bloch") { int b; if (!(vs >> b)) bad("0/1 expected"); c.bloch = b != 0; }
        else if (key == "suite") c.suite = value;
        else if (key == "seed") { if (!(vs >> c.seed)) bad("integer expected"); }
        else if (key == "gh_order") { if (!(vs >> c.gh_order)) bad("integer expected"); }
        else if (key == "mc_samples") { if (!(vs >> c.mc_samples)) bad("integer expected"); }
        else if (key == "bloch_order") { if (!(vs >> c.bloch_order)) bad("integer expected"); }
        else if (key == "eval_budget") { if (!(vs >> c.eval_budget)) bad("integer expected"); }
        else if (key == "out_path") c.out_path = value;
        else bad("unknown key");
    }
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    static const std::set<std::string> commands = {"transfer", "rotate", "cnot",  "bbb3",
                                                   "verify",   "sweep",  "figure"};
    if (!commands.count(command)) throw std::invalid_argument("unknown command " + command);
    if (mode != "exhaustive" && mode != "postselect-zeros") {
        throw std::invalid_argument("mode must be exhaustive or postselect-zeros");
    }
    if (axis != "theta" && axis != "sigma") {
        throw std::invalid_argument("axis must be theta or sigma");
    }
    if (coupling != "common" && coupling != "iid") {
        throw std::invalid_argument("coupling must be common or iid");
    }
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
    if (n < 2 || n > 20) throw std::invalid_argument("n out of range [2, 20]");
    if (a < 0 || a > 1 || c < 0 || c > 1) throw std::invalid_argument("a, c must be in [0, 1]");
    if (grid_step < 0) throw std::invalid_argument("grid_step must be >= 0");
    if (grid_step > 0 && grid_max < grid_min) {
        throw std::invalid_argument("grid_max must be >= grid_min");
    }
    if (gh_order < 1 || gh_order > 128) throw std::invalid_argument("gh_order out of range");
    if (mc_samples < 1) throw std::invalid_argument("mc_samples must be positive");
    if (bloch_order < 1 || bloch_order > 256) {
        throw std::invalid_argument("bloch_order out of range");
    }
    if (eval_budget < 1) throw std::invalid_argument("eval_budget must be positive");
}

}  // namespace mbqc

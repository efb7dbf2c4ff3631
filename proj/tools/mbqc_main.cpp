#include "CLI11.hpp"

#include "mbqc/experiment_config.hpp"
#include "mbqc/figures.hpp"
#include "mbqc/verify.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

// Atomic write: temp file in place, then rename.
void write_file(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::invalid_argument("cannot open output file " + tmp);
        os << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::invalid_argument("cannot rename temporary file to " + path);
    }
}

std::vector<double> config_grid(const mbqc::ExperimentConfig& cfg) {
    if (cfg.grid_step <= 0.0) return {cfg.grid_min};
    std::vector<double> g;
    for (int i = 0;; ++i) {
        const double v = cfg.grid_min + i * cfg.grid_step;
        if (v > cfg.grid_max + 1e-9) break;
        g.push_back(v);
    }
    return g;
}

mbqc::SweepSpec to_sweep_spec(const mbqc::ExperimentConfig& cfg) {
    mbqc::SweepSpec spec;
    spec.protocol = cfg.command;
    if (cfg.command == "transfer") {
        std::string v = cfg.variant.empty() ? std::to_string(cfg.n) : cfg.variant;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) spec.variants.push_back(item);
    } else {
        std::stringstream ss(cfg.variant);
        std::string item;
        while (std::getline(ss, item, ',')) spec.variants.push_back(item);
        if (spec.variants.empty()) {
            throw std::invalid_argument("missing variant for command " + cfg.command);
        }
    }
    spec.euler = cfg.euler;
    spec.axis = cfg.axis;
    spec.grid = config_grid(cfg);
    spec.coupling = cfg.coupling;
    spec.mode = cfg.mode == "postselect-zeros" ? mbqc::RunMode::PostselectZeros
                                               : mbqc::RunMode::Exhaustive;
    spec.bloch = cfg.bloch;
    spec.a = cfg.a;
    spec.c = cfg.c;
    spec.seed = cfg.seed;
    spec.budget.gh_order = cfg.gh_order;
    spec.budget.mc_samples = cfg.mc_samples;
    spec.budget.bloch_order = cfg.bloch_order;
    spec.budget.eval_budget = cfg.eval_budget;
    return spec;
}

int run_config(const mbqc::ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.command == "figure") {
        mbqc::SweepBudget budget;
        budget.gh_order = cfg.gh_order;
        budget.mc_samples = cfg.mc_samples;
        budget.bloch_order = cfg.bloch_order;
        budget.eval_budget = cfg.eval_budget;
        mbqc::FidelityReport r = mbqc::figure(cfg.variant, cfg.seed, budget);
        write_file(cfg.out_path, r.to_csv());
        return kExitOk;
    }
    if (cfg.command == "verify") {
        std::vector<mbqc::CheckResult> results;
        auto append = [&](const std::vector<mbqc::CheckResult>& v) {
            results.insert(results.end(), v.begin(), v.end());
        };
        if (cfg.suite == "all" || cfg.suite == "stabilizer") append(mbqc::stabilizer_suite());
        if (cfg.suite == "all" || cfg.suite == "observation1") {
            append(mbqc::observation1_suite(cfg.seed));
        }
        if (cfg.suite == "all" || cfg.suite == "oracle") append(mbqc::oracle_suite(20, cfg.seed));
        if (cfg.suite == "all" || cfg.suite == "byproduct") append(mbqc::byproduct_suite());
        if (results.empty()) throw std::invalid_argument("unknown suite " + cfg.suite);
        bool ok = true;
        for (const auto& r : results) {
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
            if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
            std::cout << "\n";
            ok = ok && r.pass;
        }
        return ok ? kExitOk : kExitFailure;
    }
    if (cfg.command == "bbb3") {
        Eigen::Matrix4cd m = mbqc::bbb3_matrix(cfg.alpha, cfg.outcome);
        std::ostringstream os;
        os << "row,col,re,im\r\n";
        char buf[96];
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g\r\n", i, j, m(i, j).real(),
                              m(i, j).imag());
                os << buf;
            }
        }
        write_file(cfg.out_path, os.str());
        return kExitOk;
    }
    // transfer | rotate | cnot | sweep
    mbqc::ExperimentConfig c = cfg;
    if (c.command == "sweep") {
        throw std::invalid_argument("sweep needs a config file with a protocol command");
    }
    mbqc::FidelityReport r = mbqc::sweep(to_sweep_spec(c));
    write_file(c.out_path, r.to_csv());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mbqc: measurement-pattern simulations on noisy cluster states"};
    app.require_subcommand(1);

    mbqc::ExperimentConfig cfg;
    std::string config_path;
    std::string grid_arg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (flags override its values)");
        sub->add_option("--seed", cfg.seed, "rng seed");
        sub->add_option("--out", cfg.out_path, "output CSV path (default stdout)");
        sub->add_option("--mode", cfg.mode, "exhaustive | postselect-zeros");
        sub->add_option("--gh-order", cfg.gh_order, "Gauss-Hermite order per dimension");
        sub->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo samples");
        sub->add_option("--bloch-order", cfg.bloch_order, "Bloch quadrature order");
        sub->add_option("--eval-budget", cfg.eval_budget, "cap on total evaluations");
    };
    auto add_axis = [&](CLI::App* sub) {
        sub->add_option("--theta", cfg.grid_min, "common unwanted phase (single point)");
        sub->add_option("--sigma", cfg.grid_min, "gaussian phase spread (single point)");
        sub->add_option("--grid", grid_arg, "axis grid min:max:step");
        sub->add_option("--coupling", cfg.coupling, "common | iid (sigma axis)");
    };

    CLI::App* transfer = app.add_subcommand("transfer", "state transfer through a linear cluster");
    transfer->add_option("--n", cfg.n, "chain length (comma list via --variant)");
    transfer->add_option("--variant", cfg.variant, "comma-separated chain lengths");
    transfer->add_option("--a", cfg.a, "fixed input amplitude (disables Bloch averaging)");
    add_axis(transfer);
    add_common(transfer);

    CLI::App* rotate = app.add_subcommand("rotate", "single-qubit Euler rotation");
    rotate->add_option("--variant", cfg.variant, "rot5 | rot7 (comma list allowed)");
    rotate->add_option("--euler", cfg.euler, "zeta nu xi");
    rotate->add_option("--a", cfg.a, "fixed input amplitude (disables Bloch averaging)");
    add_axis(rotate);
    add_common(rotate);

    CLI::App* cnot = app.add_subcommand("cnot", "two-qubit CNOT simulations");
    cnot->add_option("--variant", cfg.variant,
                     "cnot4 | helix | squashed-i | squashed-i-redundant (comma list)");
    cnot->add_option("--a", cfg.a, "control amplitude");
    cnot->add_option("--c", cfg.c, "target amplitude");
    cnot->add_flag("--bloch", cfg.bloch, "average over input pairs (sigma axis)");
    add_axis(cnot);
    add_common(cnot);

    CLI::App* bbb3 = app.add_subcommand("bbb3", "effective BBB3 gate matrix");
    bbb3->add_option("--alpha", cfg.alpha, "measurement angle");
    bbb3->add_option("--outcome", cfg.outcome, "measurement outcome bit");
    add_common(bbb3);

    CLI::App* verify = app.add_subcommand("verify", "invariant suites");
    verify->add_option("--suite", cfg.suite,
                       "all | stabilizer | observation1 | oracle | byproduct");
    verify->add_option("--seed", cfg.seed, "rng seed");

    CLI::App* sweepc = app.add_subcommand("sweep", "run a sweep from a config file");
    add_common(sweepc);

    CLI::App* figurec = app.add_subcommand("figure", "emit a preset figure data grid");
    figurec->add_option("--name", cfg.variant, "fig6a|fig6b|fig8a|fig8b|fig9a|fig9b")
        ->required();
    add_common(figurec);

    CLI::App* layoutc = app.add_subcommand("layout", "emit or check a layout file");
    std::string layout_name, layout_check;
    layoutc->add_option("--name", layout_name, "built-in layout name");
    layoutc->add_option("--check", layout_check, "parse a layout file and verify round-trip");
    layoutc->add_option("--out", cfg.out_path, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        // Config file first, then flags override whatever was passed.
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw std::invalid_argument("cannot read config file " + config_path);
            std::stringstream buf;
            buf << is.rdbuf();
            mbqc::ExperimentConfig file_cfg = mbqc::ExperimentConfig::parse(buf.str());
            mbqc::ExperimentConfig merged = file_cfg;
            for (CLI::App* sub :
                 {transfer, rotate, cnot, bbb3, verify, sweepc, figurec}) {
                if (!sub->parsed()) continue;
                auto take = [&](const char* flag, auto member) {
                    if (sub->get_option_no_throw(flag) && sub->count(flag)) {
                        merged.*member = cfg.*member;
                    }
                };
                take("--seed", &mbqc::ExperimentConfig::seed);
                take("--out", &mbqc::ExperimentConfig::out_path);
                take("--mode", &mbqc::ExperimentConfig::mode);
                take("--gh-order", &mbqc::ExperimentConfig::gh_order);
                take("--mc-samples", &mbqc::ExperimentConfig::mc_samples);
                take("--bloch-order", &mbqc::ExperimentConfig::bloch_order);
                take("--eval-budget", &mbqc::ExperimentConfig::eval_budget);
                take("--n", &mbqc::ExperimentConfig::n);
                take("--variant", &mbqc::ExperimentConfig::variant);
                take("--name", &mbqc::ExperimentConfig::variant);
                take("--a", &mbqc::ExperimentConfig::a);
                take("--c", &mbqc::ExperimentConfig::c);
                take("--alpha", &mbqc::ExperimentConfig::alpha);
                take("--outcome", &mbqc::ExperimentConfig::outcome);
                take("--suite", &mbqc::ExperimentConfig::suite);
                take("--coupling", &mbqc::ExperimentConfig::coupling);
            }
            cfg = merged;
        }

        for (CLI::App* sub : {transfer, rotate, cnot, bbb3, verify, sweepc, figurec}) {
            if (sub->parsed() && sub != sweepc) cfg.command = sub->get_name();
        }
        if (sweepc->parsed() && config_path.empty()) {
            throw std::invalid_argument("sweep needs --config");
        }

        if (layoutc->parsed()) {
            if (!layout_check.empty()) {
                std::ifstream is(layout_check);
                if (!is) throw std::invalid_argument("cannot read " + layout_check);
                std::stringstream buf;
                buf << is.rdbuf();
                mbqc::ClusterLayout l = mbqc::parse_layout(buf.str());
                const std::string again = mbqc::serialize_layout(l);
                if (again != buf.str()) {
                    std::cerr << "layout file is not in canonical form\n";
                    return kExitFailure;
                }
                std::cout << "ok: " << l.name << "\n";
                return kExitOk;
            }
            if (layout_name.empty()) throw std::invalid_argument("layout needs --name or --check");
            write_file(cfg.out_path, mbqc::serialize_layout(mbqc::builtin_layout(layout_name)));
            return kExitOk;
        }

        // Axis selection from which single-point flag was used.
        for (CLI::App* sub : {transfer, rotate, cnot}) {
            if (!sub->parsed()) continue;
            if (sub->count("--sigma")) cfg.axis = "sigma";
            if (sub->count("--theta")) cfg.axis = "theta";
            if (sub->count("--grid")) {
                double lo, hi, step;
                if (std::sscanf(grid_arg.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3) {
                    throw std::invalid_argument("--grid expects min:max:step");
                }
                cfg.grid_min = lo;
                cfg.grid_max = hi;
                cfg.grid_step = step;
            }
            // Bloch-average inputs unless an explicit amplitude was given.
            if (sub != cnot) cfg.bloch = sub->count("--a") == 0;
            // Rotations and CNOTs follow the postselected protocols unless
            // a mode was requested explicitly.
            if (sub != transfer && !sub->count("--mode") && config_path.empty()) {
                cfg.mode = "postselect-zeros";
            }
        }

        return run_config(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        return what.rfind("budget exceeded", 0) == 0 ? kExitBudget : kExitFailure;
    }
}

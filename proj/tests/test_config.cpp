#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mbqc/experiment_config.hpp"

using namespace mbqc;

TEST_CASE("config round trip is the identity") {
    ExperimentConfig c;
    c.command = "cnot";
    c.variant = "squashed-i";
    c.euler = {0.25, -1.5, 3.0};
    c.a = 0.5;
    c.c = 0.25;
    c.mode = "postselect-zeros";
    c.axis = "sigma";
    c.grid_min = 0.2;
    c.grid_max = 1.0;
    c.grid_step = 0.2;
    c.coupling = "common";
    c.bloch = true;
    c.seed = 987654321;
    c.mc_samples = 5000;
    c.out_path = "out.csv";

    const std::string text = c.serialize();
    ExperimentConfig p = ExperimentConfig::parse(text);
    CHECK(p.serialize() == text);

    ExperimentConfig q = ExperimentConfig::parse(p.serialize());
    CHECK(q.serialize() == text);
}

TEST_CASE("config validation diagnostics") {
    ExperimentConfig c;
    c.mode = "sometimes";
    CHECK_THROWS_WITH_AS(c.validate(), "mode must be exhaustive or postselect-zeros",
                         std::invalid_argument);

    CHECK_THROWS_AS(ExperimentConfig::parse("command = transfer\nn = banana\n"),
                    std::invalid_argument);
    try {
        ExperimentConfig::parse("command = transfer\nn = banana\n");
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        CHECK(what.find("line 2") != std::string::npos);
        CHECK(what.find("n") != std::string::npos);
    }

    CHECK_THROWS_AS(ExperimentConfig::parse("weird = 1\n"), std::invalid_argument);
}

TEST_CASE("comments and spacing are tolerated") {
    ExperimentConfig p = ExperimentConfig::parse(
        "# an experiment\ncommand = transfer\n\nn   =   9\nseed=77\n");
    CHECK(p.command == "transfer");
    CHECK(p.n == 9);
    CHECK(p.seed == 77);
}

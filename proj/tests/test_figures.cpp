#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mbqc/figures.hpp"

using namespace mbqc;

TEST_CASE("report validation and CSV shape") {
    FidelityReport r;
    r.name = "demo";
    r.columns = {"theta", "F_3"};
    r.rows = {{0.0, 1.0}, {0.1, 0.9}};
    r.validate();
    const std::string csv = r.to_csv();
    CHECK(csv.rfind("theta,F_3\r\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);

    FidelityReport bad = r;
    bad.rows[1][1] = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::logic_error);
    FidelityReport unordered = r;
    unordered.rows[1][0] = -0.5;
    CHECK_THROWS_AS(unordered.validate(), std::logic_error);
}

TEST_CASE("generic sweep") {
    SweepSpec spec;
    spec.protocol = "transfer";
    spec.variants = {"3"};
    spec.axis = "theta";
    spec.grid = {0.0};
    spec.bloch = true;
    FidelityReport r = sweep(spec);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.columns.back() == "classical_threshold");
    CHECK(r.rows[0][1] == doctest::Approx(1.0).epsilon(1e-8));

    SweepSpec tiny = spec;
    tiny.axis = "sigma";
    tiny.grid = {0.5};
    tiny.budget.eval_budget = 3;
    CHECK_THROWS_AS(sweep(tiny), std::runtime_error);

    SweepSpec unknown = spec;
    unknown.protocol = "teleport";
    CHECK_THROWS_AS(sweep(unknown), std::invalid_argument);
}

TEST_CASE("figure names and determinism") {
    CHECK(figure_names().size() == 6);
    CHECK_THROWS_AS(figure("fig0x", 1), std::invalid_argument);

    SweepBudget cheap;
    cheap.mc_samples = 200;
    FidelityReport a = figure("fig6b", 9, cheap);
    FidelityReport b = figure("fig6b", 9, cheap);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.rows.size() == 11);
}

TEST_CASE("fig9a grid comes out ordered in N") {
    FidelityReport r = figure("fig9a", 1);
    CHECK(r.rows.size() == 25);
    REQUIRE(r.columns.size() == 6);
    for (const auto& row : r.rows) {
        CHECK(row[1] >= row[2] - 1e-9);  // F_3 >= F_5
        CHECK(row[2] >= row[3] - 1e-9);
        CHECK(row[3] >= row[4] - 1e-9);
        CHECK(row[5] == doctest::Approx(2.0 / 3.0));
    }
    CHECK(r.rows[0][1] == doctest::Approx(1.0).epsilon(1e-8));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mbqc/protocols.hpp"
#include "mbqc/verify.hpp"

#include <cmath>
#include <random>

using namespace mbqc;

namespace {

Complex ei(double t) { return std::exp(Complex(0, t)); }

// Stand-alone brute-force transfer oracle for N = 3: builds the encoded noisy
// chain from the product formula, applies the two bra contractions and the
// decoding Paulis with explicit index arithmetic only.
struct Transfer3Branch {
    double probability;
    Eigen::Vector2cd decoded;  // normalized
};

Transfer3Branch transfer3_oracle(const Eigen::Vector2cd& in, double t1, double t2, int s1,
                                 int s2) {
    Complex amps[8];
    for (int z = 0; z < 8; ++z) {
        const int z1 = z & 1, z2 = (z >> 1) & 1, z3 = (z >> 2) & 1;
        Complex a = in[z1] * 0.5;
        if (z1 && z2) a *= -ei(t1);
        if (z2 && z3) a *= -ei(t2);
        amps[z] = a;
    }
    // measure qubit 1 at angle 0, outcome s1: <s1| = (<0| + (-1)^{s1} <1|)/sqrt(2)
    Complex after1[4];
    for (int z = 0; z < 4; ++z) {
        const int z2 = z & 1, z3 = (z >> 1) & 1;
        after1[z] = (amps[(z2 << 1) | (z3 << 2)] +
                     (s1 ? -1.0 : 1.0) * amps[1 | (z2 << 1) | (z3 << 2)]) /
                    std::sqrt(2.0);
    }
    Eigen::Vector2cd after2;
    for (int z3 = 0; z3 < 2; ++z3) {
        after2[z3] =
            (after1[z3 << 1] + (s2 ? -1.0 : 1.0) * after1[1 | (z3 << 1)]) / std::sqrt(2.0);
    }
    Transfer3Branch out;
    out.probability = after2.squaredNorm();
    after2 /= std::sqrt(out.probability);
    // decoding operator: (sz^{s1} sx^{s2})^dag applied as X then Z
    if (s2) std::swap(after2[0], after2[1]);
    if (s1) after2[1] = -after2[1];
    out.decoded = after2;
    return out;
}

InputState haar_input(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double c = 2.0 * u(rng) - 1.0;
    return InputState::bloch(std::acos(c), 2.0 * M_PI * u(rng));
}

}  // namespace

TEST_CASE("theta=0 oracle equivalence across the built-ins") {
    auto results = oracle_suite(5, 12345);
    for (const auto& r : results) {
        INFO(r.name, " ", r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("transfer against the stand-alone three-qubit oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto [t1, t2] : std::vector<std::pair<double, double>>{
             {M_PI, M_PI}, {0.6, -0.3}, {u(rng), u(rng)}}) {
        const InputState in = haar_input(rng);
        std::map<std::string, double> vals{{slot_name(1, 2), t1}, {slot_name(2, 3), t2}};
        ProtocolResult r = run_transfer(3, PhaseAssignment::explicit_map(vals), in,
                                        RunMode::Exhaustive);
        REQUIRE(r.branches.size() == 4);
        double total = 0;
        for (const auto& b : r.branches) {
            total += b.probability;
            Transfer3Branch expect = transfer3_oracle(in.amps, t1, t2, b.outcomes[0],
                                                      b.outcomes[1]);
            if (!b.valid) {
                CHECK(expect.probability < 1e-12);
                continue;
            }
            CHECK(b.probability == doctest::Approx(expect.probability).epsilon(1e-10));
            StateVector oracle = single_qubit_state(3, expect.decoded);
            CHECK(fidelity(b.decoded, oracle) == doctest::Approx(1.0).epsilon(1e-10));
            // fidelity against the input itself (identity target)
            StateVector target = single_qubit_state(3, in.amps);
            CHECK(b.fid == doctest::Approx(fidelity(oracle, target)).epsilon(1e-9));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("transfer ideal cases and modes") {
    std::mt19937_64 rng(9);
    const InputState in = haar_input(rng);
    ProtocolResult r = run_transfer(3, PhaseAssignment::all_zero(), in, RunMode::Exhaustive);
    for (const auto& b : r.branches) {
        CHECK(b.fid == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-12));
    }

    // even chains compare against H|psi_in>
    ProtocolResult e = run_transfer(4, PhaseAssignment::all_zero(), in, RunMode::Exhaustive);
    for (const auto& b : e.branches) CHECK(b.fid == doctest::Approx(1.0).epsilon(1e-10));

    ProtocolResult p = run_transfer(5, PhaseAssignment::all_zero(), in,
                                    RunMode::PostselectZeros);
    REQUIRE(p.branches.size() == 1);
    CHECK(p.branches[0].probability == doctest::Approx(1.0 / 16));
    CHECK(p.branches[0].fid == doctest::Approx(1.0));

    CHECK_THROWS_AS(run_transfer(17, PhaseAssignment::all_zero(), in, RunMode::Exhaustive),
                    std::runtime_error);
}

TEST_CASE("postselected rotation reproduces the closed-form output state") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int rep = 0; rep < 4; ++rep) {
        const double zeta = u(rng), nu = u(rng), xi = u(rng);
        const double t1 = u(rng), t2 = u(rng), t3 = u(rng), t4 = u(rng);
        const double a = 0.5 * (u(rng) / 1.5 + 1.0);
        const double b = std::sqrt(1 - a * a);

        const Complex A = a * (1.0 + ei(xi) + ei(nu) - ei(xi + nu + t2)) +
                          b * (1.0 + ei(nu) - ei(xi + t1) + ei(xi + nu + t1 + t2));
        const Complex B =
            a * (1.0 + ei(xi) - ei(nu + t3) + ei(xi + nu + t2 + t3)) +
            b * (1.0 - ei(xi + t1) - ei(nu + t3) - ei(xi + nu + t1 + t2 + t3));
        // both kets unnormalized: |+> ~ |0> + |1>, and |0> - e^{i t4}|1>
        Eigen::Vector2cd formula;
        formula[0] = A + B * ei(zeta);
        formula[1] = A - B * ei(zeta) * ei(t4);
        formula.normalize();

        std::map<std::string, double> vals{{slot_name(1, 2), t1},
                                           {slot_name(2, 3), t2},
                                           {slot_name(3, 4), t3},
                                           {slot_name(4, 5), t4}};
        ProtocolResult r = run_rotation("rot5", {zeta, nu, xi},
                                        PhaseAssignment::explicit_map(vals),
                                        InputState::from_a(a), RunMode::PostselectZeros);
        CHECK(fidelity(r.branches[0].raw, single_qubit_state(5, formula)) ==
              doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("rotations: adaptive branches all reach the target at theta = 0") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const char* variant : {"rot5", "rot7"}) {
        const std::array<double, 3> euler = {u(rng), u(rng), u(rng)};
        const InputState in = haar_input(rng);
        ProtocolResult r = run_rotation(variant, euler, PhaseAssignment::all_zero(), in,
                                        RunMode::Exhaustive);
        CHECK(r.total_probability() == doctest::Approx(1.0).epsilon(1e-10));
        for (const auto& b : r.branches) {
            CHECK(b.fid == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    // identity rotation
    ProtocolResult id = run_rotation("rot5", {0, 0, 0}, PhaseAssignment::all_zero(),
                                     haar_input(rng), RunMode::Exhaustive);
    for (const auto& b : id.branches) CHECK(b.fid == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cnot4 decodes to the dressed CNOT on every branch") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        const InputState c = haar_input(rng), t = haar_input(rng);
        ProtocolResult r = run_cnot("cnot4", PhaseAssignment::all_zero(), c, t,
                                    RunMode::Exhaustive);
        REQUIRE(r.branches.size() == 4);
        for (const auto& b : r.branches) {
            CHECK(b.fid == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-12));
        }
    }
}

TEST_CASE("squashed-I and helix CNOTs at theta = 0") {
    std::mt19937_64 rng(31);
    for (const char* variant : {"squashed-i", "helix", "squashed-i-redundant"}) {
        const InputState c = haar_input(rng), t = haar_input(rng);
        ProtocolResult r = run_cnot(variant, PhaseAssignment::all_zero(), c, t,
                                    RunMode::PostselectZeros);
        INFO(variant);
        CHECK(r.branches[0].fid == doctest::Approx(1.0).epsilon(1e-10));
    }
    // basis-state behavior: |10> flips the target
    ProtocolResult flip = run_cnot("squashed-i", PhaseAssignment::all_zero(),
                                   InputState::from_a(0.0), InputState::from_a(1.0),
                                   RunMode::PostselectZeros);
    CHECK(flip.branches[0].fid == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("squashed-I-redundant decodes exactly on every branch at theta = 0") {
    std::mt19937_64 rng(37);
    const InputState c = haar_input(rng), t = haar_input(rng);
    ProtocolResult r = run_cnot("squashed-i-redundant", PhaseAssignment::all_zero(), c, t,
                                RunMode::Exhaustive);
    CHECK(r.total_probability() == doctest::Approx(1.0).epsilon(1e-9));
    double worst = 1.0;
    for (const auto& b : r.branches) worst = std::min(worst, b.fid);
    CHECK(worst == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("noisy squashed-I state matches the piecewise chain assembly") {
    // Assemble the 15-qubit state from per-chain product formulas and the
    // four gluing gates, fully independently of encode_inputs.
    const double a = 0.6, b = std::sqrt(1 - a * a);
    const double c = 0.35, d = std::sqrt(1 - c * c);
    ClusterLayout sq = builtin_layout("squashed-i");
    std::map<std::string, double> phases;
    int k = 1;
    for (const auto& e : sq.edges) phases[e.slot] = 0.07 * k + 0.013 * k * k, ++k;
    auto T = [&](int x, int y) { return phases.at(slot_name(x, y)); };

    Eigen::VectorXcd amps(int64_t(1) << 15);
    for (int64_t idx = 0; idx < amps.size(); ++idx) {
        auto bit = [&](int site) { return int((idx >> (site - 1)) & 1); };
        Complex amp = (bit(1) ? Complex(b) : Complex(a)) * std::pow(0.5, 1.5);
        if (bit(1) && bit(2)) amp *= -ei(T(1, 2));
        if (bit(2) && bit(3)) amp *= -ei(T(2, 3));
        if (bit(3) && bit(4)) amp *= -ei(T(3, 4));
        amp *= std::pow(0.5, 1.5);
        if (bit(5) && bit(6)) amp *= -ei(T(5, 6));
        if (bit(6) && bit(7)) amp *= -ei(T(6, 7));
        amp *= (bit(9) ? Complex(d) : Complex(c)) * std::pow(0.5, 1.5);
        if (bit(9) && bit(10)) amp *= -ei(T(9, 10));
        if (bit(10) && bit(11)) amp *= -ei(T(10, 11));
        if (bit(11) && bit(12)) amp *= -ei(T(11, 12));
        amp *= std::pow(0.5, 1.5);
        if (bit(13) && bit(14)) amp *= -ei(T(13, 14));
        if (bit(14) && bit(15)) amp *= -ei(T(14, 15));
        amp *= std::sqrt(0.5);  // bridging qubit 8 in |+>
        if (bit(4) && bit(8)) amp *= -ei(T(4, 8));
        if (bit(8) && bit(12)) amp *= -ei(T(8, 12));
        if (bit(4) && bit(5)) amp *= -ei(T(4, 5));
        if (bit(12) && bit(13)) amp *= -ei(T(12, 13));
        amps[idx] = amp;
    }
    StateVector oracle;
    for (int s = 1; s <= 15; ++s) oracle.labels.push_back(s);
    oracle.amps = amps;

    StateVector mine = encode_inputs(
        sq, {Eigen::Vector2cd(a, b), Eigen::Vector2cd(c, d)},
        PhaseAssignment::explicit_map(phases));
    CHECK((reorder(mine, oracle.labels).amps - oracle.amps).norm() ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("noisy branch probabilities still sum to one") {
    std::mt19937_64 rng(41);
    ProtocolResult r = run_cnot("cnot4", PhaseAssignment::common(0.9), haar_input(rng),
                                haar_input(rng), RunMode::Exhaustive);
    CHECK(r.total_probability() == doctest::Approx(1.0).epsilon(1e-10));
    ProtocolResult s = run_transfer(5, PhaseAssignment::gaussian_iid(0.8, 3),
                                    haar_input(rng), RunMode::Exhaustive);
    CHECK(s.total_probability() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("bbb3 gate matrix") {
    // alpha = pi/2, outcome 0: diag(1-i, 1+i, 1+i, 1-i)/sqrt(2)
    Eigen::Matrix4cd m = bbb3_matrix(M_PI / 2, 0);
    Eigen::Vector4cd want;
    want << Complex(1, -1), Complex(1, 1), Complex(1, 1), Complex(1, -1);
    want /= std::sqrt(2.0);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(m(i, j) - (i == j ? want[i] : Complex(0, 0))) < 1e-12);
        }
    }

    // alpha = 0, outcome 0: diag(2, 0, 0, 2)/sqrt(2), non-unitary
    Eigen::Matrix4cd z = bbb3_matrix(0.0, 0);
    CHECK(std::abs(z(0, 0) - Complex(std::sqrt(2.0), 0)) < 1e-12);
    CHECK(std::abs(z(1, 1)) < 1e-12);
    CHECK(std::abs(z(2, 2)) < 1e-12);
    CHECK(std::abs(z(3, 3) - Complex(std::sqrt(2.0), 0)) < 1e-12);

    // the two branches' diagonals sum to (2,2,2,2)/sqrt(2)
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const double alpha = u(rng);
    Eigen::Matrix4cd sum = bbb3_matrix(alpha, 0) + bbb3_matrix(alpha, 1);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(sum(i, i) - Complex(2.0 / std::sqrt(2.0), 0)) < 1e-12);
    }
}

TEST_CASE("staged equals monolithic execution") {
    auto results = observation1_suite(77);
    for (const auto& r : results) {
        INFO(r.name, " ", r.detail);
        CHECK(r.pass);
    }
}

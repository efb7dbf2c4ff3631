#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mbqc/cluster.hpp"
#include "mbqc/state_vector.hpp"

#include <cmath>
#include <random>

using namespace mbqc;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector random_state(int n, std::mt19937_64& rng) {
    std::vector<int> labels;
    for (int i = 1; i <= n; ++i) labels.push_back(i);
    StateVector s = new_plus_state(n, labels);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    for (int i = 1; i <= n; ++i) {
        s = apply_1q(std::move(s), i, gates::rz(ang(rng)));
        s = apply_1q(std::move(s), i, gates::rx(ang(rng)));
    }
    return s;
}

}  // namespace

TEST_CASE("plus state preparation") {
    StateVector s1 = new_plus_state(1, {7});
    CHECK(s1.amps[0].real() == doctest::Approx(kInvSqrt2));
    CHECK(s1.amps[1].real() == doctest::Approx(kInvSqrt2));

    StateVector s2 = new_plus_state(2, {1, 2});
    for (int i = 0; i < 4; ++i) CHECK(s2.amps[i].real() == doctest::Approx(0.5));

    StateVector s3 = new_plus_state(3, {1, 2, 3});
    CHECK(s3.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s3.amps[5]) == doctest::Approx(std::pow(2.0, -1.5)));

    CHECK_THROWS_AS(new_plus_state(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(new_plus_state(2, {1, 1}), std::invalid_argument);
}

TEST_CASE("single-qubit gates") {
    StateVector zero = single_qubit_state(1, {1.0, 0.0});
    StateVector plus = apply_1q(zero, 1, gates::h());
    CHECK(plus.amps[0].real() == doctest::Approx(kInvSqrt2));
    CHECK(plus.amps[1].real() == doctest::Approx(kInvSqrt2));

    StateVector minus = apply_1q(plus, 1, gates::z());
    CHECK(minus.amps[0].real() == doctest::Approx(kInvSqrt2));
    CHECK(minus.amps[1].real() == doctest::Approx(-kInvSqrt2));

    // Rz(pi)|+> by direct 2x2 multiplication: diag(-i, i) (1,1)/sqrt(2)
    StateVector r = apply_1q(plus, 1, gates::rz(M_PI));
    CHECK(r.amps[0].real() == doctest::Approx(0.0));
    CHECK(r.amps[0].imag() == doctest::Approx(-kInvSqrt2));
    CHECK(r.amps[1].imag() == doctest::Approx(kInvSqrt2));
    CHECK(fidelity(r, minus) == doctest::Approx(1.0));  // |-> up to global phase

    CHECK_THROWS_AS(apply_1q(plus, 9, gates::h()), std::invalid_argument);
}

TEST_CASE("controlled phase") {
    StateVector pp = new_plus_state(2, {1, 2});
    StateVector cluster = apply_cphase(pp, 1, 2, 0.0);
    CHECK(cluster.amps[0].real() == doctest::Approx(0.5));
    CHECK(cluster.amps[1].real() == doctest::Approx(0.5));
    CHECK(cluster.amps[2].real() == doctest::Approx(0.5));
    CHECK(cluster.amps[3].real() == doctest::Approx(-0.5));

    // theta = pi makes the gate the identity
    StateVector id = apply_cphase(pp, 1, 2, M_PI);
    CHECK((id.amps - pp.amps).norm() == doctest::Approx(0.0).epsilon(1e-12));

    // four-amplitude overlap by hand: |(1+1+1-1)/4|^2 = 1/4
    CHECK(fidelity(id, cluster) == doctest::Approx(0.25));

    CHECK_THROWS_AS(apply_cphase(pp, 1, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(apply_cphase(pp, 1, 5, 0.0), std::invalid_argument);
}

TEST_CASE("cphase order independence") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> th(-2.0, 2.0);
    StateVector s = random_state(4, rng);
    struct E { int a, b; double t; };
    std::vector<E> edges = {{1, 2, th(rng)}, {2, 3, th(rng)}, {3, 4, th(rng)},
                            {1, 4, th(rng)}, {2, 4, th(rng)}};
    StateVector fwd = s, rev = s;
    for (const auto& e : edges) fwd = apply_cphase(std::move(fwd), e.a, e.b, e.t);
    for (auto it = edges.rbegin(); it != edges.rend(); ++it) {
        rev = apply_cphase(std::move(rev), it->a, it->b, it->t);
    }
    CHECK((fwd.amps - rev.amps).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("unitarity of gate application") {
    std::mt19937_64 rng(5);
    StateVector s = random_state(5, rng);
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    s = apply_cphase(std::move(s), 2, 5, 0.77);
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("xy projections") {
    StateVector plus = apply_1q(single_qubit_state(1, {1.0, 0.0}), 1, gates::h());
    Projection p = project_xy(plus, 1, 0.0, 0);
    CHECK(p.probability == doctest::Approx(1.0));
    CHECK(p.state.num_qubits() == 0);

    // |0> (x) |+> entangled, project qubit 1 at alpha=0 outcome 0 -> (1/2, |+>)
    StateVector s = tensor(single_qubit_state(1, {1.0, 0.0}),
                           apply_1q(single_qubit_state(2, {1.0, 0.0}), 2, gates::h()));
    s = apply_cphase(std::move(s), 1, 2, 0.0);
    Projection q = project_xy(s, 1, 0.0, 0);
    CHECK(q.probability == doctest::Approx(0.5));
    CHECK(q.state.amps[0].real() == doctest::Approx(kInvSqrt2));
    CHECK(q.state.amps[1].real() == doctest::Approx(kInvSqrt2));

    StateVector minus = apply_1q(plus, 1, gates::z());
    Projection z = project_xy(minus, 1, 0.0, 0);
    CHECK(z.probability < 1e-14);
    CHECK_FALSE(z.state.valid);
    CHECK_THROWS_AS(apply_1q(z.state, 1, gates::h()), std::invalid_argument);
}

TEST_CASE("projection probabilities sum to one") {
    std::mt19937_64 rng(21);
    StateVector s = random_state(4, rng);
    for (double alpha : {0.0, 0.9, M_PI / 2}) {
        Projection p0 = project_xy(s, 2, alpha, 0);
        Projection p1 = project_xy(s, 2, alpha, 1);
        CHECK(p0.probability + p1.probability == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("fidelity and label handling") {
    std::mt19937_64 rng(31);
    StateVector s = random_state(3, rng);
    CHECK(fidelity(s, s) == doctest::Approx(1.0));

    StateVector zero = single_qubit_state(1, {1.0, 0.0});
    StateVector one = single_qubit_state(1, {0.0, 1.0});
    CHECK(fidelity(zero, one) == doctest::Approx(0.0));

    StateVector r = reorder(s, {3, 1, 2});
    CHECK(fidelity(s, r) == doctest::Approx(1.0));
    CHECK(std::abs(overlap(s, r) - Complex(1, 0)) < 1e-12);

    StateVector other = random_state(2, rng);
    CHECK_THROWS_AS(fidelity(s, other), std::invalid_argument);
}

TEST_CASE("correlation eigencheck") {
    ClusterLayout two = linear_layout(2);
    StateVector ideal = entangle_all(two, PhaseAssignment::all_zero());
    for (int site : {1, 2}) {
        EigenCheckResult e = correlation_eigencheck(ideal, two, site);
        CHECK(e.is_eigenstate);
        CHECK(e.eigenvalue == 1);
    }

    ClusterLayout five = linear_layout(5);
    StateVector c5 = entangle_all(five, PhaseAssignment::all_zero());
    for (int site : five.sites) {
        EigenCheckResult e = correlation_eigencheck(c5, five, site);
        CHECK(e.is_eigenstate);
        CHECK(e.eigenvalue == 1);
    }

    StateVector noisy = entangle_all(two, PhaseAssignment::common(0.5));
    EigenCheckResult bad = correlation_eigencheck(noisy, two, 1);
    CHECK_FALSE(bad.is_eigenstate);
    CHECK(bad.residual > 1e-3);

    CHECK_THROWS_AS(correlation_eigencheck(ideal, two, 99), std::invalid_argument);
}

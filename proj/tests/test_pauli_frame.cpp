#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mbqc/pauli_frame.hpp"

#include <random>

using namespace mbqc;

namespace {

PauliFrame random_frame(int lines, std::mt19937_64& rng) {
    PauliFrame f = PauliFrame::identity(lines);
    for (int l = 0; l < lines; ++l) {
        f.x[l] = rng() & 1;
        f.z[l] = rng() & 1;
    }
    f.phase_q = rng() % 4;
    return f;
}

}  // namespace

TEST_CASE("propagation through H swaps x and z") {
    PauliFrame f = PauliFrame::identity(1);
    f.x[0] = 1;
    Propagated p = propagate(f, FrameGate::hadamard(0));
    CHECK(p.frame.x[0] == 0);
    CHECK(p.frame.z[0] == 1);

    // H twice restores the frame
    Propagated q = propagate(p.frame, FrameGate::hadamard(0));
    CHECK(q.frame.same_paulis(f));
}

TEST_CASE("propagation adapts z rotations") {
    PauliFrame f = PauliFrame::identity(1);
    f.x[0] = 1;
    const double alpha = 0.83;
    Propagated p = propagate(f, FrameGate::rot_z(0, -alpha));
    CHECK(p.frame.same_paulis(f));
    CHECK(p.gate.alpha == doctest::Approx(alpha));  // Rz(-a) sx = sx Rz(a)

    f.x[0] = 0;
    Propagated q = propagate(f, FrameGate::rot_z(0, -alpha));
    CHECK(q.gate.alpha == doctest::Approx(-alpha));
}

TEST_CASE("propagation through CZ grows z on the partner line") {
    PauliFrame f = PauliFrame::identity(2);
    f.x[0] = 1;
    Propagated p = propagate(f, FrameGate::cz(0, 1));
    CHECK(p.frame.x[0] == 1);
    CHECK(p.frame.z[0] == 0);
    CHECK(p.frame.x[1] == 0);
    CHECK(p.frame.z[1] == 1);
}

TEST_CASE("frame composition is associative with neutral identity") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        PauliFrame a = random_frame(2, rng), b = random_frame(2, rng), c = random_frame(2, rng);
        PauliFrame lhs = compose(compose(a, b), c);
        PauliFrame rhs = compose(a, compose(b, c));
        CHECK(lhs.same_paulis(rhs));
        CHECK(lhs.phase_q == rhs.phase_q);

        PauliFrame e = PauliFrame::identity(2);
        CHECK(compose(a, e).same_paulis(a));
        CHECK(compose(e, a).same_paulis(a));
    }
}

TEST_CASE("transfer frame closed form") {
    PauliFrame f3 = transfer_frame({1, 0}, 3);
    CHECK(f3.z[0] == 1);
    CHECK(f3.x[0] == 0);

    PauliFrame zero = transfer_frame({0, 0, 0, 0, 0, 0}, 7);
    CHECK(zero.trivial_paulis());

    PauliFrame f5 = transfer_frame({1, 1, 1, 1}, 5);
    CHECK(f5.trivial_paulis());

    CHECK_THROWS_AS(transfer_frame({0, 0, 0}, 4), std::invalid_argument);
    CHECK_THROWS_AS(transfer_frame({0, 0, 0}, 5), std::invalid_argument);
}

TEST_CASE("transfer frame equals step propagation") {
    for (int n : {3, 5, 7, 9}) {
        for (int bits = 0; bits < (1 << (n - 1)); ++bits) {
            std::vector<int> outcomes(n - 1);
            for (int i = 0; i < n - 1; ++i) outcomes[i] = (bits >> i) & 1;
            PauliFrame direct = transfer_frame(outcomes, n);
            PauliFrame stepped = PauliFrame::identity(1);
            for (int i = 0; i < n - 1; ++i) {
                stepped = propagate(stepped, FrameGate::hadamard(0)).frame;
                push_x(stepped, 0, outcomes[i]);
            }
            REQUIRE(direct.same_paulis(stepped));
        }
    }
}

TEST_CASE("cnot4 frame truth table") {
    auto check = [](int s1, int s3, int x0, int x1) {
        PauliFrame f = cnot4_frame(s1, s3);
        CHECK(f.x[0] == x0);
        CHECK(f.x[1] == x1);
        CHECK(f.z[0] == 0);
        CHECK(f.z[1] == 0);
    };
    check(0, 0, 0, 0);
    check(1, 0, 1, 1);
    check(1, 1, 1, 0);
    check(0, 1, 0, 1);
}

TEST_CASE("squashed-I frame closed form") {
    std::map<int, int> s;
    for (int site : {1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 14}) s[site] = 0;

    PauliFrame zero = squashed_i_frame(s);
    CHECK(zero.x[0] == 0);
    CHECK(zero.x[1] == 0);
    CHECK(zero.z[0] == 1);
    CHECK(zero.z[1] == 0);

    auto s2 = s;
    s2[2] = 1;
    PauliFrame f2 = squashed_i_frame(s2);
    CHECK(f2.x[0] == 1);
    CHECK(f2.x[1] == 1);
    CHECK(f2.z[0] == 1);
    CHECK(f2.z[1] == 0);

    auto s9 = s;
    s9[9] = 1;
    PauliFrame f9 = squashed_i_frame(s9);
    CHECK(f9.z[0] == 0);
    CHECK(f9.z[1] == 1);

    s.erase(10);
    CHECK_THROWS_AS(squashed_i_frame(s), std::invalid_argument);
}

TEST_CASE("adaptive rotation angles") {
    const std::array<double, 3> euler = {0.3, 0.7, 1.1};  // (zeta, nu, xi)
    CHECK(rotation_angles(euler, {}) == doctest::Approx(0.0));
    CHECK(rotation_angles(euler, {0}) == doctest::Approx(-1.1));
    CHECK(rotation_angles(euler, {1}) == doctest::Approx(1.1));
    CHECK(rotation_angles(euler, {0, 0}) == doctest::Approx(-0.7));
    CHECK(rotation_angles(euler, {0, 0, 1}) == doctest::Approx(0.3));
    CHECK(rotation_angles(euler, {0, 0, 0}) == doctest::Approx(-0.3));
    CHECK_THROWS_AS(rotation_angles(euler, {0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("decoding operator application") {
    StateVector zero = single_qubit_state(5, {1.0, 0.0});
    PauliFrame f = PauliFrame::identity(1);
    f.x[0] = 1;
    StateVector flipped = apply_decoding(zero, f, {5});
    CHECK(std::abs(flipped.amps[1]) == doctest::Approx(1.0));
}

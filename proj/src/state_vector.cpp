#include "mbqc/state_vector.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace mbqc {

namespace {

constexpr double kUnitaryTol = 1e-12;
constexpr double kProbFloor = 1e-14;

void check_valid(const StateVector& s) {
    if (!s.valid) {
        throw std::invalid_argument("state is an invalid (zero-probability) branch");
    }
}

Gate2 checked_unitary(const Gate2& g, const char* name) {
    Gate2 d = g * g.adjoint() - Gate2::Identity();
    if (d.cwiseAbs().maxCoeff() > kUnitaryTol) {
        throw std::logic_error(std::string("gate ") + name + " is not unitary");
    }
    return g;
}

}  // namespace

int StateVector::position(int site) const {
    for (int j = 0; j < num_qubits(); ++j) {
        if (labels[j] == site) return j;
    }
    throw std::invalid_argument("unknown site label " + std::to_string(site));
}

bool StateVector::has_site(int site) const {
    return std::find(labels.begin(), labels.end(), site) != labels.end();
}

namespace gates {

Gate2 h() {
    const double s = 1.0 / std::sqrt(2.0);
    Gate2 g;
    g << s, s, s, -s;
    return checked_unitary(g, "H");
}

Gate2 x() {
    Gate2 g;
    g << 0, 1, 1, 0;
    return checked_unitary(g, "X");
}

Gate2 y() {
    Gate2 g;
    g << 0, Complex(0, -1), Complex(0, 1), 0;
    return checked_unitary(g, "Y");
}

Gate2 z() {
    Gate2 g;
    g << 1, 0, 0, -1;
    return checked_unitary(g, "Z");
}

Gate2 rz(double alpha) {
    Gate2 g = Gate2::Zero();
    g(0, 0) = std::exp(Complex(0, -alpha / 2));
    g(1, 1) = std::exp(Complex(0, alpha / 2));
    return checked_unitary(g, "Rz");
}

Gate2 rx(double alpha) {
    const double c = std::cos(alpha / 2);
    const double s = std::sin(alpha / 2);
    Gate2 g;
    g << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
    return checked_unitary(g, "Rx");
}

Gate2 s() {
    Gate2 g = Gate2::Zero();
    g(0, 0) = 1;
    g(1, 1) = Complex(0, 1);
    return checked_unitary(g, "S");
}

Gate2 by_name(const std::string& name) {
    if (name == "H") return h();
    if (name == "X") return x();
    if (name == "Y") return y();
    if (name == "Z") return z();
    if (name == "S") return s();
    throw std::invalid_argument("unknown gate name " + name);
}

}  // namespace gates

StateVector new_plus_state(int n, const std::vector<int>& labels) {
    if (n < 1) throw std::invalid_argument("need at least one qubit");
    if (static_cast<int>(labels.size()) != n) {
        throw std::invalid_argument("label count does not match qubit count");
    }
    std::set<int> uniq(labels.begin(), labels.end());
    if (static_cast<int>(uniq.size()) != n) throw std::invalid_argument("duplicate labels");

    StateVector s;
    s.labels = labels;
    s.amps = Eigen::VectorXcd::Constant(int64_t(1) << n, std::pow(2.0, -0.5 * n));
    return s;
}

StateVector single_qubit_state(int label, const Eigen::Vector2cd& psi) {
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-10) {
        throw std::invalid_argument("input state is not normalized");
    }
    StateVector s;
    s.labels = {label};
    s.amps = psi;
    return s;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    check_valid(a);
    check_valid(b);
    StateVector out;
    out.labels = a.labels;
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    std::set<int> uniq(out.labels.begin(), out.labels.end());
    if (uniq.size() != out.labels.size()) throw std::invalid_argument("duplicate labels in tensor");
    const int64_t na = a.amps.size();
    const int64_t nb = b.amps.size();
    out.amps.resize(na * nb);
    for (int64_t ib = 0; ib < nb; ++ib) {
        out.amps.segment(ib * na, na) = b.amps[ib] * a.amps;
    }
    return out;
}

StateVector apply_1q(StateVector s, int site, const Gate2& g) {
    check_valid(s);
    const int p = s.position(site);
    const int64_t stride = int64_t(1) << p;
    const int64_t dim = s.amps.size();
    for (int64_t base = 0; base < dim; base += 2 * stride) {
        for (int64_t low = 0; low < stride; ++low) {
            const int64_t i0 = base + low;
            const int64_t i1 = i0 + stride;
            const Complex a0 = s.amps[i0];
            const Complex a1 = s.amps[i1];
            s.amps[i0] = g(0, 0) * a0 + g(0, 1) * a1;
            s.amps[i1] = g(1, 0) * a0 + g(1, 1) * a1;
        }
    }
    return s;
}

StateVector apply_cphase(StateVector s, int a, int b, double theta) {
    check_valid(s);
    if (a == b) throw std::invalid_argument("cphase needs two distinct sites");
    const int pa = s.position(a);
    const int pb = s.position(b);
    const int64_t ma = int64_t(1) << pa;
    const int64_t mb = int64_t(1) << pb;
    const Complex factor = -std::exp(Complex(0, theta));
    const int64_t dim = s.amps.size();
    for (int64_t i = 0; i < dim; ++i) {
        if ((i & ma) && (i & mb)) s.amps[i] *= factor;
    }
    return s;
}

Projection project_xy(const StateVector& s, int site, double alpha, int outcome) {
    check_valid(s);
    if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
    const int p = s.position(site);
    const int64_t stride = int64_t(1) << p;
    const int64_t dim = s.amps.size();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // <+-^alpha| = (<0| +- e^{-i alpha} <1|)/sqrt(2)
    const Complex c1 = (outcome == 0 ? 1.0 : -1.0) * std::exp(Complex(0, -alpha)) * inv_sqrt2;

    Projection out;
    out.state.labels = s.labels;
    out.state.labels.erase(out.state.labels.begin() + p);
    out.state.amps.resize(dim / 2);
    int64_t k = 0;
    for (int64_t base = 0; base < dim; base += 2 * stride) {
        for (int64_t low = 0; low < stride; ++low) {
            const int64_t i0 = base + low;
            out.state.amps[k++] = inv_sqrt2 * s.amps[i0] + c1 * s.amps[i0 + stride];
        }
    }
    out.probability = out.state.amps.squaredNorm();
    if (out.probability < kProbFloor) {
        out.state.valid = false;
        out.state.amps.setZero();
    } else {
        out.state.amps /= std::sqrt(out.probability);
    }
    return out;
}

StateVector reorder(const StateVector& s, const std::vector<int>& new_labels) {
    check_valid(s);
    if (new_labels.size() != s.labels.size()) {
        throw std::invalid_argument("label sets differ in size");
    }
    std::vector<int> perm(new_labels.size());  // perm[j] = old position of new position j
    for (size_t j = 0; j < new_labels.size(); ++j) {
        perm[j] = s.position(new_labels[j]);
    }
    StateVector out;
    out.labels = new_labels;
    out.amps.resize(s.amps.size());
    const int n = s.num_qubits();
    for (int64_t i = 0; i < s.amps.size(); ++i) {
        int64_t old_index = 0;
        for (int j = 0; j < n; ++j) {
            if ((i >> j) & 1) old_index |= int64_t(1) << perm[j];
        }
        out.amps[i] = s.amps[old_index];
    }
    return out;
}

Complex overlap(const StateVector& x, const StateVector& y) {
    check_valid(x);
    check_valid(y);
    const StateVector yr = (x.labels == y.labels) ? y : reorder(y, x.labels);
    return x.amps.dot(yr.amps);  // Eigen dot conjugates the left argument
}

double fidelity(const StateVector& x, const StateVector& y) {
    return std::norm(overlap(x, y));
}

}  // namespace mbqc

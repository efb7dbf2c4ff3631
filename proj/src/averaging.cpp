#include "mbqc/averaging.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace mbqc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void golub_welsch(const std::vector<double>& offdiag, double weight_mass,
                  std::vector<double>& nodes, std::vector<double>& weights) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        j(k, k + 1) = offdiag[k];
        j(k + 1, k) = offdiag[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        weights[i] = weight_mass * v0 * v0;
    }
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("quadrature order must be positive");
    std::vector<double> off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    golub_welsch(off, 2.0, nodes, weights);
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("quadrature order must be positive");
    std::vector<double> off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k / 2.0);
    golub_welsch(off, std::sqrt(kPi), nodes, weights);
}

double bloch_average(const std::function<double(const InputState&)>& f,
                     const BlochQuadrature& q) {
    if (q.polar_order < 1 || q.azimuth_order < 1) {
        throw std::invalid_argument("invalid Bloch quadrature orders");
    }
    std::vector<double> nodes, weights;
    gauss_legendre(q.polar_order, nodes, weights);
    double total = 0.0;
    for (int i = 0; i < q.polar_order; ++i) {
        const double polar = std::acos(nodes[i]);
        double ring = 0.0;
        for (int j = 0; j < q.azimuth_order; ++j) {
            const double phi = 2.0 * kPi * (j + 0.5) / q.azimuth_order;
            ring += f(InputState::bloch(polar, phi));
        }
        total += 0.5 * weights[i] * ring / q.azimuth_order;
    }
    return total;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    splitmix64(s);
    return splitmix64(s);
}

namespace {

double uniform01(std::uint64_t& state) {
    return (static_cast<double>(splitmix64(state) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double random_normal(std::uint64_t& state) {
    const double u1 = uniform01(state);
    const double u2 = uniform01(state);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

InputState random_input(std::uint64_t& state) {
    const double c = 2.0 * uniform01(state) - 1.0;
    const double phi = 2.0 * kPi * uniform01(state);
    return InputState::bloch(std::acos(c), phi);
}

Estimate gaussian_average(const std::function<double(const std::vector<double>&)>& f, int dims,
                          double sigma, const GaussianSpec& spec, long eval_budget) {
    if (sigma < 0) throw std::invalid_argument("negative sigma");
    if (dims < 1) throw std::invalid_argument("need at least one phase dimension");
    Estimate est;
    if (sigma == 0.0) {
        est.value = f(std::vector<double>(dims, 0.0));
        est.evals = 1;
        return est;
    }
    if (spec.scheme == GaussianScheme::GaussHermite) {
        std::vector<double> nodes, weights;
        gauss_hermite(spec.order, nodes, weights);
        double total_evals = std::pow(static_cast<double>(spec.order), dims);
        if (total_evals > 4e7 || (eval_budget > 0 && total_evals > eval_budget)) {
            throw std::runtime_error("budget exceeded: Gauss-Hermite grid too large");
        }
        const long n = static_cast<long>(total_evals);
        std::vector<int> idx(dims, 0);
        std::vector<double> thetas(dims);
        const double norm = std::pow(std::sqrt(kPi), -dims);
        double total = 0.0;
        for (long it = 0; it < n; ++it) {
            double w = 1.0;
            for (int d = 0; d < dims; ++d) {
                thetas[d] = std::sqrt(2.0) * sigma * nodes[idx[d]];
                w *= weights[idx[d]];
            }
            total += w * f(thetas);
            for (int d = 0; d < dims; ++d) {
                if (++idx[d] < spec.order) break;
                idx[d] = 0;
            }
        }
        est.value = norm * total;
        est.evals = n;
        return est;
    }
    // Monte Carlo
    if (eval_budget > 0 && spec.samples > eval_budget) {
        throw std::runtime_error("budget exceeded: too many Monte Carlo samples");
    }
    std::uint64_t state = spec.seed;
    std::vector<double> thetas(dims);
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < spec.samples; ++i) {
        for (int d = 0; d < dims; ++d) thetas[d] = sigma * random_normal(state);
        const double v = f(thetas);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / spec.samples;
    const double var = std::max(0.0, sum2 / spec.samples - mean * mean);
    est.value = mean;
    est.std_error = std::sqrt(var / spec.samples);
    est.evals = spec.samples;
    return est;
}

namespace {

Eigen::Matrix2cd pauli_x_m() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}

Eigen::Matrix2cd pauli_z_m() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

Eigen::Matrix2cd h_m() {
    Eigen::Matrix2cd m;
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

Eigen::Matrix2cd rz_m(double a) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(0, 0) = std::exp(Complex(0, -a / 2));
    m(1, 1) = std::exp(Complex(0, a / 2));
    return m;
}

Eigen::Matrix2cd rx_m(double a) {
    Eigen::Matrix2cd m;
    m << Complex(std::cos(a / 2), 0), Complex(0, -std::sin(a / 2)),
        Complex(0, -std::sin(a / 2)), Complex(std::cos(a / 2), 0);
    return m;
}

// Embed a one-qubit matrix on logical line `l` (bit l of the index).
Eigen::MatrixXcd on_line(int l, const Eigen::Matrix2cd& g, int lines) {
    const int dim = 1 << lines;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    const int stride = 1 << l;
    for (int i = 0; i < dim; ++i) {
        const int bi = (i >> l) & 1;
        const int base = i & ~stride;
        for (int bj = 0; bj < 2; ++bj) {
            m(i, base | (bj << l)) += g(bi, bj);
        }
    }
    return m;
}

Eigen::MatrixXcd cz_m(int i, int j, int lines) {
    const int dim = 1 << lines;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    for (int k = 0; k < dim; ++k) {
        if (((k >> i) & 1) && ((k >> j) & 1)) m(k, k) = -1.0;
    }
    return m;
}

}  // namespace

Eigen::VectorXcd logical_input(const std::vector<InputState>& per_line) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
    for (const auto& in : per_line) {
        Eigen::VectorXcd next(v.size() * 2);
        for (int b = 0; b < 2; ++b) {
            next.segment(b * v.size(), v.size()) = in.amps[b] * v;
        }
        v.swap(next);
    }
    return v;
}

LogicalProtocol logical_protocol(const Protocol& p, const PhaseAssignment& phases, RunMode mode,
                                 int max_branches) {
    LogicalProtocol lp;
    lp.lines = p.layout.num_lines();
    const int dim = 1 << lp.lines;

    std::vector<std::vector<RawBranch>> runs(dim);
    for (int j = 0; j < dim; ++j) {
        std::vector<Eigen::Vector2cd> inputs;
        for (int l = 0; l < lp.lines; ++l) {
            inputs.push_back((j >> l) & 1 ? Eigen::Vector2cd(0, 1) : Eigen::Vector2cd(1, 0));
        }
        runs[j] = enumerate_raw(p.layout, p.params, phases, inputs, mode, max_branches);
    }

    const auto out_sites = p.layout.output_sites();
    Eigen::MatrixXcd dress = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& [site, g] : p.post_gates) {
        int line = -1;
        for (size_t l = 0; l < out_sites.size(); ++l) {
            if (out_sites[l] == site) line = static_cast<int>(l);
        }
        if (line < 0) throw std::logic_error("post gate on a non-output site");
        if (g != 'H') throw std::logic_error("unsupported post gate");
        dress = on_line(line, h_m(), lp.lines) * dress;
    }

    const size_t n_branches = runs[0].size();
    lp.maps.reserve(n_branches);
    for (size_t s = 0; s < n_branches; ++s) {
        Eigen::MatrixXcd m(dim, dim);
        for (int j = 0; j < dim; ++j) m.col(j) = runs[j][s].vec;
        const PauliFrame frame = p.decode(runs[0][s].outcomes);
        Eigen::MatrixXcd dec = Eigen::MatrixXcd::Identity(dim, dim);
        for (int l = 0; l < lp.lines; ++l) {
            Eigen::Matrix2cd d = Eigen::Matrix2cd::Identity();
            if (frame.x[l]) d = d * pauli_x_m();
            if (frame.z[l]) d = pauli_z_m() * d;
            dec = on_line(l, d, lp.lines) * dec;
        }
        lp.maps.push_back(dress * dec * m);
        lp.outcomes.push_back(runs[0][s].outcomes);
    }

    // Ideal unitary on the physical output lines: circuit matrix, then the
    // relabelling implied by target_labels (e.g. the helix output swap).
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& g : p.circuit) {
        switch (g.kind) {
            case LogicalGate::H:
                u = on_line(g.line, h_m(), lp.lines) * u;
                break;
            case LogicalGate::RZ:
                u = on_line(g.line, rz_m(g.angle), lp.lines) * u;
                break;
            case LogicalGate::RX:
                u = on_line(g.line, rx_m(g.angle), lp.lines) * u;
                break;
            case LogicalGate::CZ:
                u = cz_m(g.line, g.line2, lp.lines) * u;
                break;
        }
    }
    std::vector<int> perm(lp.lines);
    for (int l = 0; l < lp.lines; ++l) {
        perm[l] = -1;
        for (size_t k = 0; k < out_sites.size(); ++k) {
            if (out_sites[k] == p.target_labels[l]) perm[l] = static_cast<int>(k);
        }
        if (perm[l] < 0) throw std::logic_error("target label is not an output site");
    }
    Eigen::MatrixXcd pm = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        int i = 0;
        for (int l = 0; l < lp.lines; ++l) {
            if ((j >> l) & 1) i |= 1 << perm[l];
        }
        pm(i, j) = 1.0;
    }
    lp.target = pm * u;
    return lp;
}

double born_average_fidelity(const LogicalProtocol& lp, const Eigen::VectorXcd& psi) {
    const Eigen::VectorXcd t = lp.target * psi;
    double total = 0.0;
    for (const auto& f : lp.maps) {
        total += std::norm(t.dot(f * psi));
    }
    return total;
}

double postselect_fidelity(const LogicalProtocol& lp, const Eigen::VectorXcd& psi) {
    const Eigen::VectorXcd out = lp.maps[0] * psi;
    const double p = out.squaredNorm();
    if (p < 1e-30) return 0.0;
    return std::norm((lp.target * psi).dot(out)) / p;
}

double born_bloch_average_exact(const LogicalProtocol& lp) {
    if (lp.lines != 1) throw std::invalid_argument("exact Bloch average is single-line only");
    double total = 0.0;
    for (const auto& f : lp.maps) {
        const Eigen::Matrix2cd a = lp.target.adjoint() * f;
        total += std::norm(a.trace()) + (a.adjoint() * a).trace().real();
    }
    return total / 6.0;
}

}  // namespace mbqc

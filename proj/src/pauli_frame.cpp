#include "mbqc/pauli_frame.hpp"

#include <stdexcept>

namespace mbqc {

PauliFrame PauliFrame::identity(int lines) {
    PauliFrame f;
    f.x.assign(lines, 0);
    f.z.assign(lines, 0);
    return f;
}

bool PauliFrame::trivial_paulis() const {
    for (int i = 0; i < num_lines(); ++i) {
        if (x[i] || z[i]) return false;
    }
    return true;
}

Complex PauliFrame::phase() const {
    static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[((phase_q % 4) + 4) % 4];
}

bool PauliFrame::same_paulis(const PauliFrame& other) const {
    return x == other.x && z == other.z;
}

PauliFrame compose(const PauliFrame& a, const PauliFrame& b) {
    if (a.num_lines() != b.num_lines()) throw std::invalid_argument("frame line counts differ");
    PauliFrame out = PauliFrame::identity(a.num_lines());
    out.phase_q = a.phase_q + b.phase_q;
    for (int i = 0; i < a.num_lines(); ++i) {
        // (sx^ax sz^az)(sx^bx sz^bz) = (-1)^{az bx} sx^{ax+bx} sz^{az+bz}
        if (a.z[i] & b.x[i]) out.phase_q += 2;
        out.x[i] = a.x[i] ^ b.x[i];
        out.z[i] = a.z[i] ^ b.z[i];
    }
    out.phase_q = ((out.phase_q % 4) + 4) % 4;
    return out;
}

void push_x(PauliFrame& f, int line, int s) {
    if (!s) return;
    // sx * (sx^x sz^z) = (-1)^z ... keep canonical sx-left order: prepend.
    if (f.z[line]) f.phase_q = (f.phase_q + 2) % 4;
    f.x[line] ^= 1;
}

void push_z(PauliFrame& f, int line, int s) {
    if (!s) return;
    f.z[line] ^= 1;
}

Propagated propagate(const PauliFrame& f, const FrameGate& g) {
    Propagated out{f, g};
    switch (g.kind) {
        case FrameGate::H: {
            // H sx^x sz^z H = sz^x sx^z = (-1)^{xz} sx^z sz^x
            auto& fr = out.frame;
            if (fr.x[g.line] & fr.z[g.line]) fr.phase_q = (fr.phase_q + 2) % 4;
            std::swap(fr.x[g.line], fr.z[g.line]);
            break;
        }
        case FrameGate::RotZ: {
            out.gate.alpha = f.x[g.line] ? -g.alpha : g.alpha;
            break;
        }
        case FrameGate::CZ: {
            auto& fr = out.frame;
            const int i = g.line, j = g.line2;
            if (fr.x[i] & fr.x[j]) fr.phase_q = (fr.phase_q + 2) % 4;
            fr.z[i] ^= fr.x[j];
            fr.z[j] ^= fr.x[i];
            break;
        }
    }
    return out;
}

PauliFrame transfer_frame(const std::vector<int>& outcomes, int n) {
    if (n % 2 == 0) {
        throw std::invalid_argument("transfer_frame needs odd chain length");
    }
    if (static_cast<int>(outcomes.size()) != n - 1) {
        throw std::invalid_argument("transfer_frame needs N-1 outcomes");
    }
    PauliFrame f = PauliFrame::identity(1);
    for (int i = 1; i <= n - 1; ++i) {
        if (i % 2 == 1) {
            f.z[0] ^= outcomes[i - 1];
        } else {
            f.x[0] ^= outcomes[i - 1];
        }
    }
    return f;
}

PauliFrame cnot4_frame(int s1, int s3) {
    PauliFrame f = PauliFrame::identity(2);
    f.x[0] = s1 & 1;
    f.x[1] = (s1 ^ s3) & 1;
    return f;
}

PauliFrame squashed_i_frame(const std::map<int, int>& outcomes) {
    static const int measured[13] = {1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 14};
    int s[16] = {0};
    for (int site : measured) {
        auto it = outcomes.find(site);
        if (it == outcomes.end()) {
            throw std::invalid_argument("missing outcome for site " + std::to_string(site));
        }
        s[site] = it->second & 1;
    }
    PauliFrame f = PauliFrame::identity(2);
    f.x[0] = (s[2] + s[3] + s[5] + s[6]) % 2;
    f.x[1] = (s[2] + s[3] + s[8] + s[10] + s[12] + s[14]) % 2;
    f.z[0] = (s[1] + s[3] + s[4] + s[5] + s[8] + s[9] + s[11] + 1) % 2;
    f.z[1] = (s[9] + s[11] + s[13]) % 2;
    return f;
}

double rotation_angles(const std::array<double, 3>& euler,
                       const std::vector<int>& outcomes_so_far) {
    const double zeta = euler[0], nu = euler[1], xi = euler[2];
    const auto& s = outcomes_so_far;
    switch (s.size()) {
        case 0:
            return 0.0;
        case 1:
            return (s[0] ? 1.0 : -1.0) * xi;
        case 2:
            return (s[1] ? 1.0 : -1.0) * nu;
        case 3:
            return ((s[0] ^ s[2]) ? 1.0 : -1.0) * zeta;
        default:
            throw std::invalid_argument("rotation pattern has only four measurements");
    }
}

StateVector apply_decoding(StateVector s, const PauliFrame& f,
                           const std::vector<int>& output_sites) {
    if (static_cast<int>(output_sites.size()) != f.num_lines()) {
        throw std::invalid_argument("output site count does not match frame lines");
    }
    for (int i = 0; i < f.num_lines(); ++i) {
        if (f.x[i]) s = apply_1q(std::move(s), output_sites[i], gates::x());
        if (f.z[i]) s = apply_1q(std::move(s), output_sites[i], gates::z());
    }
    return s;
}

}  // namespace mbqc

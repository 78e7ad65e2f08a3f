#include "cvdv/sim.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <map>
#include <sstream>

namespace cvdv {

namespace {

constexpr int kDisplacementPad = 40;  // extra Fock levels for exact-clipped D

Mat kron(const Mat& A, const Mat& B) {
    Mat out(A.rows() * B.rows(), A.cols() * B.cols());
    for (long i = 0; i < A.rows(); ++i)
        for (long j = 0; j < A.cols(); ++j) out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

Mat pauli_letter(char c) {
    Mat m(2, 2);
    switch (c) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw parse_error(std::string("bad Pauli letter '") + c + "'");
    }
    return m;
}

double real_param(const Gate& g, size_t i) {
    if (std::abs(g.params[i].imag()) > 0)
        throw parse_error(std::string(kind_name(g.kind)) + " parameter must be real");
    return g.params[i].real();
}

// exp(alpha ad - alpha* a), exact-clipped at `cutoff`.
Mat displacement(cplx alpha, int cutoff) {
    int big = cutoff + kDisplacementPad;
    auto lm = ladder_matrices(big);
    Mat gen = alpha * lm.ad - std::conj(alpha) * lm.a;
    Mat u = gen.exp();
    return u.topLeftCorner(cutoff, cutoff);
}

// exp(-i t/2 (e^{ip} adag b + e^{-ip} a bdag)), exact-clipped at `cutoff`.
// Block-diagonal over total photon number; each block handled exactly.
Mat beamsplitter(double t, double p, int cutoff) {
    int c = cutoff;
    Mat u = Mat::Zero(c * c, c * c);
    for (int s = 0; s <= 2 * (c - 1); ++s) {
        int n = s + 1;  // full sector basis |k, s-k>, k = 0..s
        Mat h = Mat::Zero(n, n);
        for (int k = 0; k + 1 <= s; ++k) {
            // adag b |k, s-k> = sqrt(k+1) sqrt(s-k) |k+1, s-k-1>
            double amp = 0.5 * t * std::sqrt((double)(k + 1) * (s - k));
            h(k + 1, k) += amp * std::exp(cplx(0, p));
            h(k, k + 1) += amp * std::exp(cplx(0, -p));
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        Mat us = es.eigenvectors() *
                 (cplx(0, -1) * es.eigenvalues().array()).exp().matrix().asDiagonal() *
                 es.eigenvectors().adjoint();
        for (int k = 0; k <= s; ++k) {
            if (k >= c || s - k >= c) continue;
            for (int l = 0; l <= s; ++l) {
                if (l >= c || s - l >= c) continue;
                u(k * c + (s - k), l * c + (s - l)) = us(k, l);
            }
        }
    }
    return u;
}

Mat qubit_diag_blocks(const Mat& b0, const Mat& b1) {
    long n = b0.rows();
    Mat u = Mat::Zero(2 * n, 2 * n);
    u.topLeftCorner(n, n) = b0;
    u.bottomRightCorner(n, n) = b1;
    return u;
}

Mat rotation(char axis, double t) {
    Mat sigma = pauli_letter(axis);
    return std::cos(t / 2) * Mat::Identity(2, 2) - cplx(0, 1) * std::sin(t / 2) * sigma;
}

Mat phase_rotation(double t, int cutoff) {
    Mat u = Mat::Zero(cutoff, cutoff);
    for (int n = 0; n < cutoff; ++n) u(n, n) = std::exp(cplx(0, -t * n));
    return u;
}

Mat cond_rotation(double t, int cutoff) {
    Mat b0(cutoff, cutoff), b1(cutoff, cutoff);
    b0.setZero();
    b1.setZero();
    for (int n = 0; n < cutoff; ++n) {
        b0(n, n) = std::exp(cplx(0, -t / 2 * n));
        b1(n, n) = std::exp(cplx(0, t / 2 * n));
    }
    return qubit_diag_blocks(b0, b1);
}

Mat word_matrix(const std::string& word, const std::vector<int>& support) {
    Mat p = Mat::Identity(1, 1);
    for (int q : support) p = kron(p, pauli_letter(word[q]));
    return p;
}

Mat build_local(const Gate& g, int cutoff) {
    switch (g.kind) {
        case GateKind::RX: return rotation('X', real_param(g, 0));
        case GateKind::RY: return rotation('Y', real_param(g, 0));
        case GateKind::RZ: return rotation('Z', real_param(g, 0));
        case GateKind::R: return phase_rotation(real_param(g, 0), cutoff);
        case GateKind::D: return displacement(g.params[0], cutoff);
        case GateKind::BS: return beamsplitter(real_param(g, 0), real_param(g, 1), cutoff);
        case GateKind::CR: return cond_rotation(real_param(g, 0), cutoff);
        case GateKind::CP: return cond_rotation(PI, cutoff);
        case GateKind::CD:
            return qubit_diag_blocks(displacement(g.params[0], cutoff),
                                     displacement(-g.params[0], cutoff));
        case GateKind::CBS:
            return qubit_diag_blocks(beamsplitter(real_param(g, 0), real_param(g, 1), cutoff),
                                     beamsplitter(-real_param(g, 0), real_param(g, 1), cutoff));
        case GateKind::RB: {
            // exp(-i sigma_x (t adag + t* a)); sigma_x = H Z H
            cplx t = g.params[0];
            Mat had(2, 2);
            had << 1, 1, 1, -1;
            had /= std::sqrt(2.0);
            Mat blocks = qubit_diag_blocks(displacement(cplx(0, -1) * t, cutoff),
                                           displacement(cplx(0, 1) * t, cutoff));
            Mat w = kron(had, Mat::Identity(cutoff, cutoff));
            return w * blocks * w;
        }
        case GateKind::SWAPM: {
            Mat bs = beamsplitter(PI, 0.0, cutoff);
            Mat r = phase_rotation(-PI / 2, cutoff);
            return kron(r, r) * bs;
        }
        case GateKind::PAULI: {
            auto support = pauli_support(g.word);
            if (g.qumodes.empty()) {
                // exp(-i theta P)
                double theta = real_param(g, 0);
                long n = 1L << support.size();
                Mat p = word_matrix(g.word, support);
                return std::cos(theta) * Mat::Identity(n, n) - cplx(0, 1) * std::sin(theta) * p;
            }
            // exp(P (alpha adag - alpha* a)): diagonalize P, displace each branch
            cplx alpha = g.params[0];
            if (support.empty()) return displacement(alpha, cutoff);
            Mat p = word_matrix(g.word, support);
            Eigen::SelfAdjointEigenSolver<Mat> es(p);
            long n = p.rows();
            Mat u = Mat::Zero(n * cutoff, n * cutoff);
            for (long i = 0; i < n; ++i) {
                double lam = es.eigenvalues()(i);  // +1 or -1
                u.block(i * cutoff, i * cutoff, cutoff, cutoff) = displacement(lam * alpha, cutoff);
            }
            Mat w = kron(es.eigenvectors(), Mat::Identity(cutoff, cutoff));
            return w * u * w.adjoint();
        }
    }
    throw parse_error("unreachable gate kind");
}

std::string cache_key(const Gate& g, int cutoff) {
    std::ostringstream os;
    os << (int)g.kind << '|' << cutoff << '|' << g.word << '|';
    char buf[64];
    for (auto& p : g.params) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g;", p.real(), p.imag());
        os << buf;
    }
    // operand count affects PAULI local layout only via word support — key is enough
    if (g.kind == GateKind::PAULI) os << (g.qumodes.empty() ? "p" : "m");
    return os.str();
}

// Subsystem slots a gate acts on: qubit q -> slot q; qumode m -> slot nq + m.
// PAULI gates act on the word's support qubits (ascending) plus the bus mode.
std::vector<int> gate_slots(const Gate& g, const SimSpace& sp, std::vector<long>& ldims) {
    std::vector<int> slots;
    auto add_qubit = [&](int q) {
        slots.push_back(q);
        ldims.push_back(2);
    };
    auto add_mode = [&](int m) {
        slots.push_back(sp.nq + m);
        ldims.push_back(sp.cutoff);
    };
    if (g.kind == GateKind::PAULI) {
        for (int q : pauli_support(g.word)) add_qubit(q);
        for (int m : g.qumodes) add_mode(m);
    } else {
        for (int q : g.qubits) add_qubit(q);
        for (int m : g.qumodes) add_mode(m);
    }
    return slots;
}

std::vector<long> slot_strides(const SimSpace& sp) {
    std::vector<long> strides(sp.nq + sp.nm);
    long s = 1;
    for (int m = sp.nm - 1; m >= 0; --m) {
        strides[sp.nq + m] = s;
        s *= sp.cutoff;
    }
    for (int q = sp.nq - 1; q >= 0; --q) {
        strides[q] = s;
        s *= 2;
    }
    return strides;
}

void apply_local(cplx* data, const Mat& L, const std::vector<int>& slots,
                 const std::vector<long>& ldims, const SimSpace& sp) {
    std::vector<long> strides = slot_strides(sp);
    long ldim = L.rows();
    // Offsets of the local basis states.
    std::vector<long> loff((size_t)ldim, 0);
    for (long li = 0; li < ldim; ++li) {
        long rem = li;
        for (int t = (int)slots.size() - 1; t >= 0; --t) {
            long coord = rem % ldims[t];
            rem /= ldims[t];
            loff[li] += coord * strides[slots[t]];
        }
    }
    // Complement subsystems.
    std::vector<int> comp;
    std::vector<long> cdims;
    for (int s = 0; s < sp.nq + sp.nm; ++s) {
        if (std::find(slots.begin(), slots.end(), s) == slots.end()) {
            comp.push_back(s);
            cdims.push_back(s < sp.nq ? 2 : sp.cutoff);
        }
    }
    long nbase = 1;
    for (long d : cdims) nbase *= d;
    std::vector<long> coords(comp.size(), 0);
    Vec x(ldim), y(ldim);
    long base = 0;
    for (long b = 0; b < nbase; ++b) {
        for (long li = 0; li < ldim; ++li) x(li) = data[base + loff[li]];
        y.noalias() = L * x;
        for (long li = 0; li < ldim; ++li) data[base + loff[li]] = y(li);
        // increment mixed-radix counter (last subsystem fastest)
        for (int t = (int)comp.size() - 1; t >= 0; --t) {
            base += strides[comp[t]];
            if (++coords[t] < cdims[t]) break;
            base -= cdims[t] * strides[comp[t]];
            coords[t] = 0;
        }
    }
}

}  // namespace

LadderMatrices ladder_matrices(int cutoff) {
    Mat a = Mat::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt((double)n);
    LadderMatrices lm;
    lm.a = a;
    lm.ad = a.adjoint();
    lm.n = lm.ad * lm.a;
    return lm;
}

Mat operator_matrix(const HSum& s, const SimSpace& sp) {
    long d = sp.dim();
    Mat out = Mat::Zero(d, d);
    auto lm = ladder_matrices(sp.cutoff);
    for (const auto& t : s) {
        Mat qpart = Mat::Identity(1, 1);
        for (int q = 0; q < sp.nq; ++q)
            qpart = kron(qpart, pauli_letter(q < (int)t.word.size() ? t.word[q] : 'I'));
        std::vector<Mat> mode_mats(sp.nm, Mat::Identity(sp.cutoff, sp.cutoff));
        for (const auto& o : t.ops) {
            if (o.mode >= sp.nm) throw parse_error("operator mode index exceeds register");
            mode_mats[o.mode] = mode_mats[o.mode] * (o.dag ? lm.ad : lm.a);
        }
        Mat mpart = Mat::Identity(1, 1);
        for (int m = 0; m < sp.nm; ++m) mpart = kron(mpart, mode_mats[m]);
        out += t.coeff * kron(qpart, mpart);
    }
    return out;
}

Mat gate_local_unitary(const Gate& g, int cutoff) {
    static std::map<std::string, Mat> cache;
    std::string key = cache_key(g, cutoff);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Mat u = build_local(g, cutoff);
    cache.emplace(std::move(key), u);
    return u;
}

void apply_gate(Vec& state, const Gate& g, const SimSpace& sp) {
    std::vector<long> ldims;
    std::vector<int> slots = gate_slots(g, sp, ldims);
    if (slots.empty()) {
        // pure phase: exp(-i theta) on the all-identity word
        if (g.kind == GateKind::PAULI && g.qumodes.empty())
            state *= std::exp(cplx(0, -g.params[0].real()));
        return;
    }
    Mat L = gate_local_unitary(g, sp.cutoff);
    apply_local(state.data(), L, slots, ldims, sp);
}

void apply_gate(Mat& cols, const Gate& g, const SimSpace& sp) {
    std::vector<long> ldims;
    std::vector<int> slots = gate_slots(g, sp, ldims);
    if (slots.empty()) {
        if (g.kind == GateKind::PAULI && g.qumodes.empty())
            cols *= std::exp(cplx(0, -g.params[0].real()));
        return;
    }
    Mat L = gate_local_unitary(g, sp.cutoff);
    for (long j = 0; j < cols.cols(); ++j) apply_local(cols.data() + j * cols.rows(), L, slots, ldims, sp);
}

void apply_circuit(Vec& state, const Circuit& c, const SimSpace& sp) {
    for (const auto& g : c.gates) apply_gate(state, g, sp);
}

Mat circuit_unitary(const Circuit& c, const SimSpace& sp) {
    long d = sp.dim();
    Mat u = Mat::Identity(d, d);
    for (const auto& g : c.gates) apply_gate(u, g, sp);
    return u;
}

Mat clip_matrix(const Mat& u, const SimSpace& from, const SimSpace& to) {
    if (from.nq != to.nq || from.nm != to.nm || to.cutoff > from.cutoff)
        throw parse_error("clip_matrix: incompatible spaces");
    long dt = to.dim();
    std::vector<long> map((size_t)dt);
    for (long i = 0; i < dt; ++i) {
        long rem = i, idx = 0;
        // decompose in `to` digits (modes fastest), rebuild in `from`
        long mult = 1;
        std::vector<long> digits(to.nq + to.nm);
        for (int m = to.nm - 1; m >= 0; --m) {
            digits[to.nq + m] = rem % to.cutoff;
            rem /= to.cutoff;
        }
        for (int q = to.nq - 1; q >= 0; --q) {
            digits[q] = rem % 2;
            rem /= 2;
        }
        for (int m = from.nm - 1; m >= 0; --m) {
            idx += digits[from.nq + m] * mult;
            mult *= from.cutoff;
        }
        for (int q = from.nq - 1; q >= 0; --q) {
            idx += digits[q] * mult;
            mult *= 2;
        }
        map[i] = idx;
    }
    Mat out(dt, dt);
    for (long i = 0; i < dt; ++i)
        for (long j = 0; j < dt; ++j) out(i, j) = u(map[i], map[j]);
    return out;
}

Mat circuit_unitary_padded(const Circuit& c, const SimSpace& sp, int pad) {
    SimSpace big{sp.nq, sp.nm, sp.cutoff + pad};
    Mat u = circuit_unitary(c, big);
    return clip_matrix(u, big, sp);
}

Mat project_modes(const Mat& u, const SimSpace& sp, int keep) {
    long d = sp.dim();
    std::vector<bool> ok((size_t)d, true);
    for (long i = 0; i < d; ++i) {
        long rem = i;
        for (int m = sp.nm - 1; m >= 0; --m) {
            if (rem % sp.cutoff >= keep) {
                ok[i] = false;
                break;
            }
            rem /= sp.cutoff;
        }
    }
    Mat out = u;
    for (long i = 0; i < d; ++i)
        if (!ok[i]) {
            out.row(i).setZero();
            out.col(i).setZero();
        }
    return out;
}

double spectral_norm(const Mat& m) {
    Eigen::BDCSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

double projected_distance(const Mat& u, const Mat& v, const SimSpace& sp, int keep) {
    if (keep >= sp.cutoff)
        throw parse_error("projected_distance: keep must be below the cutoff");
    Mat a = project_modes(u, sp, keep);
    Mat b = project_modes(v, sp, keep);
    cplx tr = (a.adjoint() * b).trace();
    cplx g = std::abs(tr) > 1e-300 ? tr / std::abs(tr) : cplx(1, 0);
    return spectral_norm(a * g - b);
}

Mat layout_permutation(const std::vector<int>& qubit_dest, const std::vector<int>& mode_dest,
                       const SimSpace& sp) {
    if ((int)qubit_dest.size() != sp.nq || (int)mode_dest.size() != sp.nm)
        throw std::invalid_argument("layout_permutation: wire list sizes must match the space");
    auto check = [](const std::vector<int>& d) {
        std::vector<bool> hit(d.size(), false);
        for (int x : d) {
            if (x < 0 || x >= (int)d.size() || hit[x])
                throw std::invalid_argument("layout_permutation: not a bijection");
            hit[x] = true;
        }
    };
    check(qubit_dest);
    check(mode_dest);
    const long dim = sp.dim();
    Mat p = Mat::Zero(dim, dim);
    std::vector<int> qv(sp.nq), mv(sp.nm), qw(sp.nq), mw(sp.nm);
    for (long src = 0; src < dim; ++src) {
        long rem = src;
        for (int m = sp.nm - 1; m >= 0; --m) {
            mv[m] = (int)(rem % sp.cutoff);
            rem /= sp.cutoff;
        }
        for (int q = sp.nq - 1; q >= 0; --q) {
            qv[q] = (int)(rem & 1);
            rem >>= 1;
        }
        for (int q = 0; q < sp.nq; ++q) qw[qubit_dest[q]] = qv[q];
        for (int m = 0; m < sp.nm; ++m) mw[mode_dest[m]] = mv[m];
        long dst = 0;
        for (int q = 0; q < sp.nq; ++q) dst = dst * 2 + qw[q];
        for (int m = 0; m < sp.nm; ++m) dst = dst * sp.cutoff + mw[m];
        p(dst, src) = 1;
    }
    return p;
}

}  // namespace cvdv

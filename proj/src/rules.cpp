#include "cvdv/rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "cvdv/paulisynth.hpp"

namespace cvdv {

// ---------------------------------------------------------------------------
// Node basics
// ---------------------------------------------------------------------------

ExpNode ExpNode::exp1(HSum g) { return {NodeKind::Exp, {std::move(g)}}; }
ExpNode ExpNode::comm(HSum a, HSum b) { return {NodeKind::Comm, {std::move(a), std::move(b)}}; }

HSum ExpNode::generator() const {
    if (kind == NodeKind::Comm) return commutator(groups[0], groups[1]);
    HSum g;
    for (auto& part : groups) g = add(g, part);
    return normal_order(g);
}

VariantBits VariantBits::complement() const {
    VariantBits v = *this;
    v.gc2 ^= 1;
    v.gcy ^= 1;
    v.gcx ^= 1;
    v.r1o ^= 1;
    v.dy ^= 1;
    v.dx ^= 1;
    return v;
}

void RuleStats::record(int rule, const std::string& shape, bool success) {
    attempts[rule]++;
    shape_attempts[rule].insert(shape);
    if (success) {
        successes[rule]++;
        shape_successes[rule].insert(shape);
    }
}

void RuleStats::merge(const RuleStats& other) {
    for (int r = 0; r <= kNumRules; ++r) {
        attempts[r] += other.attempts[r];
        successes[r] += other.successes[r];
        shape_attempts[r].insert(other.shape_attempts[r].begin(), other.shape_attempts[r].end());
        shape_successes[r].insert(other.shape_successes[r].begin(), other.shape_successes[r].end());
    }
}

std::string canonical_shape(const ExpNode& node) {
    // Relabel qubits and modes in first-encounter order over a sorted raw
    // serialization; drop coefficients.
    std::vector<std::string> raw_groups;
    for (auto& g : node.groups) {
        std::vector<std::string> terms;
        for (auto& t : normal_order(g)) {
            std::ostringstream os;
            std::string w = trim_word(t.word);
            for (size_t i = 0; i < w.size(); ++i)
                if (w[i] != 'I') os << w[i] << 'q' << i << ' ';
            for (auto& o : t.ops) os << (o.dag ? 'd' : 'a') << 'm' << o.mode << ' ';
            terms.push_back(os.str());
        }
        std::sort(terms.begin(), terms.end());
        std::string joined;
        for (auto& s : terms) joined += s + "+ ";
        raw_groups.push_back(joined);
    }
    std::sort(raw_groups.begin(), raw_groups.end());
    std::string raw = node.kind == NodeKind::Comm ? "C:" : "E:";
    for (auto& s : raw_groups) raw += s + "| ";
    // relabel qN / mN tokens
    std::map<std::string, int> qmap, mmap;
    std::string out;
    for (size_t i = 0; i < raw.size();) {
        if ((raw[i] == 'q' || raw[i] == 'm') && i + 1 < raw.size() && std::isdigit((unsigned char)raw[i + 1])) {
            size_t j = i + 1;
            while (j < raw.size() && std::isdigit((unsigned char)raw[j])) ++j;
            std::string tok = raw.substr(i, j - i);
            auto& mp = raw[i] == 'q' ? qmap : mmap;
            auto it = mp.find(tok);
            int id = it == mp.end() ? (mp[tok] = (int)mp.size()) : it->second;
            out += raw[i];
            out += std::to_string(id);
            i = j;
        } else {
            out += raw[i++];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pattern detection on normal-ordered generators
// ---------------------------------------------------------------------------
namespace {

constexpr double kEps = 1e-10;

bool near_real(cplx c) { return std::abs(c.imag()) <= kEps * (1 + std::abs(c)); }
bool near_imag(cplx c) { return std::abs(c.real()) <= kEps * (1 + std::abs(c)); }

std::vector<LadderOp> ops_adjoint(const std::vector<LadderOp>& ops) {
    std::vector<LadderOp> out(ops.rbegin(), ops.rend());
    for (auto& o : out) o.dag = !o.dag;
    return out;
}

HSum mono(cplx c, std::string word, std::vector<LadderOp> ops) {
    return {HybridTerm{c, std::move(word), std::move(ops)}};
}

bool same_ops(const std::vector<LadderOp>& a, const std::vector<LadderOp>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].mode != b[i].mode || a[i].dag != b[i].dag) return false;
    return true;
}

bool commuting_pair(const std::vector<LadderOp>& m, const std::vector<LadderOp>& n) {
    return is_zero(commutator(mono(1, "", m), mono(1, "", n)), 1e-9);
}

bool herm_mono(const std::vector<LadderOp>& ops) { return is_hermitian(mono(1, "", ops), 1e-9); }

std::string word_at(char letter, int q) {
    std::string w(q + 1, 'I');
    w[q] = letter;
    return w;
}

// G == -i theta P (theta real, P a Pauli word of weight >= 1, no ladder part)
struct PureP {
    double theta;
    std::string word;
};
std::optional<PureP> detect_pure_pauli(const HSum& g) {
    if (g.size() != 1 || !g[0].ops.empty()) return std::nullopt;
    if (pauli_weight(g[0].word) < 1) return std::nullopt;
    cplx c = g[0].coeff;
    if (!near_imag(c)) return std::nullopt;
    return PureP{-c.imag(), trim_word(g[0].word)};
}

// G == P (x) (alpha adag_m - alpha* a_m)
struct ModP {
    cplx alpha;
    std::string word;
    int mode;
};
std::optional<ModP> detect_mod_pauli(const HSum& g) {
    if (g.size() != 2) return std::nullopt;
    const HybridTerm *up = nullptr, *dn = nullptr;
    for (auto& t : g) {
        if (t.ops.size() != 1) return std::nullopt;
        (t.ops[0].dag ? up : dn) = &t;
    }
    if (!up || !dn) return std::nullopt;
    if (trim_word(up->word) != trim_word(dn->word)) return std::nullopt;
    if (pauli_weight(up->word) < 1) return std::nullopt;
    if (up->ops[0].mode != dn->ops[0].mode) return std::nullopt;
    if (std::abs(dn->coeff + std::conj(up->coeff)) > kEps * (1 + std::abs(up->coeff)))
        return std::nullopt;
    return ModP{up->coeff, trim_word(up->word), up->ops[0].mode};
}

// G == -i theta W, W a Hermitian ladder monomial (no Pauli part)
struct MonoW {
    double theta;
    std::vector<LadderOp> ops;
};
std::optional<MonoW> detect_herm_monomial(const HSum& g) {
    if (g.size() != 1 || !g[0].word.empty() || g[0].ops.empty()) return std::nullopt;
    if (!near_imag(g[0].coeff)) return std::nullopt;
    if (!herm_mono(g[0].ops)) return std::nullopt;
    return MonoW{-g[0].coeff.imag(), g[0].ops};
}

// G == i (sigma+ K + sigma- K^dag) on one qubit, K a single ladder monomial.
struct BFormInfo {
    int qubit;
    cplx kc;
    std::vector<LadderOp> kops;
};
std::optional<BFormInfo> detect_bform(const HSum& g) {
    if (g.empty()) return std::nullopt;
    int qubit = -1;
    HSum px, py;
    for (auto& t : g) {
        std::string w = trim_word(t.word);
        if (pauli_weight(w) != 1) return std::nullopt;
        int q = pauli_support(w)[0];
        if (qubit < 0) qubit = q;
        if (q != qubit) return std::nullopt;
        HybridTerm b{t.coeff, "", t.ops};
        if (w[q] == 'X')
            px.push_back(b);
        else if (w[q] == 'Y')
            py.push_back(b);
        else
            return std::nullopt;
    }
    // G = i B_K  =>  K = -i PX - PY
    HSum k = normal_order(add(scale(px, cplx(0, -1)), scale(py, cplx(-1, 0))));
    if (k.size() != 1 || !k[0].word.empty() || k[0].ops.empty()) return std::nullopt;
    // verify reconstruction: i B_K == G
    HSum kd = adjoint(k);
    HSum rec;
    std::string xw = word_at('X', qubit), yw = word_at('Y', qubit);
    for (auto& t : k) {
        rec.push_back({t.coeff * cplx(0, 0.5), xw, t.ops});
        rec.push_back({t.coeff * cplx(-0.5, 0), yw, t.ops});
    }
    for (auto& t : kd) {
        rec.push_back({t.coeff * cplx(0, 0.5), xw, t.ops});
        rec.push_back({t.coeff * cplx(0.5, 0), yw, t.ops});
    }
    if (!is_zero(add(rec, scale(g, cplx(-1, 0))), 1e-9)) return std::nullopt;
    return BFormInfo{qubit, k[0].coeff, k[0].ops};
}

// G == sigma_axis(q) (x) (V - V^dag), V a single ladder monomial.
struct SigmaPM {
    char axis;
    int qubit;
    cplx vc;
    std::vector<LadderOp> vops;
};
std::optional<SigmaPM> detect_sigma_pm(const HSum& g) {
    if (g.empty() || g.size() > 2) return std::nullopt;
    char axis = 0;
    int qubit = -1;
    HSum p;
    for (auto& t : g) {
        std::string w = trim_word(t.word);
        if (pauli_weight(w) != 1 || t.ops.empty()) return std::nullopt;
        int q = pauli_support(w)[0];
        if (qubit < 0) {
            qubit = q;
            axis = w[q];
        }
        if (q != qubit || w[q] != axis) return std::nullopt;
        p.push_back({t.coeff, "", t.ops});
    }
    // dagger-heavy term is the canonical V (halved if Hermitian)
    const HybridTerm* pick = nullptr;
    auto ndag = [](const HybridTerm& t) {
        int n = 0;
        for (auto& o : t.ops) n += o.dag;
        return n;
    };
    for (auto& t : p)
        if (!pick || ndag(t) > ndag(*pick)) pick = &t;
    cplx vc = pick->coeff;
    std::vector<LadderOp> vops = pick->ops;
    if (herm_mono(vops)) vc *= 0.5;
    HSum v = mono(vc, "", vops);
    if (!is_zero(add(p, scale(add(v, scale(adjoint(v), cplx(-1, 0))), cplx(-1, 0))), 1e-9))
        return std::nullopt;
    return SigmaPM{axis, qubit, vc, vops};
}

}  // namespace

// ---------------------------------------------------------------------------
// Native match
// ---------------------------------------------------------------------------

std::optional<std::vector<Gate>> match_basis_gate(const HSum& group) {
    HSum g = normal_order(group);
    if (g.empty()) return std::vector<Gate>{};
    bool boson_only = true;
    for (auto& t : g)
        if (pauli_weight(t.word) > 0) boson_only = false;

    if (boson_only) {
        if (g.size() == 1) {
            auto& t = g[0];
            if (t.ops.size() == 2 && t.ops[0].dag && !t.ops[1].dag &&
                t.ops[0].mode == t.ops[1].mode && near_imag(t.coeff))
                return std::vector<Gate>{gR(-t.coeff.imag(), t.ops[0].mode)};
            return std::nullopt;
        }
        if (g.size() == 2) {
            // displacement: alpha ad - alpha* a
            const HybridTerm *up = nullptr, *dn = nullptr;
            if (g[0].ops.size() == 1 && g[1].ops.size() == 1) {
                for (auto& t : g) (t.ops[0].dag ? up : dn) = &t;
                if (up && dn && up->ops[0].mode == dn->ops[0].mode &&
                    std::abs(dn->coeff + std::conj(up->coeff)) < kEps * (1 + std::abs(up->coeff)))
                    return std::vector<Gate>{gD(up->coeff, up->ops[0].mode)};
                return std::nullopt;
            }
            // beamsplitter: -i t/2 (e^{ip} ad_a a_b + e^{-ip} a_a bd)
            const HybridTerm *fw = nullptr, *bw = nullptr;
            for (auto& t : g) {
                if (t.ops.size() != 2 || t.ops[0].mode == t.ops[1].mode) return std::nullopt;
                if (t.ops[0].dag && !t.ops[1].dag)
                    fw = &t;
                else if (!t.ops[0].dag && t.ops[1].dag)
                    bw = &t;
            }
            if (!fw || !bw) return std::nullopt;
            if (fw->ops[0].mode != bw->ops[0].mode || fw->ops[1].mode != bw->ops[1].mode)
                return std::nullopt;
            cplx half = cplx(0, 1) * fw->coeff;  // = t/2 e^{ip}
            double theta = 2.0 * std::abs(half);
            if (theta < 1e-300) return std::vector<Gate>{};
            double phi = std::arg(half);
            if (std::abs(bw->coeff + std::conj(fw->coeff)) > kEps * (1 + std::abs(fw->coeff)))
                return std::nullopt;
            return std::vector<Gate>{gBS(theta, phi, fw->ops[0].mode, fw->ops[1].mode)};
        }
        return std::nullopt;
    }

    // hybrid patterns: one common weight-1 letter
    char axis = 0;
    int qubit = -1;
    HSum p;
    for (auto& t : g) {
        std::string w = trim_word(t.word);
        if (pauli_weight(w) != 1) return std::nullopt;
        int q = pauli_support(w)[0];
        if (qubit < 0) {
            qubit = q;
            axis = w[q];
        }
        if (q != qubit || w[q] != axis) return std::nullopt;
        p.push_back({t.coeff, "", t.ops});
    }
    auto dress = [&](Gate gate) -> std::vector<Gate> {
        return synth_controlled_qumode_op(axis, qubit, {std::move(gate)});
    };
    if (p.size() == 1 && p[0].ops.empty()) {
        // single-qubit rotation exp(-i theta/2 sigma)
        if (!near_imag(p[0].coeff)) return std::nullopt;
        double theta = -2 * p[0].coeff.imag();
        Gate rot = axis == 'X' ? grx(theta, qubit) : axis == 'Y' ? gry(theta, qubit) : grz(theta, qubit);
        return std::vector<Gate>{rot};
    }
    if (p.size() == 1 && p[0].ops.size() == 2 && p[0].ops[0].dag && !p[0].ops[1].dag &&
        p[0].ops[0].mode == p[0].ops[1].mode && near_imag(p[0].coeff)) {
        // conditional rotation exp(-i t/2 sigma n)
        double theta = -2 * p[0].coeff.imag();
        int m = p[0].ops[0].mode;
        if (std::abs(theta - PI) < 1e-12) return dress(gCP(qubit, m));
        return dress(gCR(theta, qubit, m));
    }
    if (p.size() == 2 && p[0].ops.size() == 1 && p[1].ops.size() == 1) {
        const HybridTerm *up = nullptr, *dn = nullptr;
        for (auto& t : p) (t.ops[0].dag ? up : dn) = &t;
        if (up && dn && up->ops[0].mode == dn->ops[0].mode &&
            std::abs(dn->coeff + std::conj(up->coeff)) < kEps * (1 + std::abs(up->coeff)))
            return dress(gCD(up->coeff, qubit, up->ops[0].mode));
        return std::nullopt;
    }
    if (p.size() == 2 && p[0].ops.size() == 2 && p[1].ops.size() == 2) {
        const HybridTerm *fw = nullptr, *bw = nullptr;
        for (auto& t : p) {
            if (t.ops[0].mode == t.ops[1].mode) return std::nullopt;
            if (t.ops[0].dag && !t.ops[1].dag)
                fw = &t;
            else if (!t.ops[0].dag && t.ops[1].dag)
                bw = &t;
        }
        if (!fw || !bw) return std::nullopt;
        if (fw->ops[0].mode != bw->ops[0].mode || fw->ops[1].mode != bw->ops[1].mode)
            return std::nullopt;
        if (std::abs(bw->coeff + std::conj(fw->coeff)) > kEps * (1 + std::abs(fw->coeff)))
            return std::nullopt;
        cplx half = cplx(0, 1) * fw->coeff;
        double theta = 2.0 * std::abs(half);
        double phi = std::arg(half);
        return dress(gCBS(theta, phi, qubit, fw->ops[0].mode, bw->ops[1].mode));
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

std::vector<std::pair<std::vector<LadderOp>, std::vector<LadderOp>>> enumerate_splits(
    const std::vector<LadderOp>& ops) {
    std::vector<std::pair<std::vector<LadderOp>, std::vector<LadderOp>>> out;
    const int n = (int)ops.size();
    std::vector<int> cuts;
    for (int i = 1; i < n; ++i) cuts.push_back(i);
    std::stable_sort(cuts.begin(), cuts.end(), [&](int a, int b) {
        int da = std::abs(a - (n - a)), db = std::abs(b - (n - b));
        if (da != db) return da < db;
        return a < b;  // shorter first factor wins ties
    });
    for (int c : cuts)
        out.push_back({std::vector<LadderOp>(ops.begin(), ops.begin() + c),
                       std::vector<LadderOp>(ops.begin() + c, ops.end())});
    return out;
}

// ---------------------------------------------------------------------------
// Group-commutator expansion (rule 2)
// ---------------------------------------------------------------------------

std::vector<RuleOutcome::Item> bch_expand(const ExpNode& comm, int variant) {
    const HSum &a = comm.groups[0], &b = comm.groups[1];
    auto A = [&](bool inv) { return RuleOutcome::Item{ExpNode::exp1(a), {}, inv}; };
    auto B = [&](bool inv) { return RuleOutcome::Item{ExpNode::exp1(b), {}, inv}; };
    switch (variant & 3) {
        case 0: return {B(true), A(true), B(false), A(false)};
        case 1: return {B(false), A(false), B(true), A(true)};
        case 2: return {A(true), B(false), A(false), B(true)};
        default: return {A(false), B(true), A(true), B(false)};
    }
}

// ---------------------------------------------------------------------------
// Construction helpers for children
// ---------------------------------------------------------------------------
namespace {

// i (sigma+ K + sigma- K^dag) on qubit q, K = kc * kops.
HSum bgen(int q, cplx kc, const std::vector<LadderOp>& kops) {
    std::string xw = word_at('X', q), yw = word_at('Y', q);
    auto kd = ops_adjoint(kops);
    cplx kcd = std::conj(kc);
    return {HybridTerm{kc * cplx(0, 0.5), xw, kops}, HybridTerm{kc * cplx(-0.5, 0), yw, kops},
            HybridTerm{kcd * cplx(0, 0.5), xw, kd}, HybridTerm{kcd * cplx(0.5, 0), yw, kd}};
}

// sigma_axis(q) (x) (V - V^dag), V = vc * vops
HSum spm_gen(char axis, int q, cplx vc, const std::vector<LadderOp>& vops) {
    std::string w = word_at(axis, q);
    return {HybridTerm{vc, w, vops}, HybridTerm{-std::conj(vc), w, ops_adjoint(vops)}};
}

struct Ctx {
    VariantBits vb;
    int depth = 0;
    int mirror = 0;
};

struct Engine {
    const DecomposeOptions& opts;
    RuleStats& st;

    Realization fail(const std::string& why) { return {false, {}, why}; }
    Realization ok(std::vector<Gate> g) { return {true, std::move(g), {}}; }

    Realization rec(const ExpNode& node, Ctx ctx);

    // Assemble the group-commutator product from realized segments.
    std::vector<Gate> gc_gates(const std::vector<Gate>& segA, const std::vector<Gate>& segB,
                               int v) {
        auto iA = seq_adjoint(segA), iB = seq_adjoint(segB);
        std::vector<Gate> out;
        auto cat = [&](const std::vector<Gate>& s) { out.insert(out.end(), s.begin(), s.end()); };
        switch (v & 3) {
            case 0: cat(iB), cat(iA), cat(segB), cat(segA); break;
            case 1: cat(segB), cat(segA), cat(iB), cat(iA); break;
            case 2: cat(iA), cat(segB), cat(segA), cat(iB); break;
            default: cat(segA), cat(iB), cat(iA), cat(segB); break;
        }
        return out;
    }

    Realization realize_gc(const ExpNode& commNode, int variant, Ctx ctxA, Ctx ctxB) {
        if (!opts.rule_on(2)) return fail("commutator expansion disabled by config");
        auto a = rec(ExpNode::exp1(commNode.groups[0]), ctxA);
        if (!a.ok) return a;
        auto b = rec(ExpNode::exp1(commNode.groups[1]), ctxB);
        if (!b.ok) return b;
        st.record(2, canonical_shape(commNode), true);
        return ok(gc_gates(a.gates, b.gates, variant));
    }

    // Degree-1 conditional-displacement realizer for exp(i r B_W), W = a or
    // adag on `mode`, r = 2*alpha. Canonical and mirrored variants carry
    // equal-and-opposite leading defects.
    std::vector<Gate> deg1(bool dag, double alpha, int mirror, int q, int mode) {
        auto sx = [&](double al) {
            return synth_controlled_qumode_op('X', q, {gCD(cplx(0, al), q, mode)});
        };
        auto sy = [&](double al) {
            return synth_controlled_qumode_op('Y', q, {gCD(cplx(0, al), q, mode)});
        };
        auto core = [&](double al, bool isdag) {
            // creation: sx(al) R(+) sy(al) R(-); annihilation: sx(al) R(+) sy(-al) R(-)
            double syArg = isdag ? al : -al;
            std::vector<Gate> s = sx(al);
            s.push_back(gR(PI / 2, mode));
            for (auto& g : sy(syArg)) s.push_back(g);
            s.push_back(gR(-PI / 2, mode));
            return s;
        };
        if (!mirror) return core(alpha, dag);
        return seq_adjoint(core(-alpha, dag));
    }

    Realization realize_bform(const BFormInfo& bf, Ctx ctx, const ExpNode& node);
    Realization realize_sigma_pm(const SigmaPM& s, Ctx ctx, const ExpNode& node);
    Realization realize_promoted(const MonoW& mw, Ctx ctx, const ExpNode& node);
    Realization realize_split(const ExpNode& node, Ctx ctx, int reps, bool use_r1o);
};

Realization Engine::realize_bform(const BFormInfo& bf, Ctx ctx, const ExpNode& node) {
    const double r = std::abs(bf.kc);
    const double psi = -std::arg(bf.kc);
    const int q = bf.qubit;
    const int mode = bf.kops[0].mode;
    std::vector<Gate> inner;
    if (bf.kops.size() == 1) {
        const bool dag = bf.kops[0].dag;
        if (!opts.rule_on(dag ? 12 : 13))
            return fail("degree-1 coupling realizer disabled by config");
        inner = deg1(dag, r / 2, ctx.mirror, q, mode);
        st.record(dag ? 12 : 13, canonical_shape(node), true);
    } else {
        // exp(i r B_W) = X exp(r/2 sy(W - Wd) + i r/2 sx(W + Wd)) X
        if (!opts.rule_on(10)) return fail("coupling quadrature split disabled by config");
        HSum gy = spm_gen('Y', q, cplx(r / 2, 0), bf.kops);
        HSum gx = spm_gen('X', q, cplx(0, r / 2), bf.kops);
        ExpNode pair{NodeKind::Exp, {gy, gx}};
        st.record(10, canonical_shape(node), true);
        auto mid = realize_split(pair, ctx, opts.exptask_reps, true);
        if (!mid.ok) return mid;
        inner.push_back(grx(PI, q));
        inner.insert(inner.end(), mid.gates.begin(), mid.gates.end());
        inner.push_back(grx(PI, q));
    }
    if (std::abs(psi) > 1e-14) {
        std::vector<Gate> out{grz(-psi, q)};
        inner.swap(out);
        inner.insert(inner.end(), out.begin(), out.end());  // inner = [rz(-psi)] + core
        inner.push_back(grz(psi, q));
    }
    return ok(std::move(inner));
}

Realization Engine::realize_sigma_pm(const SigmaPM& s, Ctx ctx, const ExpNode& node) {
    const cplx v = s.vc;
    // factor the monomial; both halves must commute for the two-sided identity
    std::optional<std::pair<std::vector<LadderOp>, std::vector<LadderOp>>> split;
    for (auto& cand : enumerate_splits(s.vops))
        if (commuting_pair(cand.first, cand.second)) {
            split = cand;
            break;
        }
    const bool vherm = herm_mono(s.vops);
    const bool imag_case = near_imag(v);
    const int rule = imag_case ? (vherm ? 9 : 7) : 6;
    if (!opts.rule_on(rule)) return fail("conditioned-monomial realizer disabled by config");
    if (!split) {
        st.record(rule, canonical_shape(node), false);
        return fail("no commuting factor pair for conditioned monomial");
    }
    const auto &M = split->first, &N = split->second;
    const auto Nd = ops_adjoint(N);
    cplx wa, wb;  // segment weights; child pair must commutate to sigma_z (V - Vd)
    std::vector<LadderOp> opsA, opsB;
    if (imag_case) {
        // prototype x-type assignment: A on M, B on N^dag; -wa*conj(wb) = v
        double c = v.imag();
        double rc = std::sqrt(std::abs(c));
        wa = c > 0 ? cplx(0, -rc) : cplx(0, rc);
        wb = cplx(rc, 0);
        opsA = M;
        opsB = Nd;
    } else if (near_real(v)) {
        // prototype y-type assignment: A on N^dag, B on M; wb*conj(wa) = v
        double c = v.real();
        double rc = std::sqrt(std::abs(c));
        wa = cplx(c > 0 ? rc : -rc, 0);
        wb = cplx(rc, 0);
        opsA = Nd;
        opsB = M;
    } else {
        cplx rt = std::sqrt(v);
        wa = std::conj(rt);
        wb = rt;
        opsA = Nd;
        opsB = M;
    }
    ExpNode commNode = ExpNode::comm(bgen(s.qubit, wa, opsA), bgen(s.qubit, wb, opsB));
    st.record(rule, canonical_shape(node), true);
    Ctx ca = ctx, cb = ctx;
    int variant;
    if (imag_case) {
        ca.mirror = ctx.vb.dx;
        cb.mirror = ctx.vb.dx ^ ctx.vb.px;
        variant = ctx.vb.gcx;
    } else {
        ca.mirror = ctx.vb.dy;
        cb.mirror = ctx.vb.dy ^ ctx.vb.py;
        variant = ctx.vb.gcy;
    }
    ca.depth = cb.depth = ctx.depth + 1;
    auto core = realize_gc(commNode, variant, ca, cb);
    if (!core.ok) return core;
    return ok(synth_controlled_qumode_op(s.axis, s.qubit, core.gates));
}

Realization Engine::realize_promoted(const MonoW& mw, Ctx ctx, const ExpNode& node) {
    if (!opts.rule_on(11)) return fail("monomial promotion disabled by config");
    if (opts.ancilla_qubit < 0) {
        st.record(11, canonical_shape(node), false);
        return fail("monomial promotion needs an ancilla qubit");
    }
    auto splits = enumerate_splits(mw.ops);
    if (splits.empty()) {
        st.record(11, canonical_shape(node), false);
        return fail("monomial too short to factor");
    }
    st.record(11, canonical_shape(node), true);
    const auto& [M, N] = splits.front();  // most balanced factor pair
    const auto Nd = ops_adjoint(N);
    const int q = opts.ancilla_qubit;
    const int reps = std::max(1, opts.quartic_reps);
    if (reps > 1) st.record(1, canonical_shape(node), true);
    const double th = std::abs(mw.theta) / reps;
    const double t1 = std::sqrt(th / 2);
    std::vector<Gate> out;
    for (int rep = 0; rep < reps; ++rep) {
        Ctx c = ctx;
        if (opts.alternate_reps && (rep & 1)) c.vb = ctx.vb.complement();
        c.depth = ctx.depth + 1;
        // qubit-|0> block of exp([i B_{-i t1 M}, i B_{t1 N^dag}]) is
        // exp(+i t1^2 2 M N); invert it for positive angles.
        ExpNode commNode = ExpNode::comm(bgen(q, cplx(0, -t1), M), bgen(q, cplx(t1, 0), Nd));
        auto seg = realize_gc(commNode, c.vb.gc2, c, c);
        if (!seg.ok) return seg;
        auto gates = mw.theta > 0 ? seq_adjoint(seg.gates) : seg.gates;
        out.insert(out.end(), gates.begin(), gates.end());
    }
    return ok(std::move(out));
}

Realization Engine::realize_split(const ExpNode& node, Ctx ctx, int reps, bool use_r1o) {
    if (!opts.rule_on(1)) return fail("product split disabled by config");
    reps = std::max(1, reps);
    st.record(1, canonical_shape(node), true);
    std::vector<size_t> order(node.groups.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (use_r1o && ctx.vb.r1o == 0) std::reverse(order.begin(), order.end());
    std::vector<Gate> out;
    Ctx c = ctx;
    c.depth = ctx.depth + 1;
    for (int rep = 0; rep < reps; ++rep) {
        for (size_t gi : order) {
            HSum part = scale(node.groups[gi], cplx(1.0 / reps, 0));
            auto r = rec(ExpNode::exp1(std::move(part)), c);
            if (!r.ok) return r;
            out.insert(out.end(), r.gates.begin(), r.gates.end());
        }
    }
    return ok(std::move(out));
}

Realization Engine::rec(const ExpNode& node, Ctx ctx) {
    if (ctx.depth > opts.max_depth) return fail("decomposition exceeded the depth limit");
    if (node.kind == NodeKind::Comm) {
        Ctx c = ctx;
        c.depth = ctx.depth + 1;
        return realize_gc(node, ctx.vb.gc2, c, c);
    }
    if (node.groups.size() != 1) return realize_split(node, ctx, 1, false);

    HSum g = normal_order(node.groups[0]);
    if (g.empty()) return ok({});
    if (g.size() == 1 && g[0].ops.empty() && pauli_weight(g[0].word) == 0)
        return ok({});  // scalar: a global phase, dropped

    const bool pauli_rules_on = opts.rule_on(14) && opts.rule_on(15);
    if (auto pp = detect_pure_pauli(g); pp && pauli_rules_on) {
        st.record(15, canonical_shape(node), true);
        st.record(14, canonical_shape(node), true);
        return ok({gpauli(pp->theta, pp->word)});
    }
    if (auto mp = detect_mod_pauli(g)) {
        if (pauli_weight(mp->word) == 1 && mp->word[pauli_support(mp->word)[0]] == 'Z' &&
            opts.rule_on(16)) {
            st.record(16, canonical_shape(node), true);
            return ok({gCD(mp->alpha, pauli_support(mp->word)[0], mp->mode)});
        }
        if (pauli_rules_on) {
            st.record(15, canonical_shape(node), true);
            st.record(14, canonical_shape(node), true);
            return ok({gpauli_mod(mp->alpha, mp->word, mp->mode)});
        }
    }
    if (opts.rule_on(16))
        if (auto gates = match_basis_gate(g)) {
            st.record(16, canonical_shape(node), true);
            return ok(std::move(*gates));
        }
    if (auto bf = detect_bform(g)) return realize_bform(*bf, ctx, node);
    if (auto spm = detect_sigma_pm(g)) return realize_sigma_pm(*spm, ctx, node);
    if (auto mw = detect_herm_monomial(g)) {
        if (mw->ops.size() >= 2) return realize_promoted(*mw, ctx, node);
        return fail("degree-1 Hermitian monomial is a scaled identity shift");
    }
    // last resort: split into commut-agnostic sub-groups, keeping each child
    // anti-Hermitian. First partition by Pauli word; failing that, pair each
    // monomial with its adjoint partner.
    if (g.size() > 1) {
        std::map<std::string, HSum> byword;
        for (auto& t : g) byword[trim_word(t.word)].push_back(t);
        ExpNode split{NodeKind::Exp, {}};
        if (byword.size() > 1) {
            for (auto& [w, part] : byword) split.groups.push_back(part);
            return realize_split(split, ctx, 1, false);
        }
        std::vector<bool> used(g.size(), false);
        for (size_t i = 0; i < g.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            HSum cls{g[i]};
            HSum ta = normal_order({adjoint_term(g[i])});
            if (ta.size() == 1)
                for (size_t j = i + 1; j < g.size(); ++j)
                    if (!used[j] && trim_word(g[j].word) == trim_word(ta[0].word) &&
                        same_ops(g[j].ops, ta[0].ops)) {
                        used[j] = true;
                        cls.push_back(g[j]);
                        break;
                    }
            split.groups.push_back(std::move(cls));
        }
        if (split.groups.size() > 1) return realize_split(split, ctx, 1, false);
    }
    return fail("no rule matches generator " + emit_expr(g));
}

}  // namespace

// ---------------------------------------------------------------------------
// Public driver entry points
// ---------------------------------------------------------------------------

Realization decompose(const ExpNode& node, const DecomposeOptions& opts, RuleStats& stats) {
    Engine eng{opts, stats};
    return eng.rec(node, Ctx{opts.variants, 0, 0});
}

Realization trotterize(const std::vector<HSum>& hamiltonian, double t, int k,
                       const DecomposeOptions& opts, RuleStats& stats) {
    Engine eng{opts, stats};
    ExpNode whole{NodeKind::Exp, {}};
    for (auto& h : hamiltonian) whole.groups.push_back(scale(h, cplx(0, -t)));
    stats.record(1, canonical_shape(whole), true);
    std::vector<Gate> out;
    for (int step = 0; step < k; ++step) {
        Ctx c{opts.variants, 1, 0};
        if (opts.alternate_steps && (step & 1)) c.vb = opts.variants.complement();
        for (auto& h : hamiltonian) {
            auto r = eng.rec(ExpNode::exp1(scale(h, cplx(0, -t / k))), c);
            if (!r.ok) return r;
            out.insert(out.end(), r.gates.begin(), r.gates.end());
        }
    }
    return {true, std::move(out), {}};
}

// ---------------------------------------------------------------------------
// Single-step rule application (conformance harness entry)
// ---------------------------------------------------------------------------
namespace {

std::optional<RuleOutcome> try_anticomm_or_comm(const HSum& g, bool anti) {
    // G = c sigma_i (x) S with S = MN + NM (anti) or MN - NM.  Candidate pairs
    // (M, N) come from contiguous splits of the largest monomial and from a
    // per-mode quadrature dictionary (position, momentum, occupation).
    HSum p;
    char axis = 0;
    int qubit = -1;
    for (auto& t : g) {
        std::string w = trim_word(t.word);
        if (pauli_weight(w) != 1 || t.ops.empty()) return std::nullopt;
        int q = pauli_support(w)[0];
        if (qubit < 0) {
            qubit = q;
            axis = w[q];
        }
        if (q != qubit || w[q] != axis) return std::nullopt;
        p.push_back({t.coeff, "", t.ops});
    }
    if (anti == false && axis != 'Z') return std::nullopt;  // commutator form uses sigma_z

    auto solve = [&](const HSum& m, const HSum& n) -> std::optional<RuleOutcome> {
        HSum S = anti ? anticommutator(m, n) : commutator(m, n);
        if (S.empty()) return std::nullopt;
        cplx c = 0;
        for (auto& ts : S) {
            for (auto& tp : p)
                if (same_ops(tp.ops, ts.ops)) c = tp.coeff / ts.coeff;
            if (c != cplx(0, 0)) break;
        }
        if (c == cplx(0, 0)) return std::nullopt;
        if (!is_zero(add(p, scale(S, -c)), 1e-9)) return std::nullopt;
        RuleOutcome out;
        if (anti) {
            // children [i t sj M, i t sk N], sj sk = i si (swapped for the other sign)
            cplx t2 = c * cplx(0, 1);  // c = -i t^2
            if (!near_real(t2) || std::abs(t2.real()) < 1e-300) return std::nullopt;
            double t = std::sqrt(std::abs(t2.real()));
            static const std::map<char, std::pair<char, char>> cyc{
                {'Z', {'X', 'Y'}}, {'X', {'Y', 'Z'}}, {'Y', {'Z', 'X'}}};
            auto [j, k] = cyc.at(axis);
            if (t2.real() < 0) std::swap(j, k);
            HSum a = scale(mul(mono(1, word_at(j, qubit), {}), m), cplx(0, t));
            HSum b = scale(mul(mono(1, word_at(k, qubit), {}), n), cplx(0, t));
            out.seq.push_back({ExpNode::comm(a, b), {}, false});
            return out;
        }
        // rule 5 children [i t N, i t sz M] (roles swapped for negative c)
        if (!near_real(c) || std::abs(c.real()) < 1e-300) return std::nullopt;
        double t = std::sqrt(std::abs(c.real()));
        HSum first = scale(c.real() > 0 ? n : m, cplx(0, t));
        HSum second = scale(mul(mono(1, word_at('Z', qubit), {}), c.real() > 0 ? m : n), cplx(0, t));
        out.seq.push_back({ExpNode::comm(first, second), {}, false});
        return out;
    };

    const HybridTerm* lead = nullptr;
    for (auto& t : p)
        if (!lead || t.ops.size() > lead->ops.size()) lead = &t;
    for (auto& [M, N] : enumerate_splits(lead->ops)) {
        HSum m = mono(1, "", M), n = mono(1, "", N);
        if (!is_hermitian(m) || !is_hermitian(n)) continue;
        if (auto out = solve(m, n)) return out;
    }
    std::set<int> modes;
    for (auto& t : p)
        for (auto& o : t.ops) modes.insert(o.mode);
    std::vector<HSum> dict;
    for (int md : modes) {
        dict.push_back(add(mono(1, "", {{md, true}}), mono(1, "", {{md, false}})));
        dict.push_back(add(mono(cplx(0, 1), "", {{md, true}}), mono(cplx(0, -1), "", {{md, false}})));
        dict.push_back(mono(1, "", {{md, true}, {md, false}}));
    }
    for (size_t i = 0; i < dict.size(); ++i)
        for (size_t j = 0; j < dict.size(); ++j)
            if (i != j)
                if (auto out = solve(dict[i], dict[j])) return out;
    return std::nullopt;
}

}  // namespace

std::optional<RuleOutcome> apply_rule(int rule, const ExpNode& node, const DecomposeOptions& opts) {
    RuleOutcome out;
    const bool isExp = node.kind == NodeKind::Exp;
    HSum g = isExp && node.groups.size() == 1 ? normal_order(node.groups[0]) : HSum{};
    switch (rule) {
        case 1: {
            if (!isExp || node.groups.size() < 2) return std::nullopt;
            for (auto& grp : node.groups) out.seq.push_back({ExpNode::exp1(grp), {}, false});
            out.exact = false;
            return out;
        }
        case 2: {
            if (isExp) return std::nullopt;
            out.seq = bch_expand(node, 0);
            out.exact = false;
            return out;
        }
        case 3: {
            if (isExp) return std::nullopt;
            if (opts.ancilla_qubit < 0) return std::nullopt;
            for (auto& grp : node.groups)
                for (auto& t : grp)
                    if (pauli_weight(t.word) > 0) return std::nullopt;
            std::string w = word_at('X', opts.ancilla_qubit);
            HSum a = mul(mono(1, w, {}), node.groups[0]);
            HSum b = mul(mono(1, w, {}), node.groups[1]);
            out.seq.push_back({ExpNode::comm(a, b), {}, false});
            return out;
        }
        case 4: {
            if (!isExp || g.empty()) return std::nullopt;
            return try_anticomm_or_comm(g, true);
        }
        case 5: {
            if (!isExp || g.empty()) return std::nullopt;
            return try_anticomm_or_comm(g, false);
        }
        case 6:
        case 7:
        case 9: {
            if (!isExp || g.empty()) return std::nullopt;
            auto spm = detect_sigma_pm(g);
            if (!spm) return std::nullopt;
            const bool imag_case = near_imag(spm->vc);
            const bool vherm = herm_mono(spm->vops);
            int classified = imag_case ? (vherm ? 9 : 7) : 6;
            if (classified != rule) return std::nullopt;
            // same segment-weight assignment as the recursive realizer
            std::optional<std::pair<std::vector<LadderOp>, std::vector<LadderOp>>> split;
            for (auto& cand : enumerate_splits(spm->vops))
                if (commuting_pair(cand.first, cand.second)) {
                    split = cand;
                    break;
                }
            if (!split) return std::nullopt;
            const auto &M = split->first, &N = split->second;
            const auto Nd = ops_adjoint(N);
            cplx wa, wb;
            std::vector<LadderOp> opsA, opsB;
            if (imag_case) {
                double c = spm->vc.imag();
                double rc = std::sqrt(std::abs(c));
                wa = c > 0 ? cplx(0, -rc) : cplx(0, rc);
                wb = cplx(rc, 0);
                opsA = M;
                opsB = Nd;
            } else {
                double c = spm->vc.real();
                double rc = std::sqrt(std::abs(c));
                wa = cplx(c > 0 ? rc : -rc, 0);
                wb = cplx(rc, 0);
                opsA = Nd;
                opsB = M;
            }
            auto wrap = synth_controlled_qumode_op(spm->axis, spm->qubit, {});
            if (wrap.size() == 2) out.seq.push_back({{}, {wrap[0]}, false});
            out.seq.push_back(
                {ExpNode::comm(bgen(spm->qubit, wa, opsA), bgen(spm->qubit, wb, opsB)), {}, false});
            if (wrap.size() == 2) out.seq.push_back({{}, {wrap[1]}, false});
            return out;
        }
        case 8: {
            if (!isExp || g.size() != 1) return std::nullopt;
            auto& t0 = g[0];
            std::string w = trim_word(t0.word);
            if (pauli_weight(w) != 1 || t0.ops.size() < 2) return std::nullopt;
            int q = pauli_support(w)[0];
            if (w[q] != 'Z') return std::nullopt;
            cplx c = t0.coeff;  // = -2 i t
            if (!near_imag(c)) return std::nullopt;
            double t = -c.imag() / 2;
            for (auto& [M, N] : enumerate_splits(t0.ops)) {
                HSum m = mono(1, "", M), n = mono(1, "", N);
                HSum mn = normal_order(mul(m, n)), nm = normal_order(mul(n, m));
                if (!is_hermitian(mn) || !is_hermitian(nm)) continue;
                HSum z = mono(1, word_at('Z', q), {});
                HSum g1 = scale(mul(z, commutator(m, n)), cplx(0, -t));
                HSum g2 = scale(mul(z, anticommutator(m, n)), cplx(0, -t));
                ExpNode child{NodeKind::Exp, {normal_order(g1), normal_order(g2)}};
                out.seq.push_back({child, {}, false});
                return out;
            }
            return std::nullopt;
        }
        case 10: {
            if (!isExp || g.empty()) return std::nullopt;
            auto bf = detect_bform(g);
            if (!bf || bf->kops.size() < 2) return std::nullopt;
            const double r = std::abs(bf->kc);
            const double psi = -std::arg(bf->kc);
            HSum gy = spm_gen('Y', bf->qubit, cplx(r / 2, 0), bf->kops);
            HSum gx = spm_gen('X', bf->qubit, cplx(0, r / 2), bf->kops);
            if (std::abs(psi) > 1e-14) out.seq.push_back({{}, {grz(-psi, bf->qubit)}, false});
            out.seq.push_back({{}, {grx(PI, bf->qubit)}, false});
            out.seq.push_back({ExpNode{NodeKind::Exp, {gy, gx}}, {}, false});
            out.seq.push_back({{}, {grx(PI, bf->qubit)}, false});
            if (std::abs(psi) > 1e-14) out.seq.push_back({{}, {grz(psi, bf->qubit)}, false});
            return out;
        }
        case 11: {
            if (!isExp || g.empty()) return std::nullopt;
            auto mw = detect_herm_monomial(g);
            if (!mw || mw->ops.size() < 2 || opts.ancilla_qubit < 0) return std::nullopt;
            auto splits = enumerate_splits(mw->ops);
            const auto& [M, N] = splits.front();
            const double t1 = std::sqrt(std::abs(mw->theta) / 2);
            ExpNode commNode = ExpNode::comm(bgen(opts.ancilla_qubit, cplx(0, -t1), M),
                                             bgen(opts.ancilla_qubit, cplx(t1, 0), ops_adjoint(N)));
            out.seq.push_back({commNode, {}, mw->theta > 0});
            return out;
        }
        case 12:
        case 13: {
            if (!isExp || g.empty()) return std::nullopt;
            auto bf = detect_bform(g);
            if (!bf || bf->kops.size() != 1) return std::nullopt;
            if ((rule == 12) != bf->kops[0].dag) return std::nullopt;
            RuleStats scratch;
            DecomposeOptions o2 = opts;
            Engine eng{o2, scratch};
            auto r = eng.realize_bform(*bf, Ctx{opts.variants, 0, 0}, node);
            if (!r.ok) return std::nullopt;
            out.seq.push_back({{}, r.gates, false});
            out.exact = false;
            return out;
        }
        case 14: {
            if (!isExp || g.empty()) return std::nullopt;
            auto mp = detect_mod_pauli(g);
            if (!mp) return std::nullopt;
            out.seq.push_back({{}, synth_multiqubit_cd(mp->word, mp->alpha, mp->mode), false});
            return out;
        }
        case 15: {
            if (!isExp || g.empty()) return std::nullopt;
            if (auto pp = detect_pure_pauli(g)) {
                out.seq.push_back({{}, {gpauli(pp->theta, pp->word)}, false});
                return out;
            }
            if (auto mp = detect_mod_pauli(g)) {
                out.seq.push_back({{}, {gpauli_mod(mp->alpha, mp->word, mp->mode)}, false});
                return out;
            }
            return std::nullopt;
        }
        case 16: {
            if (!isExp || g.empty()) return std::nullopt;
            auto gates = match_basis_gate(g);
            if (!gates) return std::nullopt;
            out.seq.push_back({{}, *gates, false});
            return out;
        }
        default: return std::nullopt;
    }
}

}  // namespace cvdv

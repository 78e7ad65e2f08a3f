#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <unsupported/Eigen/MatrixFunctions>

#include "cvdv/rules.hpp"
#include "cvdv/sim.hpp"

using namespace cvdv;

namespace {

Circuit as_circuit(const std::vector<Gate>& gates, int nq, int nm) {
    Circuit c;
    c.nq = nq;
    c.nm = nm;
    for (auto& g : gates) c.push(g);
    return c;
}

// exp of a generator evaluated at an enlarged cutoff, clipped back
Mat exp_gen(const HSum& g, const SimSpace& sp, int pad) {
    SimSpace big{sp.nq, sp.nm, sp.cutoff + pad};
    Mat h = operator_matrix(g, big);
    Mat u = h.exp();
    return clip_matrix(u, big, sp);
}

// product of a rule outcome's items, time order, at an enlarged cutoff
Mat eval_items(const std::vector<RuleOutcome::Item>& items, const SimSpace& sp, int pad) {
    Mat u = Mat::Identity(sp.dim(), sp.dim());
    for (auto& it : items) {
        Mat m;
        if (it.node) {
            m = exp_gen(it.node->generator(), sp, pad);
        } else {
            m = circuit_unitary_padded(as_circuit(it.gates, sp.nq, sp.nm), sp, pad);
        }
        if (it.invert) m = m.adjoint().eval();
        u = (m * u).eval();
    }
    return u;
}

// top-left (ancilla |0>) block: qubit 0 is the most significant subsystem
Mat qubit0_block(const Mat& u) {
    int half = (int)u.rows() / 2;
    return u.topLeftCorner(half, half);
}

std::vector<LadderOp> ops(std::initializer_list<std::pair<int, bool>> l) {
    std::vector<LadderOp> out;
    for (auto& [m, d] : l) out.push_back({m, d});
    return out;
}

HSum sum1(cplx c, std::string w, std::vector<LadderOp> o) {
    return {HybridTerm{c, std::move(w), std::move(o)}};
}

int count_kind(const std::vector<Gate>& gates, GateKind k) {
    int n = 0;
    for (auto& g : gates) n += g.kind == k;
    return n;
}

}  // namespace

TEST_CASE("contiguous factor enumeration is balanced-first") {
    auto v = ops({{0, true}, {0, true}, {0, false}, {0, false}});
    auto sp = enumerate_splits(v);
    REQUIRE(sp.size() == 3);
    CHECK(sp[0].first.size() == 2);  // balanced cut first
    CHECK(sp[1].first.size() == 1);  // then shorter left factor
    CHECK(sp[2].first.size() == 3);
    auto two = enumerate_splits(ops({{0, true}, {0, false}}));
    REQUIRE(two.size() == 1);
    CHECK(two[0].first.size() == 1);
}

TEST_CASE("group-commutator product targets exp([A,B]) with cubic error") {
    SimSpace sp{0, 1, 14};
    const int pad = 10;
    for (int variant = 0; variant < 4; ++variant) {
        double prev = -1;
        for (double t : {0.1, 0.05}) {
            HSum a = sum1(cplx(0, t), "", ops({{0, true}})),
                 b = sum1(cplx(0, t), "", ops({{0, true}, {0, false}}));
            a = add(a, adjoint(scale(a, -1)));  // it (a^dag + a)
            ExpNode node = ExpNode::comm(a, b);
            Mat u = eval_items(bch_expand(node, variant), sp, pad);
            Mat v = exp_gen(node.generator(), sp, pad);
            double d = projected_distance(u, v, sp, 6);
            if (prev > 0) {
                // halving t shrinks the defect ~8x
                CHECK(prev / d > 5.0);
                CHECK(prev / d < 11.0);
            }
            prev = d;
        }
    }
}

TEST_CASE("native pattern match reproduces gate generators") {
    SimSpace sp1{0, 1, 12}, sp2{0, 2, 10}, spq{1, 1, 12};
    const int pad = 8;
    auto roundtrip = [&](const HSum& g, const SimSpace& sp, GateKind expect, int nexpect) {
        auto gates = match_basis_gate(g);
        REQUIRE(gates.has_value());
        CHECK((int)gates->size() == nexpect);
        CHECK(count_kind(*gates, expect) == 1);
        Mat u = circuit_unitary_padded(as_circuit(*gates, sp.nq, sp.nm), sp, pad);
        Mat v = exp_gen(g, sp, pad);
        CHECK(projected_distance(u, v, sp, sp.cutoff / 2) < 1e-10);
    };
    // rotation of the mode phase
    roundtrip(sum1(cplx(0, -0.7), "", ops({{0, true}, {0, false}})), sp1, GateKind::R, 1);
    // displacement
    {
        cplx al(0.3, 0.2);
        HSum g = add(sum1(al, "", ops({{0, true}})), sum1(-std::conj(al), "", ops({{0, false}})));
        roundtrip(g, sp1, GateKind::D, 1);
    }
    // beamsplitter
    {
        double th = 0.8, ph = 0.5;
        cplx cf = cplx(0, -th / 2) * std::exp(cplx(0, ph));
        HSum g = add(sum1(cf, "", ops({{0, true}, {1, false}})),
                     sum1(-std::conj(cf), "", ops({{0, false}, {1, true}})));
        roundtrip(g, sp2, GateKind::BS, 1);
    }
    // conditional rotation, z and dressed x
    roundtrip(sum1(cplx(0, -0.45), "Z", ops({{0, true}, {0, false}})), spq, GateKind::CR, 1);
    roundtrip(sum1(cplx(0, -PI / 2), "Z", ops({{0, true}, {0, false}})), spq, GateKind::CP, 1);
    roundtrip(sum1(cplx(0, -0.45), "X", ops({{0, true}, {0, false}})), spq, GateKind::CR, 3);
    // conditional displacement
    {
        cplx al(0.25, -0.1);
        HSum g = add(sum1(al, "Z", ops({{0, true}})), sum1(-std::conj(al), "Z", ops({{0, false}})));
        roundtrip(g, spq, GateKind::CD, 1);
    }
    // conditioned beamsplitter, dressed
    {
        SimSpace spb{1, 2, 8};
        double th = 0.6, ph = -0.3;
        cplx cf = cplx(0, -th / 2) * std::exp(cplx(0, ph));
        HSum g = add(sum1(cf, "Y", ops({{0, true}, {1, false}})),
                     sum1(-std::conj(cf), "Y", ops({{0, false}, {1, true}})));
        auto gates = match_basis_gate(g);
        REQUIRE(gates.has_value());
        CHECK(count_kind(*gates, GateKind::CBS) == 1);
        Mat u = circuit_unitary_padded(as_circuit(*gates, 1, 2), spb, 6);
        Mat v = exp_gen(g, spb, 6);
        CHECK(projected_distance(u, v, spb, 4) < 1e-10);
    }
    // bare qubit rotation
    {
        auto gates = match_basis_gate(sum1(cplx(0, -0.35), "Y", {}));
        REQUIRE(gates.has_value());
        REQUIRE(gates->size() == 1);
        CHECK((*gates)[0].kind == GateKind::RY);
        CHECK((*gates)[0].params[0].real() == doctest::Approx(0.7));
    }
    // non-native shapes are rejected
    CHECK(!match_basis_gate(sum1(cplx(0, -0.2), "", ops({{0, true}, {0, true}, {0, false}, {0, false}}))));
    CHECK(!match_basis_gate(sum1(cplx(0, -0.2), "ZZ", ops({{0, true}, {0, false}}))));
}

TEST_CASE("single-step rewrites hold exactly") {
    DecomposeOptions opts;
    opts.ancilla_qubit = 0;
    const double tol = 1e-9;

    SUBCASE("ancilla promotion of a boson commutator pair") {
        HSum a = add(sum1(cplx(0, 0.2), "", ops({{0, true}})),
                     sum1(cplx(0, 0.2), "", ops({{0, false}})));
        HSum b = sum1(cplx(0, 0.15), "", ops({{0, true}, {0, false}}));
        ExpNode node = ExpNode::comm(a, b);
        auto out = apply_rule(3, node, opts);
        REQUIRE(out.has_value());
        REQUIRE(out->seq.size() == 1);
        REQUIRE(out->seq[0].node.has_value());
        // the promoted pair's commutator equals the original one
        CHECK(is_zero(add(out->seq[0].node->generator(), scale(node.generator(), -1)), 1e-10));
        for (auto& grp : out->seq[0].node->groups)
            for (auto& t : grp) CHECK(pauli_weight(t.word) == 1);
    }

    SUBCASE("anticommutator via a mixed-axis commutator") {
        SimSpace sp{1, 2, 10};
        double t = 0.25;
        HSum m = sum1(1, "", ops({{0, true}, {0, false}}));
        HSum n = sum1(1, "", ops({{1, true}, {1, false}}));
        for (char axis : {'Z', 'X', 'Y'}) {
            for (double sgn : {1.0, -1.0}) {
                std::string w(1, axis);
                HSum g = scale(mul(sum1(1, w, {}), anticommutator(m, n)), cplx(0, -sgn * t * t));
                auto out = apply_rule(4, ExpNode::exp1(g), opts);
                REQUIRE(out.has_value());
                REQUIRE(out->seq.size() == 1);
                CHECK(is_zero(add(out->seq[0].node->generator(), scale(g, -1)), 1e-10));
                Mat u = eval_items(out->seq, sp, 6);
                Mat v = exp_gen(g, sp, 6);
                CHECK(projected_distance(u, v, sp, 5) < tol);
            }
        }
    }

    SUBCASE("commutator of quadrature pairs on one axis") {
        SimSpace sp{1, 1, 14};
        double t = 0.3;
        HSum q = add(sum1(1, "", ops({{0, true}})), sum1(1, "", ops({{0, false}})));
        HSum nh = sum1(1, "", ops({{0, true}, {0, false}}));
        for (double sgn : {1.0, -1.0}) {
            HSum g = scale(mul(sum1(1, "Z", {}), commutator(q, nh)), cplx(sgn * t * t, 0));
            REQUIRE(is_anti_hermitian(g));
            auto out = apply_rule(5, ExpNode::exp1(g), opts);
            REQUIRE(out.has_value());
            CHECK(is_zero(add(out->seq[0].node->generator(), scale(g, -1)), 1e-10));
            Mat u = eval_items(out->seq, sp, 10);
            Mat v = exp_gen(g, sp, 10);
            CHECK(projected_distance(u, v, sp, 7) < tol);
        }
    }

    SUBCASE("conditioned creation-pair, real and imaginary weights") {
        SimSpace sp{1, 1, 16};
        // rule 6: real weight; rule 7: imaginary weight on a non-Hermitian monomial
        for (int rule : {6, 7}) {
            cplx v = rule == 6 ? cplx(0.09, 0) : cplx(0, 0.09);
            HSum vterm = sum1(v, "Y", ops({{0, true}, {0, true}}));
            HSum g = add(vterm, scale(adjoint(vterm), -1));
            auto out = apply_rule(rule, ExpNode::exp1(g), opts);
            REQUIRE(out.has_value());
            CHECK(!apply_rule(rule == 6 ? 7 : 6, ExpNode::exp1(g), opts).has_value());
            Mat u = eval_items(out->seq, sp, 12);
            Mat v2 = exp_gen(g, sp, 12);
            CHECK(projected_distance(u, v2, sp, 8) < tol);
        }
    }

    SUBCASE("conditioned Hermitian cross-mode monomial") {
        SimSpace sp{1, 2, 8};
        cplx v(0, 0.12);
        HSum w = sum1(1, "", ops({{0, true}, {0, false}, {1, true}, {1, false}}));
        HSum g = scale(mul(sum1(1, "X", {}), w), v * 2.0);  // x (x) (v W - conj(v) W)
        auto out = apply_rule(9, ExpNode::exp1(g), opts);
        REQUIRE(out.has_value());
        CHECK(!apply_rule(7, ExpNode::exp1(g), opts).has_value());
        Mat u = eval_items(out->seq, sp, 6);
        Mat v2 = exp_gen(g, sp, 6);
        CHECK(projected_distance(u, v2, sp, 5) < tol);
    }

    SUBCASE("conditioned monomial as commutator plus anticommutator") {
        SimSpace sp{1, 1, 14};
        double t = 0.2;
        HSum g = sum1(cplx(0, -2 * t), "Z", ops({{0, true}, {0, false}}));
        auto out = apply_rule(8, ExpNode::exp1(g), opts);
        REQUIRE(out.has_value());
        REQUIRE(out->seq.size() == 1);
        REQUIRE(out->seq[0].node.has_value());
        CHECK(out->seq[0].node->groups.size() == 2);
        CHECK(is_zero(add(out->seq[0].node->generator(), scale(g, -1)), 1e-10));
        Mat u = eval_items(out->seq, sp, 10);
        Mat v = exp_gen(g, sp, 10);
        CHECK(projected_distance(u, v, sp, 7) < tol);
    }

    SUBCASE("axis flip reduces a raising-lowering form to one axis pair") {
        SimSpace sp{1, 1, 14};
        cplx kc(0.1, 0.17);
        HSum g = normal_order(
            add(scale(sum1(kc, "X", ops({{0, true}, {0, true}})), cplx(0, 0.5)),
                add(scale(sum1(kc, "Y", ops({{0, true}, {0, true}})), cplx(-0.5, 0)),
                    add(scale(sum1(std::conj(kc), "X", ops({{0, false}, {0, false}})), cplx(0, 0.5)),
                        scale(sum1(std::conj(kc), "Y", ops({{0, false}, {0, false}})),
                              cplx(0.5, 0))))));
        auto out = apply_rule(10, ExpNode::exp1(g), opts);
        REQUIRE(out.has_value());
        Mat u = eval_items(out->seq, sp, 12);
        Mat v = exp_gen(g, sp, 12);
        CHECK(projected_distance(u, v, sp, 8) < tol);
    }

    SUBCASE("boson monomial promoted onto an ancilla block") {
        SimSpace sp{1, 1, 18};
        for (double theta : {0.2, -0.2}) {
            HSum g = sum1(cplx(0, -theta), "",
                          ops({{0, true}, {0, true}, {0, false}, {0, false}}));
            auto out = apply_rule(11, ExpNode::exp1(g), opts);
            REQUIRE(out.has_value());
            REQUIRE(out->seq.size() == 1);
            CHECK(out->seq[0].invert == (theta > 0));
            Mat u = eval_items(out->seq, sp, 10);
            SimSpace spm0{0, 1, sp.cutoff};
            Mat ub = qubit0_block(u);
            Mat v = exp_gen(g, spm0, 10);
            CHECK(projected_distance(ub, v, spm0, 9) < tol);
        }
    }

    SUBCASE("conditional-displacement chain synthesizes a modulated word") {
        SimSpace sp{2, 1, 12};
        cplx al(0.21, -0.13);
        HSum g = add(sum1(al, "XY", ops({{0, true}})),
                     sum1(-std::conj(al), "XY", ops({{0, false}})));
        auto out14 = apply_rule(14, ExpNode::exp1(g), opts);
        auto out15 = apply_rule(15, ExpNode::exp1(g), opts);
        REQUIRE(out14.has_value());
        REQUIRE(out15.has_value());
        for (auto& g14 : out14->seq[0].gates) CHECK(g14.kind != GateKind::PAULI);
        REQUIRE(out15->seq[0].gates.size() == 1);
        CHECK(out15->seq[0].gates[0].kind == GateKind::PAULI);
        Mat u14 = eval_items(out14->seq, sp, 14);
        Mat u15 = eval_items(out15->seq, sp, 14);
        Mat v = exp_gen(g, sp, 14);
        CHECK(projected_distance(u14, v, sp, 8) < tol);
        CHECK(projected_distance(u15, v, sp, 8) < tol);
    }

    SUBCASE("native match as a single-step rule") {
        auto out = apply_rule(16, ExpNode::exp1(sum1(cplx(0, -0.4), "", ops({{0, true}, {0, false}}))), opts);
        REQUIRE(out.has_value());
        CHECK(out->seq[0].gates[0].kind == GateKind::R);
    }
}

TEST_CASE("recursive decomposition dispatch") {
    RuleStats st;
    DecomposeOptions opts;
    opts.ancilla_qubit = 2;

    SUBCASE("native group becomes one gate") {
        auto r = decompose(ExpNode::exp1(sum1(cplx(0, -0.3), "", ops({{0, true}, {0, false}}))),
                           opts, st);
        REQUIRE(r.ok);
        REQUIRE(r.gates.size() == 1);
        CHECK(r.gates[0].kind == GateKind::R);
        CHECK(st.successes[16] == 1);
    }

    SUBCASE("pure word defers to a statement and pairs the synthesis rule") {
        auto r = decompose(ExpNode::exp1(sum1(cplx(0, -0.4), "XZX", {})), opts, st);
        REQUIRE(r.ok);
        REQUIRE(r.gates.size() == 1);
        CHECK(r.gates[0].kind == GateKind::PAULI);
        CHECK(r.gates[0].word == "XZX");
        CHECK(st.successes[15] == 1);
        CHECK(st.successes[14] == st.successes[15]);
    }

    SUBCASE("weight-one z modulation is native, other axes defer") {
        cplx al(0.2, 0.1);
        HSum z = add(sum1(al, "Z", ops({{0, true}})), sum1(-std::conj(al), "Z", ops({{0, false}})));
        HSum x = add(sum1(al, "X", ops({{0, true}})), sum1(-std::conj(al), "X", ops({{0, false}})));
        auto rz = decompose(ExpNode::exp1(z), opts, st);
        auto rx = decompose(ExpNode::exp1(x), opts, st);
        REQUIRE(rz.ok);
        REQUIRE(rx.ok);
        CHECK(rz.gates[0].kind == GateKind::CD);
        CHECK(rx.gates[0].kind == GateKind::PAULI);
    }

    SUBCASE("promotion is never attempted without an ancilla") {
        DecomposeOptions noanc = opts;
        noanc.ancilla_qubit = -1;
        auto r = decompose(
            ExpNode::exp1(sum1(cplx(0, -0.1), "", ops({{0, true}, {0, true}, {0, false}, {0, false}}))),
            noanc, st);
        CHECK(!r.ok);
        CHECK(st.successes[11] == 0);
        CHECK(st.attempts[11] == 1);
    }

    SUBCASE("boson commutator promotion stays unused by the dispatcher") {
        // a healthy mixed workload
        std::vector<ExpNode> nodes;
        nodes.push_back(ExpNode::exp1(sum1(cplx(0, -0.2), "ZZ", {})));
        nodes.push_back(ExpNode::exp1(
            sum1(cplx(0, -0.1), "", ops({{0, true}, {0, true}, {0, false}, {0, false}}))));
        cplx al(0.1, 0.05);
        nodes.push_back(ExpNode::exp1(
            add(sum1(al, "XX", ops({{0, true}})), sum1(-std::conj(al), "XX", ops({{0, false}})))));
        for (auto& n : nodes) CHECK(decompose(n, opts, st).ok);
        CHECK(st.attempts[3] == 0);
        CHECK(st.successes[14] == st.successes[15]);
    }
}

TEST_CASE("quartic chain reproduces the tuned defect window") {
    // Single product-formula slice of the quartic interaction at the step size
    // used by the k=8 factorization of t=0.05.
    RuleStats st;
    DecomposeOptions opts;
    opts.ancilla_qubit = 0;
    const double theta = 0.003125;
    HSum w = sum1(cplx(0, -theta), "", ops({{0, true}, {0, true}, {0, false}, {0, false}}));
    auto r = decompose(ExpNode::exp1(w), opts, st);
    REQUIRE(r.ok);
    // 4 outer segments x 2 inner pair groups x 4 inner segments x 2 each
    CHECK(count_kind(r.gates, GateKind::CD) == 64);
    CHECK(count_kind(r.gates, GateKind::PAULI) == 0);

    SimSpace full{1, 1, 32};
    Mat u = circuit_unitary(as_circuit(r.gates, 1, 1), full);
    Mat ub = qubit0_block(u);
    SimSpace m32{0, 1, 32}, m16{0, 1, 16};
    Mat target = operator_matrix(w, m16);
    Mat v = target.exp();
    double d = projected_distance(clip_matrix(ub, m32, m16), v, m16, 8);
    MESSAGE("single-slice quartic defect: ", d);
    CHECK(d > 0.010);
    CHECK(d < 0.032);
}

static double composite_defect(double t, int k, bool alternate) {
    RuleStats st;
    DecomposeOptions opts;
    opts.ancilla_qubit = 0;
    opts.quartic_reps = 4;
    opts.alternate_reps = alternate;
    opts.exptask_reps = 4;
    HSum quart = scale(sum1(1, "", ops({{0, true}, {0, true}, {0, false}, {0, false}})), 0.5);
    HSum harm = sum1(1, "", ops({{0, true}, {0, false}}));
    auto r = trotterize({quart, harm}, t, k, opts, st);
    REQUIRE(r.ok);
    SimSpace full{1, 1, 32};
    Mat u = circuit_unitary(as_circuit(r.gates, 1, 1), full);
    SimSpace m32{0, 1, 32}, m16{0, 1, 16};
    Mat v = operator_matrix(scale(add(quart, harm), cplx(0, -t)), m16).exp().eval();
    return projected_distance(clip_matrix(qubit0_block(u), m32, m16), v, m16, 8);
}

TEST_CASE("alternating repetitions cancel part of the chain defect") {
    double alternated = composite_defect(0.05, 8, true);
    double plain = composite_defect(0.05, 8, false);
    MESSAGE("composite defect alternated ", alternated, " plain ", plain);
    CHECK(alternated < plain);
    CHECK(alternated < 0.05);
}

TEST_CASE("product formula over the nonlinear-oscillator pair meets the budget") {
    RuleStats st;
    DecomposeOptions opts;
    opts.ancilla_qubit = 0;
    opts.quartic_reps = 4;
    opts.alternate_reps = true;
    opts.exptask_reps = 4;
    const double t = 0.05;
    const int k = 8;
    HSum quart = scale(sum1(1, "", ops({{0, true}, {0, true}, {0, false}, {0, false}})), 0.5);
    HSum harm = sum1(1, "", ops({{0, true}, {0, false}}));
    auto r = trotterize({quart, harm}, t, k, opts, st);
    REQUIRE(r.ok);
    MESSAGE("gate count ", r.gates.size());

    SimSpace full{1, 1, 32};
    Mat u = circuit_unitary(as_circuit(r.gates, 1, 1), full);
    SimSpace m32{0, 1, 32}, m16{0, 1, 16};
    HSum h = add(quart, harm);
    Mat v = operator_matrix(scale(h, cplx(0, -t)), m16).exp().eval();
    double d = projected_distance(clip_matrix(qubit0_block(u), m32, m16), v, m16, 8);
    MESSAGE("composite defect at t=0.05, k=8: ", d);
    CHECK(d < 0.05);
    // the chain bottoms out in displacements and phase rotations
    CHECK(count_kind(r.gates, GateKind::CD) > 0);
    CHECK(count_kind(r.gates, GateKind::R) > 0);
    CHECK(st.attempts[3] == 0);
}

TEST_CASE("splitting a noncommuting derived pair halves the defect with k") {
    // The two axis groups produced for a raising-pair exponential do not
    // commute; the first-order product formula over them (exact factors)
    // shows the expected 1/k defect scaling.
    const double c = std::sqrt(0.05 / 2) / 4;
    HSum k2 = sum1(1, "", ops({{0, true}, {0, true}}));
    HSum gy = scale(mul(sum1(1, "Y", {}), add(k2, scale(adjoint(k2), -1))), cplx(c, 0));
    HSum gx = scale(mul(sum1(1, "X", {}), add(k2, adjoint(k2))), cplx(0, c));
    SimSpace sp{1, 1, 16};
    SimSpace big{1, 1, 32};
    Mat target = clip_matrix(operator_matrix(add(gy, gx), big).exp().eval(), big, sp);
    auto run = [&](int k) {
        Mat fy = operator_matrix(scale(gy, cplx(1.0 / k, 0)), big).exp();
        Mat fx = operator_matrix(scale(gx, cplx(1.0 / k, 0)), big).exp();
        Mat slice = fx * fy;  // first group acts first
        Mat u = Mat::Identity(big.dim(), big.dim());
        for (int i = 0; i < k; ++i) u = (slice * u).eval();
        return projected_distance(clip_matrix(u, big, sp), target, sp, 8);
    };
    double d1 = run(1), d2 = run(2), d4 = run(4);
    MESSAGE("derived-pair split defects ", d1, " ", d2, " ", d4);
    CHECK(d1 / d2 > 1.6);
    CHECK(d1 / d2 < 2.4);
    CHECK(d2 / d4 > 1.6);
    CHECK(d2 / d4 < 2.4);
}

TEST_CASE("decomposition output is deterministic") {
    RuleStats s1, s2;
    DecomposeOptions opts;
    opts.ancilla_qubit = 0;
    HSum w = sum1(cplx(0, -0.05), "", ops({{0, true}, {0, true}, {0, false}, {0, false}}));
    auto a = decompose(ExpNode::exp1(w), opts, s1);
    auto b = decompose(ExpNode::exp1(w), opts, s2);
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    REQUIRE(a.gates.size() == b.gates.size());
    for (size_t i = 0; i < a.gates.size(); ++i) {
        CHECK(a.gates[i].kind == b.gates[i].kind);
        REQUIRE(a.gates[i].params.size() == b.gates[i].params.size());
        for (size_t j = 0; j < a.gates[i].params.size(); ++j)
            CHECK(std::abs(a.gates[i].params[j] - b.gates[i].params[j]) == 0.0);
    }
    CHECK(s1.attempts == s2.attempts);
}

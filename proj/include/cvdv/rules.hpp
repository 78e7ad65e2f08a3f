#pragma once
#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cvdv/expr.hpp"
#include "cvdv/ir.hpp"

namespace cvdv {

// ---------------------------------------------------------------------------
// Task tree
// ---------------------------------------------------------------------------
// A decomposition task asks for a circuit realizing either
//   Exp : exp(G) with G = sum of the (anti-Hermitian) groups, or
//   Comm: exp([A,B]) for the pair groups = {A, B}.
enum class NodeKind { Exp, Comm };

struct ExpNode {
    NodeKind kind = NodeKind::Exp;
    std::vector<HSum> groups;

    static ExpNode exp1(HSum g);
    static ExpNode comm(HSum a, HSum b);
    // Generator of the whole node: sum of groups (Exp) or commutator (Comm).
    HSum generator() const;
};

// ---------------------------------------------------------------------------
// Rule application (single step)
// ---------------------------------------------------------------------------
// One rewrite step: the target factors, in time order, into child tasks and/or
// literal gates. `invert` asks for the exact inverse of the child's circuit.
struct RuleOutcome {
    struct Item {
        std::optional<ExpNode> node;
        std::vector<Gate> gates;  // used when node is empty
        bool invert = false;
    };
    std::vector<Item> seq;
    bool exact = true;  // identity holds exactly (not just to leading order)
};

// Ancilla-assisted block encoding used when a boson monomial exponential is
// promoted onto a fresh qubit: exp(-i theta M N) appears as the qubit-|0>
// block of a group-commutator of two qubit/boson couplings.
struct BlockEncodingTemplate {
    HSum m, n;      // factor pair, M N Hermitian
    double t1 = 0;  // sqrt(theta/2)
    bool inverse = false;
    int ancilla = -1;
};

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------
constexpr int kNumRules = 16;

struct RuleStats {
    std::array<long, kNumRules + 1> attempts{}, successes{};
    // Shape-level dedup: structural signature of the node (indices relabelled,
    // coefficients dropped).
    std::array<std::set<std::string>, kNumRules + 1> shape_attempts, shape_successes;

    void record(int rule, const std::string& shape, bool success);
    void merge(const RuleStats& other);
};

// Structural signature used for the dedup above.
std::string canonical_shape(const ExpNode& node);

// ---------------------------------------------------------------------------
// Decomposition driver
// ---------------------------------------------------------------------------
// Sign/order variant selection for the group-commutator chains. The defaults
// were fixed by a numerical search over the defect of the quartic chain; the
// complement() set cancels the leading defect of the base set when the two are
// alternated across repetitions.
struct VariantBits {
    int gc2 = 3;  // group-commutator time-order variant, outer (quartic) level
    int gcy = 2;  // ... inner level, sigma_y-type pair
    int gcx = 2;  // ... inner level, sigma_x-type pair
    int r1o = 1;  // order of the two groups in the derived product split
    int dy = 1, dx = 0;  // mirror bits of the first degree-1 factor per pair
    int py = 1, px = 0;  // XOR applied to the mirror bit of the second factor
    VariantBits complement() const;
};

struct DecomposeOptions {
    int max_depth = 12;
    int quartic_reps = 1;        // product-formula repetitions of a promoted monomial
    bool alternate_reps = true;  // complement variant bits on odd repetitions
    int exptask_reps = 1;        // repetitions of the derived two-group split
    bool alternate_steps = false;  // complement variant bits on odd product-formula steps
    int ancilla_qubit = -1;      // qubit index promotions may use (-1: none available)
    VariantBits variants{};
    // Ablation switch: bit r enables rule r (bits 1..16). A disabled rule
    // behaves as if its pattern never matched.
    unsigned rule_mask = 0x1FFFE;
    bool rule_on(int r) const { return (rule_mask >> r) & 1u; }
};

struct Realization {
    bool ok = false;
    std::vector<Gate> gates;  // time order; may contain pauli statements
    std::string why;          // set when !ok
};

// Apply one named rule to a node (no recursion). Returns nothing when the
// rule's pattern does not match. `opts` supplies the ancilla index and variant
// bits where relevant. Rules 12-16 yield literal gates, the others children.
std::optional<RuleOutcome> apply_rule(int rule, const ExpNode& node, const DecomposeOptions& opts);

// Exact native-gate match for a single anti-Hermitian group (the rule-16
// pattern table, axis-dressed variants included).
std::optional<std::vector<Gate>> match_basis_gate(const HSum& group);

// Contiguous factorizations M*N of a ladder monomial, ordered by
// |deg M - deg N| ascending, shorter M first on ties.
std::vector<std::pair<std::vector<LadderOp>, std::vector<LadderOp>>> enumerate_splits(
    const std::vector<LadderOp>& ops);

// Group-commutator product formula for a Comm node: the four Exp factors in
// time order for the given variant (0..3), each marked invert as needed.
std::vector<RuleOutcome::Item> bch_expand(const ExpNode& comm, int variant);

// Full recursive decomposition of exp(generator(node)).
Realization decompose(const ExpNode& node, const DecomposeOptions& opts, RuleStats& stats);

// First-order product formula for exp(-i t H), H given as Hermitian groups:
// k repetitions of the per-group factors, each factor decomposed.
Realization trotterize(const std::vector<HSum>& hamiltonian, double t, int k,
                       const DecomposeOptions& opts, RuleStats& stats);

}  // namespace cvdv

#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cvdv/arch.hpp"
#include "cvdv/ir.hpp"

namespace cvdv {

// ---------------------------------------------------------------------------
// Options / results
// ---------------------------------------------------------------------------
enum class PauliRank { Active, Depth };
enum class TspMethod { Christofides, TA };

struct RouteOptions {
    PauliRank rank = PauliRank::Active;
    TspMethod tsp = TspMethod::Christofides;
    double floating_tau = -1.0;  // <0: clustering off
    std::uint64_t seed = 0;
};

struct Metrics {
    long one_op = 0;      // single-system gates
    long two_op = 0;      // two-system / hybrid gates (mode swaps included)
    long swap_count = 0;  // emitted mode swaps
    long pauli_stmts = 0; // statements elaborated
    long depth = 0;       // critical path, unit gate height
    long duration = 0;    // critical path, 1 per single-system op, 20 per two-system op
    std::string to_json() const;
};

struct RouteResult {
    Circuit physical;         // native gates only
    Metrics metrics;
    std::vector<int> mode_layout;   // logical qumode -> physical qumode at exit
    std::vector<int> qubit_layout;  // logical qubit -> physical qubit at exit
};

// ---------------------------------------------------------------------------
// Path-visit planning (stop ordering for statement elaboration)
// ---------------------------------------------------------------------------
double path_cost(const std::vector<std::vector<double>>& d, const std::vector<int>& order);
std::vector<int> brute_force_path(const std::vector<std::vector<double>>& d);
// MST + greedy matching + Euler shortcut, cycle opened at its heaviest edge.
std::vector<int> christofides_path(const std::vector<std::vector<double>>& d);
// Threshold-accepting refinement (2-opt + single-vertex relocation) seeded
// with the christofides_path tour.
std::vector<int> threshold_accepting(const std::vector<std::vector<double>>& d, std::uint64_t seed);

// A statement's elaboration plan: bus start site and the site visit order.
struct StatementPlan {
    std::vector<int> sites;  // distinct physical attachment sites, visit order
    double cost = 0;         // sum of consecutive shortest-path distances
};
// `sites`: distinct stop sites (qubit attachments). For modulated statements
// pass the bus qumode's current site as `fixed_start` (>=0); pure statements
// pick the start freely (the ancilla parks at the first visited site).
StatementPlan plan_statement(const std::vector<int>& sites, int fixed_start,
                             const CouplingMap& map, const RouteOptions& opts);

// Qubit-qubit SWAP between qubits q1, q2 seated at adjacent qumodes site1,
// site2: one conditional-displacement loop per Pauli axis, 12 CD + 12 SWAPM
// total, exact up to global phase. Used by the floating-qubit clustering pass.
std::vector<Gate> qubit_swap_macro(int site1, int q1, int site2, int q2);

// ---------------------------------------------------------------------------
// Scheduling
// ---------------------------------------------------------------------------
RouteResult schedule(const Circuit& logical, const CouplingMap& map, const RouteOptions& opts);

// Every gate native and executable in place: hybrid gates on the qubit's own
// qumode, two-mode gates on coupled pairs. Returns an error description for
// the first offender.
std::optional<std::string> check_legal(const Circuit& physical, const CouplingMap& map);

Metrics compute_metrics(const Circuit& physical);

}  // namespace cvdv

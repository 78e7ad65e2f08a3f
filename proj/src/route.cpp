#include "cvdv/route.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "cvdv/paulisynth.hpp"
#include "cvdv/util.hpp"

namespace cvdv {

std::string Metrics::to_json() const {
    std::ostringstream os;
    os << "{\"one_op\":" << one_op << ",\"two_op\":" << two_op << ",\"swap_count\":" << swap_count
       << ",\"pauli_stmts\":" << pauli_stmts << ",\"depth\":" << depth
       << ",\"duration\":" << duration << "}";
    return os.str();
}

namespace {

std::vector<int> word_support(const std::string& word) {
    std::vector<int> s;
    for (int i = 0; i < (int)word.size(); ++i)
        if (word[i] != 'I') s.push_back(i);
    return s;
}

// Per-wire ready times: weighted (1 per single-system op, 20 per multi-system
// op) and unweighted layer counts. SWAPM is charged as its expansion, one BS
// layer followed by one layer of parallel R gates.
struct WireClock {
    std::vector<long> qdur, mdur, qdep, mdep;

    void fit(int q, int m) {
        if (q >= (int)qdur.size()) {
            qdur.resize(q + 1, 0);
            qdep.resize(q + 1, 0);
        }
        if (m >= (int)mdur.size()) {
            mdur.resize(m + 1, 0);
            mdep.resize(m + 1, 0);
        }
    }

    void feed(const Gate& g) {
        std::vector<int> qs = g.kind == GateKind::PAULI ? word_support(g.word) : g.qubits;
        for (int q : qs) fit(q, -1);
        for (int m : g.qumodes) fit(-1, m);
        if (g.kind == GateKind::SWAPM) {
            int a = g.qumodes[0], b = g.qumodes[1];
            long s = std::max(mdur[a], mdur[b]);
            long l = std::max(mdep[a], mdep[b]);
            mdur[a] = mdur[b] = s + 21;
            mdep[a] = mdep[b] = l + 2;
            return;
        }
        long w = qs.size() + g.qumodes.size() >= 2 ? 20 : 1;
        long s = 0, l = 0;
        for (int q : qs) {
            s = std::max(s, qdur[q]);
            l = std::max(l, qdep[q]);
        }
        for (int m : g.qumodes) {
            s = std::max(s, mdur[m]);
            l = std::max(l, mdep[m]);
        }
        for (int q : qs) {
            qdur[q] = s + w;
            qdep[q] = l + 1;
        }
        for (int m : g.qumodes) {
            mdur[m] = s + w;
            mdep[m] = l + 1;
        }
    }

    long duration() const {
        long s = 0;
        for (long t : qdur) s = std::max(s, t);
        for (long t : mdur) s = std::max(s, t);
        return s;
    }
    long depth() const {
        long s = 0;
        for (long t : qdep) s = std::max(s, t);
        for (long t : mdep) s = std::max(s, t);
        return s;
    }
};

}  // namespace

Metrics compute_metrics(const Circuit& c) {
    Metrics mt;
    WireClock clk;
    for (auto& g : c.gates) {
        clk.feed(g);
        if (g.kind == GateKind::SWAPM) {
            ++mt.two_op;
            mt.one_op += 2;
            ++mt.swap_count;
        } else if (g.kind == GateKind::PAULI) {
            ++mt.pauli_stmts;
        } else if (system_count(g) >= 2) {
            ++mt.two_op;
        } else {
            ++mt.one_op;
        }
    }
    mt.depth = clk.depth();
    mt.duration = clk.duration();
    return mt;
}

// ---------------------------------------------------------------------------
// Path-visit planning
// ---------------------------------------------------------------------------

double path_cost(const std::vector<std::vector<double>>& d, const std::vector<int>& order) {
    double c = 0;
    for (size_t i = 0; i + 1 < order.size(); ++i) c += d[order[i]][order[i + 1]];
    return c;
}

std::vector<int> brute_force_path(const std::vector<std::vector<double>>& d) {
    const int n = (int)d.size();
    if (n == 0) return {};
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::vector<int> best = perm;
    double bc = path_cost(d, perm);
    while (std::next_permutation(perm.begin(), perm.end())) {
        double c = path_cost(d, perm);
        if (c < bc - 1e-12) {
            bc = c;
            best = perm;
        }
    }
    return best;
}

namespace {

// Euler circuit by edge list (all degrees even, connected); vertex sequence.
std::vector<int> euler_circuit(int n, const std::vector<std::pair<int, int>>& es) {
    std::vector<std::vector<int>> inc(n);
    for (int e = 0; e < (int)es.size(); ++e) {
        inc[es[e].first].push_back(e);
        inc[es[e].second].push_back(e);
    }
    std::vector<bool> used(es.size(), false);
    std::vector<size_t> ptr(n, 0);
    std::vector<int> stack{0}, walk;
    while (!stack.empty()) {
        int v = stack.back();
        while (ptr[v] < inc[v].size() && used[inc[v][ptr[v]]]) ++ptr[v];
        if (ptr[v] == inc[v].size()) {
            walk.push_back(v);
            stack.pop_back();
        } else {
            int e = inc[v][ptr[v]];
            used[e] = true;
            stack.push_back(es[e].first == v ? es[e].second : es[e].first);
        }
    }
    return walk;
}

}  // namespace

std::vector<int> christofides_path(const std::vector<std::vector<double>>& d) {
    const int n = (int)d.size();
    if (n == 0) return {};
    if (n == 1) return {0};
    if (n == 2) return {0, 1};

    // Minimum spanning tree (Prim, smallest-index tie break).
    std::vector<double> key(n, std::numeric_limits<double>::infinity());
    std::vector<int> parent(n, -1);
    std::vector<char> done(n, 0);
    key[0] = 0;
    for (int it = 0; it < n; ++it) {
        int u = -1;
        for (int v = 0; v < n; ++v)
            if (!done[v] && (u < 0 || key[v] < key[u])) u = v;
        done[u] = 1;
        for (int v = 0; v < n; ++v)
            if (!done[v] && d[u][v] < key[v]) {
                key[v] = d[u][v];
                parent[v] = u;
            }
    }
    std::vector<std::pair<int, int>> es;
    std::vector<int> deg(n, 0);
    for (int v = 1; v < n; ++v) {
        es.push_back({parent[v], v});
        ++deg[parent[v]];
        ++deg[v];
    }

    // Greedy min-weight matching over odd-degree vertices.
    std::vector<int> odd;
    for (int v = 0; v < n; ++v)
        if (deg[v] & 1) odd.push_back(v);
    std::vector<std::tuple<double, int, int>> pairs;
    for (size_t i = 0; i < odd.size(); ++i)
        for (size_t j = i + 1; j < odd.size(); ++j)
            pairs.emplace_back(d[odd[i]][odd[j]], odd[i], odd[j]);
    std::sort(pairs.begin(), pairs.end());
    std::vector<char> matched(n, 0);
    for (auto& [w, a, b] : pairs)
        if (!matched[a] && !matched[b]) {
            matched[a] = matched[b] = 1;
            es.push_back({a, b});
        }

    // Euler circuit, shortcut repeated vertices into a Hamiltonian cycle.
    auto walk = euler_circuit(n, es);
    std::vector<char> seen(n, 0);
    std::vector<int> cyc;
    for (int v : walk)
        if (!seen[v]) {
            seen[v] = 1;
            cyc.push_back(v);
        }
    // Open the cycle at its heaviest edge.
    int cut = 0;
    double worst = -1;
    for (int i = 0; i < n; ++i) {
        double w = d[cyc[i]][cyc[(i + 1) % n]];
        if (w > worst + 1e-12) {
            worst = w;
            cut = i;
        }
    }
    std::vector<int> path;
    for (int i = 1; i <= n; ++i) path.push_back(cyc[(cut + i) % n]);
    return path;
}

std::vector<int> threshold_accepting(const std::vector<std::vector<double>>& d,
                                     std::uint64_t seed) {
    const int n = (int)d.size();
    std::vector<int> cur = christofides_path(d);
    if (n <= 2) return cur;
    double cost = path_cost(d, cur);
    std::vector<int> best = cur;
    double best_cost = cost;
    std::mt19937_64 rng(seed);
    double thr = 0.2 * (cost > 0 ? cost : 1.0);
    const long iters = 200L * n;
    for (long it = 0; it < iters; ++it, thr *= 0.95) {
        std::vector<int> cand = cur;
        if (rng() % 2 == 0) {
            // 2-opt: reverse a segment
            int i = (int)(rng() % n), j = (int)(rng() % n);
            if (i > j) std::swap(i, j);
            if (i == j) continue;
            std::reverse(cand.begin() + i, cand.begin() + j + 1);
        } else {
            // or-opt: relocate a single vertex
            int i = (int)(rng() % n), j = (int)(rng() % n);
            if (i == j) continue;
            int v = cand[i];
            cand.erase(cand.begin() + i);
            cand.insert(cand.begin() + j, v);
        }
        double c = path_cost(d, cand);
        if (c < cost + thr) {
            cur = std::move(cand);
            cost = c;
            if (cost < best_cost - 1e-12) {
                best_cost = cost;
                best = cur;
            }
        }
    }
    return best;
}

StatementPlan plan_statement(const std::vector<int>& sites, int fixed_start,
                             const CouplingMap& map, const RouteOptions& opts) {
    if (sites.empty()) throw std::invalid_argument("plan_statement: empty site set");
    const int k = (int)sites.size();
    std::vector<std::vector<double>> d(k, std::vector<double>(k, 0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) d[i][j] = map.dist[sites[i]][sites[j]];
    std::vector<int> order;
    if (k == 1)
        order = {0};
    else
        order = opts.tsp == TspMethod::Christofides ? christofides_path(d)
                                                    : threshold_accepting(d, opts.seed);
    StatementPlan plan;
    for (int i : order) plan.sites.push_back(sites[i]);
    plan.cost = 0;
    for (int i = 0; i + 1 < k; ++i) plan.cost += map.dist[plan.sites[i]][plan.sites[i + 1]];
    if (fixed_start >= 0) {
        double head = map.dist[fixed_start][plan.sites.front()];
        double tail = map.dist[fixed_start][plan.sites.back()];
        if (tail < head) {
            std::reverse(plan.sites.begin(), plan.sites.end());
            std::swap(head, tail);
        }
        plan.cost += head;
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Legality
// ---------------------------------------------------------------------------

std::optional<std::string> check_legal(const Circuit& c, const CouplingMap& map) {
    for (size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        std::string tag = "gate #" + std::to_string(i) + " (" + kind_name(g.kind) + ")";
        for (int q : g.qubits)
            if (q < 0 || q >= map.n_qubits()) return tag + ": qubit " + std::to_string(q) + " off the device";
        for (int m : g.qumodes)
            if (m < 0 || m >= map.n_modes) return tag + ": qumode " + std::to_string(m) + " off the device";
        switch (g.kind) {
            case GateKind::RX:
            case GateKind::RY:
            case GateKind::RZ:
            case GateKind::R:
            case GateKind::D:
                break;
            case GateKind::CR:
            case GateKind::CP:
            case GateKind::CD:
            case GateKind::RB:
                if (map.attached_mode(g.qubits[0]) != g.qumodes[0])
                    return tag + ": hybrid gate off the qubit's attached qumode";
                break;
            case GateKind::BS:
            case GateKind::SWAPM:
                if (!map.has_edge(g.qumodes[0], g.qumodes[1]))
                    return tag + ": qumode pair not coupled";
                break;
            case GateKind::CBS: {
                int a = map.attached_mode(g.qubits[0]);
                if (!map.has_edge(g.qumodes[0], g.qumodes[1]))
                    return tag + ": qumode pair not coupled";
                if (a != g.qumodes[0] && a != g.qumodes[1])
                    return tag + ": control qubit not attached to either qumode";
                break;
            }
            case GateKind::PAULI:
                return tag + ": deferred rotation left in a physical circuit";
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Statement elaboration building blocks
// ---------------------------------------------------------------------------

namespace {

struct Stop {
    int site;    // physical qumode where the qubit attaches
    int qubit;   // physical qubit id
    char letter;
};

void append(std::vector<Gate>& out, std::vector<Gate> part) {
    for (auto& g : part) out.push_back(std::move(g));
}

// One conditioning bundle: the bus qumode walks the stop order, picks up a
// dressed CP at each attachment point, is displaced at the far end, unwinds
// along the reversed walk, and (odd stop count) absorbs one parity rotation.
// `home` >= 0 prepends/appends the leg from/to that qumode (the modulated
// form, where the bus is the data mode itself). The emitted SWAPM motion is
// palindromic, so the layout it leaves behind is the layout it entered with.
std::vector<Gate> cd_bundle(const CouplingMap& map, const std::vector<Stop>& stops, cplx alpha,
                            int home) {
    std::vector<Gate> out;
    const int n = (int)stops.size();
    if (n == 0) {
        out.push_back(gD(alpha, home));
        return out;
    }
    std::vector<std::vector<int>> legs;  // legs[i]: qumode path stop i -> stop i+1
    for (int i = 0; i + 1 < n; ++i) legs.push_back(map.shortest_path(stops[i].site, stops[i + 1].site));
    std::vector<int> entry;
    if (home >= 0) entry = map.shortest_path(home, stops[0].site);

    auto hops = [&out](const std::vector<int>& path, bool reversed) {
        if (!reversed) {
            for (size_t i = 0; i + 1 < path.size(); ++i) out.push_back(gSWAPM(path[i], path[i + 1]));
        } else {
            for (size_t i = path.size(); i >= 2; --i) out.push_back(gSWAPM(path[i - 1], path[i - 2]));
        }
    };

    hops(entry, false);
    for (int i = 0; i < n; ++i) {
        append(out, dressed_cp(stops[i].letter, stops[i].qubit, stops[i].site));
        if (i + 1 < n) hops(legs[i], false);
    }
    cplx mid = alpha;
    for (int i = 0; i < (n & 3); ++i) mid *= cplx(0, -1);
    out.push_back(gD(mid, stops[n - 1].site));
    for (int i = n - 1; i >= 0; --i) {
        append(out, dressed_cp(stops[i].letter, stops[i].qubit, stops[i].site));
        if (i > 0) hops(legs[i - 1], true);
    }
    if (n & 1) out.push_back(gR(-PI, stops[0].site));
    hops(entry, true);
    return out;
}

// Routed form of the bare-rotation loop exp(-i theta P): two conditioning
// bundles with opposite amplitudes separated by bare displacements.
std::vector<Gate> word_loop(const CouplingMap& map, const std::vector<Stop>& stops, double theta) {
    if (theta == 0) return {};
    if (theta < 0) return seq_adjoint(word_loop(map, stops, -theta));
    const double a = std::sqrt(theta / 2);
    const int s0 = stops.front().site;
    std::vector<Gate> out = cd_bundle(map, stops, cplx(a, 0), -1);
    out.push_back(gD(cplx(0, -a), s0));
    append(out, cd_bundle(map, stops, cplx(-a, 0), -1));
    out.push_back(gD(cplx(0, a), s0));
    return out;
}

}  // namespace

// exp(-i pi/4 (ZZ + XX + YY)) equals SWAP up to global phase; each axis is one
// conditional-displacement loop costing 4 CD + 4 SWAPM, and the bus qumode
// ends where it started.
std::vector<Gate> qubit_swap_macro(int site1, int q1, int site2, int q2) {
    std::vector<Gate> out;
    const double a = std::sqrt(PI / 8);
    for (char w : {'Z', 'X', 'Y'}) {
        std::vector<Gate> loop{gCD(cplx(a, 0), q1, site1),  gSWAPM(site1, site2),
                               gCD(cplx(0, a), q2, site2),  gSWAPM(site2, site1),
                               gCD(cplx(-a, 0), q1, site1), gSWAPM(site1, site2),
                               gCD(cplx(0, -a), q2, site2), gSWAPM(site2, site1)};
        append(out, synth_controlled_qumode_op(w, q1, synth_controlled_qumode_op(w, q2, loop)));
    }
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Frontier scheduler
// ---------------------------------------------------------------------------

struct Router {
    const Circuit& prog;
    const CouplingMap& map;
    const RouteOptions& opts;

    Circuit phys;
    std::vector<int> pi, pi_inv;  // logical qumode <-> physical qumode
    std::vector<int> pq, pq_inv;  // logical qubit <-> physical qubit
    WireClock clock;
    long stmt_count = 0;

    std::vector<std::vector<int>> succs;
    std::vector<int> indeg;
    std::set<int> frontier;
    int stuck = 0;

    Router(const Circuit& p, const CouplingMap& m, const RouteOptions& o)
        : prog(p), map(m), opts(o) {
        phys.nq = map.n_qubits();
        phys.nm = map.n_modes;
        pi.resize(map.n_modes);
        pi_inv.resize(map.n_modes);
        for (int i = 0; i < map.n_modes; ++i) pi[i] = pi_inv[i] = i;
        pq.resize(map.n_qubits());
        pq_inv.resize(map.n_qubits());
        for (int i = 0; i < map.n_qubits(); ++i) pq[i] = pq_inv[i] = i;
        build_deps();
    }

    static std::vector<int> gate_qubits(const Gate& g) {
        return g.kind == GateKind::PAULI ? word_support(g.word) : g.qubits;
    }

    void build_deps() {
        const int n = (int)prog.gates.size();
        succs.assign(n, {});
        indeg.assign(n, 0);
        std::vector<int> lastq(map.n_qubits(), -1), lastm(map.n_modes, -1);
        for (int i = 0; i < n; ++i) {
            std::set<int> preds;
            for (int q : gate_qubits(prog.gates[i])) {
                if (lastq[q] >= 0) preds.insert(lastq[q]);
                lastq[q] = i;
            }
            for (int m : prog.gates[i].qumodes) {
                if (lastm[m] >= 0) preds.insert(lastm[m]);
                lastm[m] = i;
            }
            indeg[i] = (int)preds.size();
            for (int p : preds) succs[p].push_back(i);
            if (indeg[i] == 0) frontier.insert(i);
        }
    }

    int seat(int logical_qubit) const { return map.attached_mode(pq[logical_qubit]); }

    // Emission never touches the layout: program-level SWAPM swaps wire
    // contents (a semantic gate), and bundle/macro motion is palindromic.
    void emit(Gate g) {
        clock.feed(g);
        phys.gates.push_back(std::move(g));
    }

    // Router-inserted swap: the layout itself changes.
    void layout_swap(int u, int v) {
        emit(gSWAPM(u, v));
        int a = pi_inv[u], b = pi_inv[v];
        std::swap(pi[a], pi[b]);
        std::swap(pi_inv[u], pi_inv[v]);
    }

    // Physical-position distance to executability, evaluated with physical
    // qumodes su and sv hypothetically swapped (su < 0: current layout).
    int blocked_distance(const Gate& g, int su, int sv) const {
        auto at = [&](int m) {
            int p = pi[m];
            if (p == su) return sv;
            if (p == sv) return su;
            return p;
        };
        switch (g.kind) {
            case GateKind::CR:
            case GateKind::CP:
            case GateKind::CD:
            case GateKind::RB:
                return map.dist[at(g.qumodes[0])][seat_raw(g.qubits[0])];
            case GateKind::BS:
            case GateKind::SWAPM:
                return map.dist[at(g.qumodes[0])][at(g.qumodes[1])] - 1;
            case GateKind::CBS: {
                int a = seat_raw(g.qubits[0]);
                return map.dist[at(g.qumodes[0])][a] + map.dist[at(g.qumodes[1])][a] - 1;
            }
            default:
                return 0;
        }
    }
    int seat_raw(int logical_qubit) const { return map.attached_mode(pq[logical_qubit]); }

    bool executable(const Gate& g) const {
        switch (g.kind) {
            case GateKind::CR:
            case GateKind::CP:
            case GateKind::CD:
            case GateKind::RB:
                return pi[g.qumodes[0]] == seat_raw(g.qubits[0]);
            case GateKind::BS:
            case GateKind::SWAPM:
                return map.has_edge(pi[g.qumodes[0]], pi[g.qumodes[1]]);
            case GateKind::CBS: {
                int a = seat_raw(g.qubits[0]);
                int p0 = pi[g.qumodes[0]], p1 = pi[g.qumodes[1]];
                return (p0 == a && map.has_edge(p1, a)) || (p1 == a && map.has_edge(p0, a));
            }
            case GateKind::PAULI:
                return true;
            default:
                return true;  // single-system gates
        }
    }

    void translate_native(const Gate& g) {
        Gate h = g;
        for (int& q : h.qubits) q = pq[q];
        for (int& m : h.qumodes) m = pi[m];
        emit(std::move(h));
    }

    void retire(int idx) {
        frontier.erase(idx);
        for (int s : succs[idx])
            if (--indeg[s] == 0) frontier.insert(s);
    }

    // --- Pauli statement handling -------------------------------------------

    int rank_pick(const std::vector<int>& ready) const {
        int best = ready.front();
        double best_key = std::numeric_limits<double>::infinity();
        for (int idx : ready) {
            const Gate& g = prog.gates[idx];
            auto sup = word_support(g.word);
            double key;
            if (opts.rank == PauliRank::Active) {
                key = (double)sup.size();
            } else {
                key = 0;
                for (int q : sup) {
                    int p = pq[q];
                    if (p < (int)clock.qdur.size()) key += (double)clock.qdur[p];
                }
                for (int m : g.qumodes) {
                    int p = pi[m];
                    if (p < (int)clock.mdur.size()) key += (double)clock.mdur[p];
                }
            }
            if (key < best_key - 1e-12) {
                best_key = key;
                best = idx;
            }
        }
        return best;
    }

    void float_cluster(const std::vector<int>& lqubits) {
        long guard = 2L * map.n_modes * (long)lqubits.size();
        while (guard-- > 0) {
            std::vector<int> sites;
            for (int q : lqubits) sites.push_back(seat(q));
            double pairs = 0, total = 0;
            for (size_t i = 0; i < sites.size(); ++i)
                for (size_t j = i + 1; j < sites.size(); ++j) {
                    total += map.dist[sites[i]][sites[j]];
                    ++pairs;
                }
            if (pairs == 0 || total / pairs <= opts.floating_tau) return;
            // Medoid attachment point (smallest total distance, then id).
            int med = sites[0];
            long med_sum = std::numeric_limits<long>::max();
            for (int cand : sites) {
                long s = 0;
                for (int t : sites) s += map.dist[cand][t];
                if (s < med_sum || (s == med_sum && cand < med)) {
                    med_sum = s;
                    med = cand;
                }
            }
            // Hop the farthest relocatable active qubit one step toward the
            // medoid; qubits already holding active seats stay put.
            std::vector<int> order(lqubits);
            std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
                return map.dist[seat(a)][med] > map.dist[seat(b)][med];
            });
            bool moved = false;
            for (int lq : order) {
                int s = seat(lq);
                if (map.dist[s][med] == 0) continue;
                auto path = map.shortest_path(s, med);
                int next = path[1];
                int occupant = pq_inv[map.attached_qubit(next)];
                if (std::find(lqubits.begin(), lqubits.end(), occupant) != lqubits.end()) continue;
                for (auto& g : qubit_swap_macro(s, pq[lq], next, pq[occupant])) emit(std::move(g));
                std::swap(pq[lq], pq[occupant]);
                pq_inv[pq[lq]] = lq;
                pq_inv[pq[occupant]] = occupant;
                moved = true;
                break;
            }
            if (!moved) return;
        }
    }

    void elaborate(const Gate& g) {
        ++stmt_count;
        std::vector<int> sup = word_support(g.word);
        const bool modulated = !g.qumodes.empty();
        if (sup.empty()) {
            if (modulated) emit(gD(g.params[0], pi[g.qumodes[0]]));
            return;  // bare scalar phase
        }
        if (opts.floating_tau > 0 && sup.size() >= 2) float_cluster(sup);
        std::vector<int> sites;
        for (int q : sup) sites.push_back(seat(q));
        StatementPlan plan =
            plan_statement(sites, modulated ? pi[g.qumodes[0]] : -1, map, opts);
        std::vector<Stop> stops;
        for (int s : plan.sites) {
            for (size_t i = 0; i < sites.size(); ++i)
                if (sites[i] == s) {
                    stops.push_back({s, pq[sup[i]], g.word[sup[i]]});
                    break;
                }
        }
        if (modulated) {
            for (auto& h : cd_bundle(map, stops, g.params[0], pi[g.qumodes[0]])) emit(std::move(h));
        } else {
            for (auto& h : word_loop(map, stops, g.params[0].real())) emit(std::move(h));
        }
    }

    // --- SWAP insertion -------------------------------------------------------

    void swap_round() {
        std::vector<int> blocked(frontier.begin(), frontier.end());
        // Lookahead layer: direct successors, at half weight.
        std::set<int> look;
        for (int idx : blocked)
            for (int s : succs[idx])
                if (prog.gates[s].kind != GateKind::PAULI) look.insert(s);

        std::set<int> touched;
        for (int idx : blocked) {
            const Gate& g = prog.gates[idx];
            for (int m : g.qumodes) touched.insert(pi[m]);
            for (int q : g.qubits) touched.insert(seat_raw(q));
        }
        struct Cand {
            double score;
            int u, v;
        };
        std::vector<Cand> cands;
        for (auto& [u, v] : map.edges) {
            if (!touched.count(u) && !touched.count(v)) continue;
            double front = 0;
            bool helps = false;
            for (int idx : blocked) {
                int before = blocked_distance(prog.gates[idx], -1, -1);
                int after = blocked_distance(prog.gates[idx], u, v);
                front += before - after;
                if (after < before) helps = true;
            }
            if (front < 0 || !helps) continue;
            double ahead = 0;
            for (int idx : look)
                ahead += blocked_distance(prog.gates[idx], -1, -1) -
                         blocked_distance(prog.gates[idx], u, v);
            cands.push_back({front + 0.5 * ahead, u, v});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.score != b.score) return a.score > b.score;
            return std::make_pair(a.u, a.v) < std::make_pair(b.u, b.v);
        });
        if (cands.empty() || stuck >= 3) {
            force_route(*frontier.begin());
            stuck = 0;
        } else {
            layout_swap(cands.front().u, cands.front().v);
            ++stuck;
        }
    }

    // Unconditional fallback: walk the oldest blocked gate's operands together
    // along shortest paths until it can fire.
    void force_route(int idx) {
        const Gate& g = prog.gates[idx];
        auto walk_swaps = [&](const std::vector<int>& path) {
            for (size_t i = 0; i + 1 < path.size(); ++i) layout_swap(path[i], path[i + 1]);
        };
        switch (g.kind) {
            case GateKind::CR:
            case GateKind::CP:
            case GateKind::CD:
            case GateKind::RB:
                walk_swaps(map.shortest_path(pi[g.qumodes[0]], seat_raw(g.qubits[0])));
                break;
            case GateKind::BS:
            case GateKind::SWAPM: {
                int m0 = g.qumodes[0], m1 = g.qumodes[1];
                while (map.dist[pi[m0]][pi[m1]] > 1) {
                    auto p = map.shortest_path(pi[m0], pi[m1]);
                    layout_swap(p[0], p[1]);
                }
                break;
            }
            case GateKind::CBS: {
                int a = seat_raw(g.qubits[0]);
                int ma = g.qumodes[0], mb = g.qumodes[1];
                if (map.dist[pi[mb]][a] < map.dist[pi[ma]][a]) std::swap(ma, mb);
                walk_swaps(map.shortest_path(pi[ma], a));
                while (map.dist[pi[mb]][a] > 1) {
                    auto p = map.shortest_path(pi[mb], a);
                    layout_swap(p[0], p[1]);
                }
                break;
            }
            default:
                break;
        }
    }

    void run() {
        while (!frontier.empty()) {
            bool progressed = true;
            while (progressed && !frontier.empty()) {
                progressed = false;
                std::vector<int> snap(frontier.begin(), frontier.end());
                for (int idx : snap) {
                    const Gate& g = prog.gates[idx];
                    if (g.kind == GateKind::PAULI) continue;
                    if (executable(g)) {
                        translate_native(g);
                        retire(idx);
                        progressed = true;
                        stuck = 0;
                    }
                }
                std::vector<int> ready;
                for (int idx : frontier)
                    if (prog.gates[idx].kind == GateKind::PAULI) ready.push_back(idx);
                if (!ready.empty()) {
                    int pick = rank_pick(ready);
                    elaborate(prog.gates[pick]);
                    retire(pick);
                    progressed = true;
                    stuck = 0;
                }
            }
            if (frontier.empty()) break;
            swap_round();
        }
    }
};

}  // namespace

RouteResult schedule(const Circuit& logical, const CouplingMap& map, const RouteOptions& opts) {
    int needq = logical.nq, needm = logical.nm;
    for (auto& g : logical.gates) {
        for (int q : g.qubits) needq = std::max(needq, q + 1);
        for (int m : g.qumodes) needm = std::max(needm, m + 1);
        if (g.kind == GateKind::PAULI) needq = std::max(needq, (int)g.word.size());
    }
    if (needq > map.n_qubits() || needm > map.n_modes)
        throw std::invalid_argument("program needs (" + std::to_string(needq) + " qubits, " +
                                    std::to_string(needm) + " qumodes) but the device has (" +
                                    std::to_string(map.n_qubits()) + ", " +
                                    std::to_string(map.n_modes) + ")");
    if (opts.floating_tau == 0)
        throw std::invalid_argument("floating threshold must be positive (negative disables)");

    Router r(logical, map, opts);
    r.run();

    RouteResult res;
    res.physical = std::move(r.phys);
    res.metrics = compute_metrics(res.physical);
    res.metrics.pauli_stmts = r.stmt_count;
    res.mode_layout.assign(r.pi.begin(), r.pi.begin() + needm);
    res.qubit_layout.assign(r.pq.begin(), r.pq.begin() + needq);
    return res;
}

}  // namespace cvdv

// cvdvc: command-line driver for the hybrid qubit/qumode compiler.
//
// Subcommands:
//   gen      write a spin model as a Pauli text file
//   compile  model or Pauli file -> gate decomposition -> mapped circuit
//   route    map an existing .cvdvqasm program onto a device layout
//   verify   numerically compare two circuits (or one against its mapped image)
//   hitrate  per-rule attempt/success table over the bundled models
//   bench    planner comparison table (christofides / ta / ta+floating)
//
// Exit codes: 0 success, 2 input/parse error, 3 decomposition failure,
// 4 mapping failure, 5 verification above tolerance. Usage errors follow
// CLI11's conventions (codes >= 100).
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvdv/arch.hpp"
#include "cvdv/ir.hpp"
#include "cvdv/models.hpp"
#include "cvdv/qasm.hpp"
#include "cvdv/route.hpp"
#include "cvdv/rules.hpp"
#include "cvdv/sim.hpp"
#include "cvdv/util.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitDecompose = 3;
constexpr int kExitRoute = 4;
constexpr int kExitVerify = 5;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --map accepts either "grid:RxC" or a coupling-map file path.
cvdv::CouplingMap parse_map(const std::string& s) {
    if (s.rfind("grid:", 0) == 0) {
        int r = 0, c = 0;
        char x = 0;
        if (std::sscanf(s.c_str() + 5, "%d%c%d", &r, &x, &c) != 3 || (x != 'x' && x != 'X') ||
            r < 1 || c < 1)
            throw cvdv::parse_error("bad grid spec '" + s + "' (expected grid:RxC)");
        return cvdv::grid_map(r, c);
    }
    return cvdv::read_coupling_file(s);
}

// Rule list: "all" or comma-separated ids/ranges, e.g. "1-13,16".
unsigned parse_rule_list(const std::string& s) {
    if (s == "all") return 0x1FFFE;
    unsigned mask = 0;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        int lo = 0, hi = 0;
        if (std::sscanf(item.c_str(), "%d-%d", &lo, &hi) == 2) {
        } else if (std::sscanf(item.c_str(), "%d", &lo) == 1) {
            hi = lo;
        } else {
            throw cvdv::parse_error("bad rule list item '" + item + "'");
        }
        if (lo < 1 || hi > cvdv::kNumRules || lo > hi)
            throw cvdv::parse_error("rule ids must lie in 1.." + std::to_string(cvdv::kNumRules));
        for (int r = lo; r <= hi; ++r) mask |= 1u << r;
    }
    if (!mask) throw cvdv::parse_error("empty rule list");
    return mask;
}

std::vector<int> parse_int_csv(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

cvdv::ModelParams parse_params(const std::vector<std::string>& kvs) {
    cvdv::ModelParams p;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw cvdv::parse_error("bad --param '" + kv + "' (expected name=value)");
        p.c[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    }
    return p;
}

// Options shared by every stage that maps circuits onto hardware.
struct RouteFlags {
    std::string map = "grid:2x3";
    std::string rank = "active";
    std::string tsp = "christofides";
    std::string floating = "off";
    unsigned long seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--map", map, "device layout: grid:RxC or a coupling-map file")
            ->capture_default_str();
        cmd->add_option("--pauli-rank", rank, "statement pick order")
            ->check(CLI::IsMember({"active", "depth"}))
            ->capture_default_str();
        cmd->add_option("--tsp", tsp, "visit-order planner")
            ->check(CLI::IsMember({"christofides", "ta"}))
            ->capture_default_str();
        cmd->add_option("--floating", floating,
                        "qubit clustering: off, or a mean-distance threshold")
            ->capture_default_str();
        cmd->add_option("--seed", seed, "planner seed")->capture_default_str();
    }

    cvdv::RouteOptions resolve() const {
        cvdv::RouteOptions o;
        o.rank = rank == "depth" ? cvdv::PauliRank::Depth : cvdv::PauliRank::Active;
        o.tsp = tsp == "ta" ? cvdv::TspMethod::TA : cvdv::TspMethod::Christofides;
        if (floating == "off") {
            o.floating_tau = -1;
        } else {
            try {
                o.floating_tau = std::stod(floating);
            } catch (const std::exception&) {
                throw cvdv::parse_error("bad --floating value '" + floating + "'");
            }
        }
        o.seed = seed;
        return o;
    }
};

// Options shared by every stage that lowers Hamiltonians to gates.
struct DecomposeFlags {
    int trotter = 4;
    double time = 1.0;
    int max_depth = 12;
    int quartic_reps = 1;
    bool no_alternate = false;
    std::string rules = "all";

    void attach(CLI::App* cmd) {
        cmd->add_option("--trotter", trotter, "product-formula steps")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--time", time, "evolution time")->capture_default_str();
        cmd->add_option("--max-depth", max_depth, "rewrite recursion limit")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--quartic-reps", quartic_reps,
                        "product-formula repetitions inside promoted monomials")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_flag("--no-alternate", no_alternate,
                      "disable sign-variant alternation across repetitions");
        cmd->add_option("--rules", rules, "enabled rewrite rules, e.g. 1-13,16")
            ->capture_default_str();
    }

    cvdv::DecomposeOptions resolve(int ancilla) const {
        cvdv::DecomposeOptions o;
        o.max_depth = max_depth;
        o.quartic_reps = quartic_reps;
        o.alternate_reps = !no_alternate;
        o.ancilla_qubit = ancilla;
        o.rule_mask = parse_rule_list(rules);
        return o;
    }
};

// The bundled models with the default sizes used throughout the test corpus.
const std::vector<std::pair<std::string, int>>& bundled_models() {
    static const std::vector<std::pair<std::string, int>> v = {
        {"kerr", 1},      {"z2higgs", 5}, {"bosehubbard", 4},
        {"hubbardholstein", 3}, {"evc", 3},     {"heisenberg", 4},
    };
    return v;
}

struct Pipeline {
    cvdv::Circuit logical;
    cvdv::RuleStats stats;
    long decompose_ms = 0;
};

// model/file -> gate sequence (deferred statements included).
Pipeline lower(const cvdv::Model& m, const DecomposeFlags& df) {
    Pipeline out;
    auto t0 = std::chrono::steady_clock::now();
    cvdv::DecomposeOptions dopts = df.resolve(m.nq);
    cvdv::Realization r = cvdv::trotterize(m.groups, df.time, df.trotter, dopts, out.stats);
    if (!r.ok) throw std::runtime_error("decomposition failed: " + r.why);
    out.logical.nq = m.nq;
    out.logical.nm = m.nm;
    for (auto& g : r.gates) out.logical.push(g);
    auto t1 = std::chrono::steady_clock::now();
    out.decompose_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return out;
}

void write_text(const std::string& path, const std::string& body) {
    if (path == "-") {
        std::fputs(body.c_str(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw cvdv::parse_error("cannot open '" + path + "' for writing");
    f << body;
}

// Flat key-value metrics report; `config_echo` lines ride along as comments.
std::string metrics_report(const cvdv::Metrics& m, const std::string& config_echo) {
    std::ostringstream os;
    std::istringstream cfg(config_echo);
    std::string line;
    while (std::getline(cfg, line))
        if (!line.empty()) os << "# " << line << "\n";
    os << "one_op = " << m.one_op << "\n";
    os << "two_op = " << m.two_op << "\n";
    os << "swap_count = " << m.swap_count << "\n";
    os << "pauli_stmts = " << m.pauli_stmts << "\n";
    os << "depth = " << m.depth << "\n";
    os << "duration = " << m.duration << "\n";
    return os.str();
}

// Emits circuit + metrics artifacts for compile/route. The wall-clock line is
// written only to stderr so identical seeds produce byte-identical artifacts.
void emit_artifacts(const cvdv::Circuit& physical, const cvdv::Metrics& metrics,
                    const std::string& config_echo, const std::vector<std::string>& emit,
                    const std::string& out_path, const std::string& metrics_path,
                    long compile_ms) {
    bool want_qasm = false, want_json = false;
    for (const auto& e : emit) {
        if (e == "cvdvqasm") want_qasm = true;
        else if (e == "metrics-json") want_json = true;
    }
    if (want_qasm) write_text(out_path, cvdv::emit_qasm(physical));
    std::string report = metrics_report(metrics, config_echo);
    if (!metrics_path.empty()) write_text(metrics_path, report);
    if (want_json) write_text("-", metrics.to_json() + "\n");
    std::fputs(report.c_str(), stderr);
    std::fprintf(stderr, "compile_ms = %ld\n", compile_ms);
}

int run_gen(const std::string& model, int size, const std::vector<std::string>& params,
            const std::string& out) {
    cvdv::Model m = cvdv::build_model(model, size, parse_params(params));
    std::ostringstream os;
    os << "# model: " << m.name << "  size: " << size << "\n";
    for (const auto& g : m.groups) {
        for (const auto& t : g) {
            if (!t.ops.empty())
                throw cvdv::parse_error("model '" + model +
                                        "' has qumode terms; the Pauli text format "
                                        "cannot express them");
            if (std::abs(t.coeff.imag()) > 1e-15)
                throw cvdv::parse_error("model '" + model + "' has complex coefficients");
            os << fmt17(t.coeff.real()) << " " << t.word << "\n";
        }
    }
    write_text(out, os.str());
    return 0;
}

struct CompileOutcome {
    cvdv::RouteResult routed;
    cvdv::RuleStats stats;
    long compile_ms = 0;
};

CompileOutcome compile_model(const cvdv::Model& m, const DecomposeFlags& df,
                             const cvdv::CouplingMap& map, const cvdv::RouteOptions& ropts) {
    CompileOutcome out;
    Pipeline p = lower(m, df);
    out.stats = p.stats;
    auto t0 = std::chrono::steady_clock::now();
    out.routed = cvdv::schedule(p.logical, map, ropts);
    auto t1 = std::chrono::steady_clock::now();
    out.compile_ms =
        p.decompose_ms + std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return out;
}

// hitrate: success shares for rules 1..15 normalized among themselves; the
// basis-gate matcher (16) is reported as its share of all successes.
std::string hitrate_table(const cvdv::RuleStats& st) {
    long total15 = 0, total = 0;
    for (int r = 1; r <= cvdv::kNumRules; ++r) {
        total += st.successes[r];
        if (r < cvdv::kNumRules) total15 += st.successes[r];
    }
    std::ostringstream os;
    os << "rule  attempts  successes  success%   share%\n";
    char buf[128];
    for (int r = 1; r <= cvdv::kNumRules; ++r) {
        double succ_pct =
            st.attempts[r] ? 100.0 * st.successes[r] / st.attempts[r] : 0.0;
        long denom = r < cvdv::kNumRules ? total15 : total;
        double share = denom ? 100.0 * st.successes[r] / denom : 0.0;
        std::snprintf(buf, sizeof buf, "%4d  %8ld  %9ld  %8.2f  %7.2f%s\n", r, st.attempts[r],
                      st.successes[r], succ_pct, share,
                      r == cvdv::kNumRules ? "  (share of all successes)" : "");
        os << buf;
    }
    return os.str();
}

struct BenchRow {
    std::string name;
    cvdv::Metrics base, ta, fl;
};

std::string bench_table(std::vector<BenchRow> rows) {
    std::sort(rows.begin(), rows.end(),
              [](const BenchRow& a, const BenchRow& b) { return a.name < b.name; });
    std::ostringstream os;
    os << "benchmark             metric    christofides  ta                    ta+floating\n";
    char buf[256];
    for (const auto& r : rows) {
        auto line = [&](const char* metric, long b, long t, long f) {
            double dt = b ? 100.0 * (b - t) / b : 0.0;  // positive: better than baseline
            double dfl = b ? 100.0 * (b - f) / b : 0.0;
            char tb[64], fb[64];
            std::snprintf(tb, sizeof tb, "%ld (%+.2f%%)", t, dt);
            std::snprintf(fb, sizeof fb, "%ld (%+.2f%%)", f, dfl);
            std::snprintf(buf, sizeof buf, "%-20s  %-8s  %-12ld  %-20s  %-20s\n",
                          r.name.c_str(), metric, b, tb, fb);
            os << buf;
        };
        line("one_op", r.base.one_op, r.ta.one_op, r.fl.one_op);
        line("two_op", r.base.two_op, r.ta.two_op, r.fl.two_op);
        line("duration", r.base.duration, r.ta.duration, r.fl.duration);
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compiler driver for hybrid qubit/qumode programs"};
    app.require_subcommand(1);
    app.fallthrough(true);
    app.set_config("--config", "",
                   "key = value defaults, grouped in a [subcommand] section");

    // ---- gen ----------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "write a spin model as a Pauli text file");
    std::string gen_model;
    int gen_size = 4;
    std::vector<std::string> gen_params;
    std::string gen_out = "-";
    gen->add_option("model", gen_model, "model name")->required();
    gen->add_option("--size", gen_size, "chain length")->capture_default_str();
    gen->add_option("--param", gen_params, "coupling override name=value");
    gen->add_option("-o,--output", gen_out, "output path ('-' = stdout)")->capture_default_str();
    gen->configurable(true);

    // ---- compile ------------------------------------------------------------
    auto* compile = app.add_subcommand(
        "compile", "model or Pauli file -> gate decomposition -> mapped circuit");
    std::string c_input, c_model, c_out = "-", c_metrics;
    int c_size = 4;
    std::vector<std::string> c_params;
    std::vector<std::string> c_emit = {"cvdvqasm"};
    DecomposeFlags c_df;
    RouteFlags c_rf;
    compile->add_option("input", c_input, "Pauli text file (omit when using --model)");
    compile->add_option("--model", c_model, "bundled model name");
    compile->add_option("--size", c_size, "chain length for --model")->capture_default_str();
    compile->add_option("--param", c_params, "coupling override name=value");
    compile->add_option("-o,--output", c_out, "circuit output path ('-' = stdout)")
        ->capture_default_str();
    compile->add_option("--metrics", c_metrics, "write the key-value metrics report here");
    compile->add_option("--emit", c_emit, "artifacts to produce")
        ->check(CLI::IsMember({"cvdvqasm", "metrics-json"}))
        ->capture_default_str();
    c_df.attach(compile);
    c_rf.attach(compile);
    compile->configurable(true);

    // ---- route ----------------------------------------------------------------
    auto* route = app.add_subcommand("route", "map a .cvdvqasm program onto a device layout");
    std::string r_input, r_out = "-", r_metrics;
    std::vector<std::string> r_emit = {"cvdvqasm"};
    RouteFlags r_rf;
    route->add_option("input", r_input, ".cvdvqasm file")->required();
    route->add_option("-o,--output", r_out, "circuit output path ('-' = stdout)")
        ->capture_default_str();
    route->add_option("--metrics", r_metrics, "write the key-value metrics report here");
    route->add_option("--emit", r_emit, "artifacts to produce")
        ->check(CLI::IsMember({"cvdvqasm", "metrics-json"}))
        ->capture_default_str();
    r_rf.attach(route);
    route->configurable(true);

    // ---- verify ---------------------------------------------------------------
    auto* verify = app.add_subcommand(
        "verify", "numerically compare two circuits (or one against its mapped image)");
    std::string v_a, v_b, v_qlay, v_mlay;
    int v_cutoff = 6, v_pad = 3, v_keep = -1;
    double v_tol = 1e-6;
    RouteFlags v_rf;
    verify->add_option("first", v_a, "reference circuit")->required();
    verify->add_option("second", v_b, "candidate circuit (omit to map the reference)");
    verify->add_option("--cutoff", v_cutoff, "qumode levels")->capture_default_str();
    verify->add_option("--pad", v_pad, "extra evaluation levels")->capture_default_str();
    verify->add_option("--keep", v_keep, "projector levels (default cutoff-2)");
    verify->add_option("--tol", v_tol, "pass threshold")->capture_default_str();
    verify->add_option("--qubit-layout", v_qlay, "final qubit wire positions, csv");
    verify->add_option("--mode-layout", v_mlay, "final qumode wire positions, csv");
    v_rf.attach(verify);
    verify->configurable(true);

    // ---- hitrate ----------------------------------------------------------------
    auto* hitrate =
        app.add_subcommand("hitrate", "per-rule attempt/success table over the bundled models");
    std::vector<std::string> h_models;
    DecomposeFlags h_df;
    h_df.trotter = 1;
    hitrate->add_option("models", h_models, "model names (default: all bundled)");
    h_df.attach(hitrate);
    hitrate->configurable(true);

    // ---- bench ----------------------------------------------------------------
    auto* bench = app.add_subcommand(
        "bench", "planner comparison table (christofides / ta / ta+floating)");
    std::vector<std::string> b_hams;
    double b_tau = 6.0;
    DecomposeFlags b_df;
    RouteFlags b_rf;
    bench->add_option("--ham", b_hams, "Pauli text files to benchmark (default: bundled models)");
    bench->add_option("--tau", b_tau, "clustering threshold for the floating column")
        ->capture_default_str();
    b_df.attach(bench);
    b_rf.attach(bench);
    bench->configurable(true);

    CLI11_PARSE(app, argc, argv);

    try {
        // ---- gen ----
        if (*gen) return run_gen(gen_model, gen_size, gen_params, gen_out);

        // ---- compile ----
        if (*compile) {
            if (c_input.empty() == c_model.empty()) {
                std::fprintf(stderr, "compile: give exactly one of an input file or --model\n");
                return kExitParse;
            }
            cvdv::Model m;
            cvdv::CouplingMap map;
            try {
                m = c_model.empty() ? cvdv::load_pauli_file(c_input)
                                    : cvdv::build_model(c_model, c_size, parse_params(c_params));
                map = parse_map(c_rf.map);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "compile: %s\n", e.what());
                return kExitParse;
            }
            CompileOutcome out;
            try {
                Pipeline p = lower(m, c_df);
                auto t0 = std::chrono::steady_clock::now();
                out.routed = cvdv::schedule(p.logical, map, c_rf.resolve());
                auto t1 = std::chrono::steady_clock::now();
                out.compile_ms = p.decompose_ms +
                                 std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                                     .count();
            } catch (const std::runtime_error& e) {
                std::fprintf(stderr, "compile: %s\n", e.what());
                return kExitDecompose;
            } catch (const std::exception& e) {
                std::fprintf(stderr, "compile: %s\n", e.what());
                return kExitRoute;
            }
            emit_artifacts(out.routed.physical, out.routed.metrics,
                           compile->config_to_str(true, false), c_emit, c_out, c_metrics,
                           out.compile_ms);
            return 0;
        }

        // ---- route ----
        if (*route) {
            cvdv::Circuit c;
            cvdv::CouplingMap map;
            try {
                c = cvdv::read_qasm_file(r_input);
                map = parse_map(r_rf.map);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "route: %s\n", e.what());
                return kExitParse;
            }
            cvdv::RouteResult rr;
            long ms = 0;
            try {
                auto t0 = std::chrono::steady_clock::now();
                rr = cvdv::schedule(c, map, r_rf.resolve());
                auto t1 = std::chrono::steady_clock::now();
                ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
            } catch (const std::exception& e) {
                std::fprintf(stderr, "route: %s\n", e.what());
                return kExitRoute;
            }
            emit_artifacts(rr.physical, rr.metrics, route->config_to_str(true, false), r_emit,
                           r_out, r_metrics, ms);
            return 0;
        }

        // ---- verify ----
        if (*verify) {
            cvdv::Circuit a, b;
            std::vector<int> qlay, mlay;
            cvdv::SimSpace sp{0, 0, v_cutoff};
            try {
                a = cvdv::read_qasm_file(v_a);
                if (!v_b.empty()) {
                    b = cvdv::read_qasm_file(v_b);
                    sp.nq = std::max(a.nq, b.nq);
                    sp.nm = std::max(a.nm, b.nm);
                } else {
                    cvdv::CouplingMap map = parse_map(v_rf.map);
                    cvdv::RouteResult rr = cvdv::schedule(a, map, v_rf.resolve());
                    if ((int)rr.qubit_layout.size() != map.n_qubits() ||
                        (int)rr.mode_layout.size() != map.n_modes)
                        throw cvdv::parse_error(
                            "verify: the program must span the whole map (wire positions of "
                            "unused device sites are not reported); use a map matching the "
                            "program registers");
                    b = rr.physical;
                    qlay = rr.qubit_layout;
                    mlay = rr.mode_layout;
                    sp.nq = map.n_qubits();
                    sp.nm = map.n_modes;
                }
                if (!v_qlay.empty()) qlay = parse_int_csv(v_qlay);
                if (!v_mlay.empty()) mlay = parse_int_csv(v_mlay);
                if (qlay.empty())
                    for (int i = 0; i < sp.nq; ++i) qlay.push_back(i);
                if (mlay.empty())
                    for (int i = 0; i < sp.nm; ++i) mlay.push_back(i);
                if (v_keep < 0) v_keep = std::max(1, v_cutoff - 2);
                if (sp.dim() > 20000)
                    throw cvdv::parse_error("verify: state space too large (" +
                                            std::to_string(sp.dim()) + " states)");
            } catch (const std::exception& e) {
                std::fprintf(stderr, "verify: %s\n", e.what());
                return kExitParse;
            }
            cvdv::Mat ua = cvdv::circuit_unitary_padded(a, sp, v_pad);
            cvdv::Mat ub = cvdv::circuit_unitary_padded(b, sp, v_pad);
            cvdv::Mat perm = cvdv::layout_permutation(qlay, mlay, sp);
            double defect = cvdv::projected_distance(ub, perm * ua, sp, v_keep);
            std::printf("defect = %.6e\n", defect);
            std::printf("%s\n", defect <= v_tol ? "pass" : "fail");
            return defect <= v_tol ? 0 : kExitVerify;
        }

        // ---- hitrate ----
        if (*hitrate) {
            std::vector<std::pair<std::string, int>> jobs;
            if (h_models.empty()) {
                jobs = bundled_models();
            } else {
                for (const auto& name : h_models) {
                    int size = 4;
                    for (const auto& [n, s] : bundled_models())
                        if (n == name) size = s;
                    jobs.push_back({name, size});
                }
            }
            cvdv::RuleStats total;
            for (const auto& [name, size] : jobs) {
                cvdv::Model m;
                try {
                    m = cvdv::build_model(name, size, {});
                } catch (const std::exception& e) {
                    std::fprintf(stderr, "hitrate: %s\n", e.what());
                    return kExitParse;
                }
                Pipeline p;
                try {
                    p = lower(m, h_df);
                } catch (const std::exception& e) {
                    std::fprintf(stderr, "hitrate: %s\n", e.what());
                    return kExitDecompose;
                }
                total.merge(p.stats);
            }
            std::fputs(hitrate_table(total).c_str(), stdout);
            return 0;
        }

        // ---- bench ----
        if (*bench) {
            struct Job {
                std::string name;
                cvdv::Model model;
            };
            std::vector<Job> jobs;
            try {
                if (b_hams.empty()) {
                    for (const auto& [name, size] : bundled_models())
                        jobs.push_back(
                            {name + "(" + std::to_string(size) + ")",
                             cvdv::build_model(name, size, {})});
                } else {
                    for (const auto& path : b_hams)
                        jobs.push_back({path, cvdv::load_pauli_file(path)});
                }
            } catch (const std::exception& e) {
                std::fprintf(stderr, "bench: %s\n", e.what());
                return kExitParse;
            }
            cvdv::CouplingMap map;
            try {
                map = parse_map(b_rf.map);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "bench: %s\n", e.what());
                return kExitParse;
            }
            // One worker per benchmark; merged by name afterwards.
            std::vector<std::future<BenchRow>> futs;
            for (const auto& job : jobs)
                futs.push_back(std::async(std::launch::async, [&, job]() {
                    RouteFlags base = b_rf;
                    base.tsp = "christofides";
                    base.floating = "off";
                    RouteFlags ta = base;
                    ta.tsp = "ta";
                    RouteFlags fl = ta;
                    fl.floating = fmt17(b_tau);
                    BenchRow row;
                    row.name = job.name;
                    row.base = compile_model(job.model, b_df, map, base.resolve()).routed.metrics;
                    row.ta = compile_model(job.model, b_df, map, ta.resolve()).routed.metrics;
                    row.fl = compile_model(job.model, b_df, map, fl.resolve()).routed.metrics;
                    return row;
                }));
            std::vector<BenchRow> rows;
            try {
                for (auto& f : futs) rows.push_back(f.get());
            } catch (const std::runtime_error& e) {
                std::fprintf(stderr, "bench: %s\n", e.what());
                return kExitDecompose;
            } catch (const std::exception& e) {
                std::fprintf(stderr, "bench: %s\n", e.what());
                return kExitRoute;
            }
            std::fputs(bench_table(std::move(rows)).c_str(), stdout);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cvdvc: %s\n", e.what());
        return kExitParse;
    }
    return 0;
}

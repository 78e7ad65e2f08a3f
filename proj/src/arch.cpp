#include "cvdv/arch.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "cvdv/util.hpp"

namespace cvdv {

void CouplingMap::finalize() {
    if (n_modes <= 0) throw parse_error("coupling map needs at least one qumode");
    adj.assign(n_modes, {});
    for (auto& [i, j] : edges) {
        if (i == j || i < 0 || j < 0 || i >= n_modes || j >= n_modes)
            throw parse_error("edge endpoint out of range");
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto& [i, j] : edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    if ((int)attach.size() != n_modes)
        throw parse_error("attachment must pair every qumode with exactly one qubit");
    attach_inv.assign(n_modes, -1);
    for (int q = 0; q < n_modes; ++q) {
        int m = attach[q];
        if (m < 0 || m >= n_modes || attach_inv[m] != -1)
            throw parse_error("attachment is not a bijection");
        attach_inv[m] = q;
    }
    // BFS all-pairs.
    dist.assign(n_modes, std::vector<int>(n_modes, -1));
    pred.assign(n_modes, std::vector<int>(n_modes, -1));
    for (int s = 0; s < n_modes; ++s) {
        std::deque<int> q{s};
        dist[s][s] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop_front();
            for (int v : adj[u])
                if (dist[s][v] < 0) {
                    dist[s][v] = dist[s][u] + 1;
                    pred[s][v] = u;
                    q.push_back(v);
                }
        }
        for (int v = 0; v < n_modes; ++v)
            if (dist[s][v] < 0) throw parse_error("coupling map is not connected");
    }
}

bool CouplingMap::has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::vector<int> CouplingMap::shortest_path(int u, int v) const {
    std::vector<int> path{v};
    while (v != u) {
        v = pred[u][v];
        path.push_back(v);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

CouplingMap grid_map(int rows, int cols) {
    if (rows <= 0 || cols <= 0) throw parse_error("grid dimensions must be positive");
    CouplingMap m;
    m.n_modes = rows * cols;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int i = r * cols + c;
            if (c + 1 < cols) m.edges.push_back({i, i + 1});
            if (r + 1 < rows) m.edges.push_back({i, i + cols});
        }
    m.attach.resize(m.n_modes);
    for (int i = 0; i < m.n_modes; ++i) m.attach[i] = i;
    m.finalize();
    return m;
}

CouplingMap parse_coupling(const std::string& text) {
    CouplingMap m;
    std::istringstream in(text);
    std::string line;
    std::vector<std::pair<int, int>> attach_pairs;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto cut = line.find("//");
        if (cut != std::string::npos) line.erase(cut);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        auto bad = [&](const std::string& why) {
            throw parse_error("coupling map line " + std::to_string(lineno) + ": " + why);
        };
        if (kw == "qumodes") {
            if (!(ls >> m.n_modes)) bad("expected qumode count");
        } else if (kw == "edge") {
            int i, j;
            if (!(ls >> i >> j)) bad("expected two qumode indices");
            m.edges.push_back({i, j});
        } else if (kw == "attach") {
            int q, k;
            if (!(ls >> q >> k)) bad("expected qubit and qumode index");
            attach_pairs.push_back({q, k});
        } else {
            bad("unknown directive '" + kw + "'");
        }
        std::string extra;
        if (ls >> extra) bad("trailing tokens");
    }
    m.attach.assign(m.n_modes, -1);
    for (auto [q, k] : attach_pairs) {
        if (q < 0 || q >= m.n_modes) throw parse_error("attach qubit index out of range");
        m.attach[q] = k;
    }
    m.finalize();
    return m;
}

std::string emit_coupling(const CouplingMap& m) {
    std::ostringstream os;
    os << "qumodes " << m.n_modes << "\n";
    for (auto& [i, j] : m.edges) os << "edge " << i << ' ' << j << "\n";
    for (int q = 0; q < m.n_qubits(); ++q) os << "attach " << q << ' ' << m.attach[q] << "\n";
    return os.str();
}

CouplingMap read_coupling_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_coupling(ss.str());
}

}  // namespace cvdv

#pragma once
#include <string>
#include <utility>
#include <vector>

namespace cvdv {

// Hardware layout: a connected graph of qumodes, plus one qubit attached to
// each qumode (attach is a bijection; there are no qubit-qubit couplings).
//
// Text format (one directive per line, `//` comments allowed):
//   qumodes <N>
//   edge <i> <j>
//   attach <qubit> <qumode>
struct CouplingMap {
    int n_modes = 0;
    std::vector<std::pair<int, int>> edges;  // undirected, stored with first < second
    std::vector<int> attach;                 // qubit q sits at qumode attach[q]

    // Derived (filled by finalize()).
    std::vector<std::vector<int>> adj;
    std::vector<std::vector<int>> dist;  // all-pairs hop distances (BFS)
    std::vector<std::vector<int>> pred;  // pred[s][v]: previous hop on a shortest s->v path
    std::vector<int> attach_inv;         // qumode m -> its attached qubit

    void finalize();  // validates and builds derived tables; throws parse_error
    int n_qubits() const { return (int)attach.size(); }
    int attached_mode(int q) const { return attach[q]; }
    int attached_qubit(int m) const { return attach_inv[m]; }
    bool has_edge(int i, int j) const;
    // Qumode sequence from u to v inclusive along one shortest path.
    std::vector<int> shortest_path(int u, int v) const;
};

// Rectangular 4-neighbour grid; qumode index = row*cols + col; qubit i
// attached to qumode i.
CouplingMap grid_map(int rows, int cols);

CouplingMap parse_coupling(const std::string& text);
std::string emit_coupling(const CouplingMap& m);
CouplingMap read_coupling_file(const std::string& path);

}  // namespace cvdv

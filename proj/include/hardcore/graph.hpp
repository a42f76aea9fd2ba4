#pragma once
// Finite loopless undirected graphs with a stable vertex order, vertex
// activities, exact enumeration of weighted independent sets, and the
// structural transformations used by the counting reductions.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hardcore {

// Strictly positive per-vertex activities, indexed like the graph.
struct ActivityMap {
    std::vector<double> values;

    static ActivityMap uniform(std::size_t n, double lambda);

    double lambda_plus() const;  // max activity
    double lambda_minus() const; // min activity
    double at(int v) const { return values[static_cast<std::size_t>(v)]; }
    std::size_t size() const { return values.size(); }
};

// Simple graph; adjacency lists are kept sorted ascending, which fixes the
// canonical neighbor order everything downstream relies on. Loops and
// parallel edges are rejected at insertion.
class FiniteGraph {
public:
    FiniteGraph() = default;
    explicit FiniteGraph(std::size_t n);
    FiniteGraph(std::size_t n, std::vector<std::string> labels);

    void add_edge(int u, int v);

    std::size_t vertex_count() const { return adj_.size(); }
    std::size_t edge_count() const;
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
    int max_degree() const;
    bool has_edge(int u, int v) const;

    const std::string& label(int v) const { return labels_[static_cast<std::size_t>(v)]; }
    const std::vector<std::string>& labels() const { return labels_; }
    int index_of_label(const std::string& label) const; // -1 if absent

    // All edges as (min, max) pairs in lexicographic order.
    std::vector<std::pair<int, int>> edge_list() const;

private:
    std::vector<std::vector<int>> adj_;
    std::vector<std::string> labels_;
};

// True iff the 0/1 assignment picks no two adjacent vertices.
bool is_independent(const FiniteGraph& g, const std::vector<std::uint8_t>& occupied);

// Exact weighted count of independent sets by backtracking over vertices in
// index order, pruning any branch that occupies a neighbor of an occupied
// vertex. The cap guards against accidental exponential runs; tests that
// need larger instances raise it deliberately.
double brute_force_partition(const FiniteGraph& g, const ActivityMap& lambda,
                             std::size_t enumeration_cap = 30);

// Same count restricted to the subgraph induced by keep[v] != 0.
double brute_force_partition_masked(const FiniteGraph& g, const ActivityMap& lambda,
                                    const std::vector<std::uint8_t>& keep,
                                    std::size_t enumeration_cap = 30);

// Subgraph induced by keep[v] != 0, plus the old->new index map (-1 dropped).
std::pair<FiniteGraph, std::vector<int>>
induced_subgraph(const FiniteGraph& g, const std::vector<std::uint8_t>& keep);

// Replaces vertex v by a clique of copies[v] >= 1 vertices, each wired to
// every copy of each original neighbor, with activity lambda_v / copies[v].
// A clique admits the empty set or a single occupied copy, so per original
// vertex the local factor stays 1 + lambda_v and the weighted
// independent-set count is preserved exactly.
std::pair<FiniteGraph, ActivityMap> blow_up(const FiniteGraph& g, const ActivityMap& lambda,
                                            const std::vector<int>& copies);

// Line graph: one vertex per edge of g (in edge_list order), adjacent when
// the edges share an endpoint. Labels are "u~v" using g's vertex labels.
FiniteGraph line_graph(const FiniteGraph& g);

// Number of self-avoiding walks from v of each length 1..max_len (edge
// count). counts[k-1] is the number of walks with exactly k edges.
std::vector<std::uint64_t> count_saw(const FiniteGraph& g, int v, int max_len);

// Growth-rate estimate from walk counts: N^(1/l) for the last length l with
// a nonzero count. All-zero counts are an error.
double estimate_connective_constant(const std::vector<std::uint64_t>& counts);

} // namespace hardcore

#include "hardcore/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hardcore/errors.hpp"

namespace hardcore {

ActivityMap ActivityMap::uniform(std::size_t n, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidInput("activity must be positive and finite");
    ActivityMap m;
    m.values.assign(n, lambda);
    return m;
}

double ActivityMap::lambda_plus() const {
    double v = 0.0;
    for (double x : values) v = std::max(v, x);
    return v;
}

double ActivityMap::lambda_minus() const {
    double v = std::numeric_limits<double>::infinity();
    for (double x : values) v = std::min(v, x);
    return values.empty() ? 0.0 : v;
}

FiniteGraph::FiniteGraph(std::size_t n) : adj_(n), labels_(n) {
    for (std::size_t i = 0; i < n; ++i) labels_[i] = "v" + std::to_string(i);
}

FiniteGraph::FiniteGraph(std::size_t n, std::vector<std::string> labels)
    : adj_(n), labels_(std::move(labels)) {
    if (labels_.size() != n) throw InvalidInput("label count does not match vertex count");
}

void FiniteGraph::add_edge(int u, int v) {
    const int n = static_cast<int>(adj_.size());
    if (u < 0 || v < 0 || u >= n || v >= n) throw InvalidInput("edge endpoint out of range");
    if (u == v) throw InvalidInput("self-loop rejected: graph must be loopless");
    auto& nu = adj_[static_cast<std::size_t>(u)];
    auto itu = std::lower_bound(nu.begin(), nu.end(), v);
    if (itu != nu.end() && *itu == v)
        throw InvalidInput("duplicate edge rejected: graph must be simple");
    nu.insert(itu, v);
    auto& nv = adj_[static_cast<std::size_t>(v)];
    nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
}

std::size_t FiniteGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& ns : adj_) twice += ns.size();
    return twice / 2;
}

int FiniteGraph::max_degree() const {
    int d = 0;
    for (const auto& ns : adj_) d = std::max(d, static_cast<int>(ns.size()));
    return d;
}

bool FiniteGraph::has_edge(int u, int v) const {
    const auto& ns = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(ns.begin(), ns.end(), v);
}

int FiniteGraph::index_of_label(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<int>(i);
    return -1;
}

std::vector<std::pair<int, int>> FiniteGraph::edge_list() const {
    std::vector<std::pair<int, int>> es;
    for (int u = 0; u < static_cast<int>(adj_.size()); ++u)
        for (int v : adj_[static_cast<std::size_t>(u)])
            if (u < v) es.emplace_back(u, v);
    return es;
}

bool is_independent(const FiniteGraph& g, const std::vector<std::uint8_t>& occupied) {
    if (occupied.size() != g.vertex_count())
        throw InvalidInput("occupation vector length does not match vertex count");
    for (int u = 0; u < static_cast<int>(g.vertex_count()); ++u) {
        if (!occupied[static_cast<std::size_t>(u)]) continue;
        for (int v : g.neighbors(u))
            if (v > u && occupied[static_cast<std::size_t>(v)]) return false;
    }
    return true;
}

namespace {

// Backtracking over vertices in index order; occupying a vertex is allowed
// only when none of its smaller-indexed neighbors is occupied, so exactly
// the independent sets are visited.
double enumerate_weighted(const FiniteGraph& g, const ActivityMap& lambda,
                          const std::vector<std::uint8_t>* keep) {
    const int n = static_cast<int>(g.vertex_count());
    std::vector<std::uint8_t> occ(static_cast<std::size_t>(n), 0);
    double total = 0.0;

    // Iterative DFS would obscure the recursion; n is capped by the caller.
    auto rec = [&](auto&& self, int v, double weight) -> void {
        while (v < n && keep && !(*keep)[static_cast<std::size_t>(v)]) ++v;
        if (v == n) {
            total += weight;
            return;
        }
        self(self, v + 1, weight); // v unoccupied
        for (int w : g.neighbors(v)) {
            if (w >= v) break;
            if (occ[static_cast<std::size_t>(w)] && (!keep || (*keep)[static_cast<std::size_t>(w)]))
                return; // blocked: no occupied branch
        }
        occ[static_cast<std::size_t>(v)] = 1;
        self(self, v + 1, weight * lambda.at(v));
        occ[static_cast<std::size_t>(v)] = 0;
    };
    rec(rec, 0, 1.0);
    return total;
}

std::size_t effective_size(const FiniteGraph& g, const std::vector<std::uint8_t>* keep) {
    if (!keep) return g.vertex_count();
    std::size_t n = 0;
    for (auto k : *keep)
        if (k) ++n;
    return n;
}

double brute_force_impl(const FiniteGraph& g, const ActivityMap& lambda,
                        const std::vector<std::uint8_t>* keep, std::size_t cap) {
    if (lambda.size() != g.vertex_count())
        throw InvalidInput("activity count does not match vertex count");
    for (double x : lambda.values)
        if (!(x > 0.0) || !std::isfinite(x))
            throw InvalidInput("activities must be positive and finite");
    if (effective_size(g, keep) > cap)
        throw BudgetExceeded("exhaustive enumeration refused above the vertex cap");
    return enumerate_weighted(g, lambda, keep);
}

} // namespace

double brute_force_partition(const FiniteGraph& g, const ActivityMap& lambda,
                             std::size_t enumeration_cap) {
    return brute_force_impl(g, lambda, nullptr, enumeration_cap);
}

double brute_force_partition_masked(const FiniteGraph& g, const ActivityMap& lambda,
                                    const std::vector<std::uint8_t>& keep,
                                    std::size_t enumeration_cap) {
    if (keep.size() != g.vertex_count())
        throw InvalidInput("keep mask length does not match vertex count");
    return brute_force_impl(g, lambda, &keep, enumeration_cap);
}

std::pair<FiniteGraph, std::vector<int>>
induced_subgraph(const FiniteGraph& g, const std::vector<std::uint8_t>& keep) {
    if (keep.size() != g.vertex_count())
        throw InvalidInput("keep mask length does not match vertex count");
    std::vector<int> map(g.vertex_count(), -1);
    std::vector<std::string> labels;
    int next = 0;
    for (std::size_t v = 0; v < keep.size(); ++v) {
        if (!keep[v]) continue;
        map[v] = next++;
        labels.push_back(g.label(static_cast<int>(v)));
    }
    FiniteGraph h(static_cast<std::size_t>(next), std::move(labels));
    for (int u = 0; u < static_cast<int>(g.vertex_count()); ++u) {
        if (map[static_cast<std::size_t>(u)] < 0) continue;
        for (int v : g.neighbors(u))
            if (v > u && map[static_cast<std::size_t>(v)] >= 0)
                h.add_edge(map[static_cast<std::size_t>(u)], map[static_cast<std::size_t>(v)]);
    }
    return {std::move(h), std::move(map)};
}

std::pair<FiniteGraph, ActivityMap> blow_up(const FiniteGraph& g, const ActivityMap& lambda,
                                            const std::vector<int>& copies) {
    const std::size_t n = g.vertex_count();
    if (copies.size() != n) throw InvalidInput("copy count does not match vertex count");
    if (lambda.size() != n) throw InvalidInput("activity count does not match vertex count");
    for (int b : copies)
        if (b < 1) throw InvalidInput("each vertex needs at least one copy");

    std::vector<int> base(n, 0);
    int total = 0;
    for (std::size_t v = 0; v < n; ++v) {
        base[v] = total;
        total += copies[v];
    }

    std::vector<std::string> labels(static_cast<std::size_t>(total));
    ActivityMap lam;
    lam.values.resize(static_cast<std::size_t>(total));
    for (std::size_t v = 0; v < n; ++v)
        for (int c = 0; c < copies[v]; ++c) {
            labels[static_cast<std::size_t>(base[v] + c)] =
                g.label(static_cast<int>(v)) + "#" + std::to_string(c);
            lam.values[static_cast<std::size_t>(base[v] + c)] = lambda.at(static_cast<int>(v)) / copies[v];
        }

    FiniteGraph h(static_cast<std::size_t>(total), std::move(labels));
    for (std::size_t v = 0; v < n; ++v)
        for (int a = 0; a < copies[v]; ++a)
            for (int b = a + 1; b < copies[v]; ++b)
                h.add_edge(base[v] + a, base[v] + b);
    for (int u = 0; u < static_cast<int>(n); ++u)
        for (int v : g.neighbors(u)) {
            if (v < u) continue;
            for (int a = 0; a < copies[static_cast<std::size_t>(u)]; ++a)
                for (int b = 0; b < copies[static_cast<std::size_t>(v)]; ++b)
                    h.add_edge(base[static_cast<std::size_t>(u)] + a,
                               base[static_cast<std::size_t>(v)] + b);
        }
    return {std::move(h), std::move(lam)};
}

FiniteGraph line_graph(const FiniteGraph& g) {
    const auto edges = g.edge_list();
    std::vector<std::string> labels;
    labels.reserve(edges.size());
    for (const auto& [u, v] : edges) labels.push_back(g.label(u) + "~" + g.label(v));
    FiniteGraph lg(edges.size(), std::move(labels));
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const auto& [a, b] = edges[i];
            const auto& [c, d] = edges[j];
            if (a == c || a == d || b == c || b == d)
                lg.add_edge(static_cast<int>(i), static_cast<int>(j));
        }
    return lg;
}

std::vector<std::uint64_t> count_saw(const FiniteGraph& g, int v, int max_len) {
    if (v < 0 || v >= static_cast<int>(g.vertex_count()))
        throw InvalidInput("walk origin out of range");
    if (max_len < 1) throw InvalidInput("walk length must be at least 1");

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_len), 0);
    std::vector<std::uint8_t> on_path(g.vertex_count(), 0);
    on_path[static_cast<std::size_t>(v)] = 1;

    auto rec = [&](auto&& self, int cur, int depth) -> void {
        if (depth == max_len) return;
        for (int w : g.neighbors(cur)) {
            if (on_path[static_cast<std::size_t>(w)]) continue;
            ++counts[static_cast<std::size_t>(depth)];
            on_path[static_cast<std::size_t>(w)] = 1;
            self(self, w, depth + 1);
            on_path[static_cast<std::size_t>(w)] = 0;
        }
    };
    rec(rec, v, 0);
    return counts;
}

double estimate_connective_constant(const std::vector<std::uint64_t>& counts) {
    for (std::size_t i = counts.size(); i-- > 0;) {
        if (counts[i] > 0)
            return std::pow(static_cast<double>(counts[i]), 1.0 / static_cast<double>(i + 1));
    }
    throw InvalidInput("no self-avoiding walks counted: cannot estimate growth");
}

} // namespace hardcore

#pragma once
// Read-only graph views consumed by the walk-tree machinery. A view exposes
// a vertex type, liveness, activities, canonical-order neighbor iteration
// over live vertices, and the rank of a neighbor in the full canonical
// neighbor list (dead entries included, so ranks are comparable no matter
// which vertices a particular view deletes).

#include <algorithm>
#include <string>
#include <vector>

#include "hardcore/graph.hpp"
#include "hardcore/periodic.hpp"

namespace hardcore {

// Finite graph with the telescoping deletion pattern: vertices below
// `first_alive` are removed. Activities are optional for walk counting.
class FiniteGraphView {
public:
    using Vertex = int;

    FiniteGraphView(const FiniteGraph& g, const ActivityMap& lambda, int first_alive = 0)
        : g_(&g), lambda_(&lambda), first_alive_(first_alive) {}

    explicit FiniteGraphView(const FiniteGraph& g, int first_alive = 0)
        : g_(&g), lambda_(nullptr), first_alive_(first_alive) {}

    bool alive(Vertex v) const { return v >= first_alive_; }

    double activity(Vertex v) const { return lambda_ ? lambda_->at(v) : 1.0; }

    template <class F>
    void for_each_neighbor(Vertex v, F&& f) const {
        for (int w : g_->neighbors(v))
            if (w >= first_alive_) f(w);
    }

    // Position of x in v's full sorted adjacency list.
    int neighbor_rank(Vertex v, Vertex x) const {
        const auto& ns = g_->neighbors(v);
        auto it = std::lower_bound(ns.begin(), ns.end(), x);
        return static_cast<int>(it - ns.begin());
    }

    std::string label(Vertex v) const { return g_->label(v); }

private:
    const FiniteGraph* g_;
    const ActivityMap* lambda_;
    int first_alive_;
};

// Periodic graph, optionally minus the lexicographic past (every domain copy
// at a group element strictly preceding the origin) and minus the first
// `first_alive_at_origin` domain vertices of the origin cell. This is the
// vertex pattern of the factor graphs in the telescoping representation.
class PeriodicPastView {
public:
    using Vertex = PeriodicVertex;

    PeriodicPastView(const PeriodicGraph& pg, bool remove_past, int first_alive_at_origin = 0)
        : pg_(&pg), remove_past_(remove_past), first_alive_u_(first_alive_at_origin) {}

    bool alive(const Vertex& w) const {
        if (remove_past_ && lex_past(w.g, pg_->dimension())) return false;
        if (first_alive_u_ > 0 && w.u < first_alive_u_ && offset_is_zero(w.g)) return false;
        return true;
    }

    double activity(const Vertex& w) const { return pg_->activity(w.u); }

    template <class F>
    void for_each_neighbor(const Vertex& w, F&& f) const {
        for (const auto& [delta, v] : pg_->neighbor_template(w.u)) {
            Vertex t{offset_add(w.g, delta), v};
            if (alive(t)) f(t);
        }
    }

    // Position of x in w's full neighbor template.
    int neighbor_rank(const Vertex& w, const Vertex& x) const {
        const auto& tmpl = pg_->neighbor_template(w.u);
        for (std::size_t i = 0; i < tmpl.size(); ++i) {
            if (tmpl[i].second == x.u && offset_add(w.g, tmpl[i].first) == x.g)
                return static_cast<int>(i);
        }
        return static_cast<int>(tmpl.size());
    }

    std::string label(const Vertex& w) const { return pg_->vertex_name(w); }

private:
    const PeriodicGraph* pg_;
    bool remove_past_;
    int first_alive_u_;
};

} // namespace hardcore

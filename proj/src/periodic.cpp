#include "hardcore/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "hardcore/errors.hpp"

namespace hardcore {

bool lex_past(const Offset& g, int d) {
    for (int k = 0; k < d; ++k) {
        if (g[k] < 0) return true;
        if (g[k] > 0) return false;
    }
    return false;
}

std::string offset_to_string(const Offset& g, int d) {
    std::string s = "(";
    for (int k = 0; k < d; ++k) {
        if (k) s += ",";
        s += std::to_string(g[k]);
    }
    return s + ")";
}

PeriodicGraph::PeriodicGraph(int d, std::vector<std::string> domain_labels,
                             const std::vector<std::pair<int, int>>& internal_edges,
                             const std::vector<CrossEdge>& cross_edges,
                             std::vector<double> lambda)
    : d_(d), labels_(std::move(domain_labels)), lambda_(std::move(lambda)) {
    if (d_ < 1 || d_ > kMaxDim)
        throw InvalidInput("group dimension must be between 1 and " + std::to_string(kMaxDim));
    const int n = static_cast<int>(labels_.size());
    if (n == 0) throw InvalidInput("fundamental domain must be nonempty");
    {
        std::set<std::string> seen;
        for (const auto& l : labels_) {
            if (l.empty()) throw InvalidInput("domain labels must be nonempty");
            if (!seen.insert(l).second) throw InvalidInput("duplicate domain label: " + l);
        }
    }
    if (lambda_.size() != labels_.size())
        throw InvalidInput("activity count does not match domain size");
    for (double x : lambda_)
        if (!(x > 0.0) || !std::isfinite(x))
            throw InvalidInput("activities must be positive and finite");

    std::set<std::pair<int, int>> internal_seen;
    for (auto [u, v] : internal_edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw InvalidInput("internal edge endpoint out of range");
        if (u == v) throw InvalidInput("internal self-loop rejected");
        auto key = std::minmax(u, v);
        if (!internal_seen.insert(key).second)
            throw InvalidInput("duplicate internal edge rejected");
        internal_.emplace_back(key.first, key.second);
    }

    // Close the cross relations under the mirror (u,delta,v) <-> (v,-delta,u)
    // while preserving the input listing order; a generated mirror is slotted
    // right after its partner. Offsets are recorded in first-appearance
    // order, which fixes the canonical offset listing.
    auto key_of = [](const CrossEdge& e) {
        return std::tuple<int, Offset, int>(e.u, e.delta, e.v);
    };
    std::set<std::tuple<int, Offset, int>> explicit_set;
    std::set<std::tuple<int, Offset, int>> placed;
    auto note_offset = [this](const Offset& o) {
        if (std::find(offsets_.begin(), offsets_.end(), o) == offsets_.end())
            offsets_.push_back(o);
    };
    for (const CrossEdge& e : cross_edges) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
            throw InvalidInput("cross edge endpoint out of range");
        if (offset_is_zero(e.delta))
            throw InvalidInput("cross edge offset must be nonzero (use internal_edges)");
        for (int k = d_; k < kMaxDim; ++k)
            if (e.delta[k] != 0) throw InvalidInput("cross edge offset exceeds group dimension");
        if (!explicit_set.insert(key_of(e)).second)
            throw InvalidInput("duplicate cross edge rejected");
    }
    for (const CrossEdge& e : cross_edges) {
        if (placed.count(key_of(e)))
            throw InvalidInput("cross edge listed in both directions; list each relation once");
        placed.insert(key_of(e));
        cross_.push_back(e);
        note_offset(e.delta);
        CrossEdge mirror{e.v, offset_neg(e.delta), e.u};
        if (placed.insert(key_of(mirror)).second) cross_.push_back(mirror);
        note_offset(mirror.delta);
    }

    // Neighbor templates in canonical order.
    templates_.assign(static_cast<std::size_t>(n), {});
    for (int u = 0; u < n; ++u) {
        std::vector<int> internal_nbrs;
        for (auto [a, b] : internal_) {
            if (a == u) internal_nbrs.push_back(b);
            if (b == u) internal_nbrs.push_back(a);
        }
        std::sort(internal_nbrs.begin(), internal_nbrs.end());
        auto& tmpl = templates_[static_cast<std::size_t>(u)];
        for (int v : internal_nbrs) tmpl.emplace_back(Offset{}, v);
        for (const Offset& o : offsets_) {
            std::vector<int> targets;
            for (const CrossEdge& e : cross_)
                if (e.u == u && e.delta == o) targets.push_back(e.v);
            std::sort(targets.begin(), targets.end());
            for (int v : targets) tmpl.emplace_back(o, v);
        }
    }
}

int PeriodicGraph::domain_index_of_label(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return static_cast<int>(i);
    return -1;
}

std::vector<PeriodicVertex> PeriodicGraph::neighbors(const PeriodicVertex& w) const {
    std::vector<PeriodicVertex> out;
    const auto& tmpl = neighbor_template(w.u);
    out.reserve(tmpl.size());
    for (const auto& [delta, v] : tmpl) out.push_back({offset_add(w.g, delta), v});
    return out;
}

int PeriodicGraph::max_degree() const {
    int d = 0;
    for (const auto& t : templates_) d = std::max(d, static_cast<int>(t.size()));
    return d;
}

int PeriodicGraph::max_offset_abs(int k) const {
    int m = 0;
    for (const CrossEdge& e : cross_) m = std::max(m, std::abs(e.delta[k]));
    return m;
}

std::string PeriodicGraph::vertex_name(const PeriodicVertex& w) const {
    return domain_label(w.u) + "@" + offset_to_string(w.g, d_);
}

BallResult ball(const PeriodicGraph& pg, const PeriodicVertex& center, int radius,
                const PeriodicVertexSet& deleted) {
    if (radius < 0) throw InvalidInput("ball radius must be nonnegative");
    if (center.u < 0 || center.u >= pg.domain_size())
        throw InvalidInput("ball center domain index out of range");
    if (deleted.count(center)) throw InvalidInput("ball center is deleted");

    std::unordered_map<PeriodicVertex, int, PeriodicVertexHash> index;
    std::vector<PeriodicVertex> order;
    std::deque<std::pair<PeriodicVertex, int>> queue;
    index.emplace(center, 0);
    order.push_back(center);
    queue.emplace_back(center, 0);
    while (!queue.empty()) {
        auto [w, dist] = queue.front();
        queue.pop_front();
        if (dist == radius) continue;
        for (const PeriodicVertex& t : pg.neighbors(w)) {
            if (deleted.count(t) || index.count(t)) continue;
            index.emplace(t, static_cast<int>(order.size()));
            order.push_back(t);
            queue.emplace_back(t, dist + 1);
        }
    }

    std::vector<std::string> labels;
    labels.reserve(order.size());
    ActivityMap lam;
    lam.values.reserve(order.size());
    for (const PeriodicVertex& w : order) {
        labels.push_back(pg.vertex_name(w));
        lam.values.push_back(pg.activity(w.u));
    }
    FiniteGraph g(order.size(), std::move(labels));
    for (std::size_t i = 0; i < order.size(); ++i)
        for (const PeriodicVertex& t : pg.neighbors(order[i])) {
            auto it = index.find(t);
            if (it != index.end() && it->second > static_cast<int>(i))
                g.add_edge(static_cast<int>(i), it->second);
        }
    return {std::move(g), std::move(lam), std::move(order)};
}

std::pair<FiniteGraph, ActivityMap> torus_quotient(const PeriodicGraph& pg,
                                                   const std::vector<int>& dims) {
    const int d = pg.dimension();
    const int n = pg.domain_size();
    if (static_cast<int>(dims.size()) != d)
        throw InvalidInput("torus needs one side length per dimension");
    long long cells = 1;
    for (int k = 0; k < d; ++k) {
        if (dims[static_cast<std::size_t>(k)] <= 2 * pg.max_offset_abs(k))
            throw InvalidInput("torus side must exceed twice the largest cross offset");
        cells *= dims[static_cast<std::size_t>(k)];
        if (cells * n > 4'000'000) throw BudgetExceeded("torus quotient too large");
    }

    const long long total = cells * n;
    auto cell_index = [&](const Offset& g) {
        long long idx = 0;
        for (int k = 0; k < d; ++k) {
            int L = dims[static_cast<std::size_t>(k)];
            int c = ((g[k] % L) + L) % L;
            idx = idx * L + c;
        }
        return idx;
    };
    auto vertex_index = [&](const Offset& g, int u) {
        return static_cast<int>(cell_index(g) * n + u);
    };

    std::vector<std::string> labels(static_cast<std::size_t>(total));
    ActivityMap lam;
    lam.values.resize(static_cast<std::size_t>(total));
    std::vector<Offset> cell_of(static_cast<std::size_t>(cells));
    {
        Offset g{};
        for (long long c = 0; c < cells; ++c) {
            long long rem = c;
            for (int k = d - 1; k >= 0; --k) {
                int L = dims[static_cast<std::size_t>(k)];
                g[k] = static_cast<std::int32_t>(rem % L);
                rem /= L;
            }
            cell_of[static_cast<std::size_t>(c)] = g;
            for (int u = 0; u < n; ++u) {
                labels[static_cast<std::size_t>(c * n + u)] =
                    pg.domain_label(u) + "@" + offset_to_string(g, d);
                lam.values[static_cast<std::size_t>(c * n + u)] = pg.activity(u);
            }
        }
    }

    FiniteGraph g(static_cast<std::size_t>(total), std::move(labels));
    std::set<std::pair<int, int>> added;
    auto add_once = [&](int a, int b) {
        auto key = std::minmax(a, b);
        if (added.insert(key).second) g.add_edge(key.first, key.second);
    };
    for (long long c = 0; c < cells; ++c) {
        const Offset& at = cell_of[static_cast<std::size_t>(c)];
        for (auto [u, v] : pg.internal_edges())
            add_once(vertex_index(at, u), vertex_index(at, v));
        for (const CrossEdge& e : pg.cross_edges())
            add_once(vertex_index(at, e.u), vertex_index(offset_add(at, e.delta), e.v));
    }
    return {std::move(g), std::move(lam)};
}

} // namespace hardcore

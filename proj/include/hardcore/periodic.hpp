#pragma once
// Infinite Z^d-periodic graphs given by a finite fundamental domain, internal
// edges inside a cell, and offset edge relations between translated cells.
// Vertices of the infinite graph are (group element, domain index) pairs.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hardcore/graph.hpp"

namespace hardcore {

inline constexpr int kMaxDim = 4;

// Translation group element; coordinates beyond the graph's dimension are 0.
using Offset = std::array<std::int32_t, kMaxDim>;

inline Offset offset_add(const Offset& a, const Offset& b) {
    Offset c{};
    for (int k = 0; k < kMaxDim; ++k) c[k] = a[k] + b[k];
    return c;
}

inline Offset offset_neg(const Offset& a) {
    Offset c{};
    for (int k = 0; k < kMaxDim; ++k) c[k] = -a[k];
    return c;
}

inline bool offset_is_zero(const Offset& a) {
    for (int k = 0; k < kMaxDim; ++k)
        if (a[k] != 0) return false;
    return true;
}

// True iff the first nonzero coordinate (scanning 1..d) is negative, i.e. the
// group element strictly precedes the origin in lexicographic order.
bool lex_past(const Offset& g, int d);

std::string offset_to_string(const Offset& g, int d);

struct PeriodicVertex {
    Offset g{};        // translation
    std::int32_t u = 0; // fundamental-domain index
    friend bool operator==(const PeriodicVertex&, const PeriodicVertex&) = default;
};

struct PeriodicVertexHash {
    std::size_t operator()(const PeriodicVertex& w) const {
        // FNV-1a over the coordinates and the domain index.
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t x) {
            h ^= x;
            h *= 1099511628211ull;
        };
        for (int k = 0; k < kMaxDim; ++k) mix(static_cast<std::uint32_t>(w.g[k]));
        mix(static_cast<std::uint32_t>(w.u));
        return static_cast<std::size_t>(h);
    }
};

using PeriodicVertexSet = std::unordered_set<PeriodicVertex, PeriodicVertexHash>;

// One directed cross-edge relation: domain vertex `u` in each cell g is
// adjacent to domain vertex `v` in cell g + delta.
struct CrossEdge {
    int u = 0;
    Offset delta{};
    int v = 0;
    friend bool operator==(const CrossEdge&, const CrossEdge&) = default;
};

class PeriodicGraph {
public:
    // Validates and canonicalizes the description: internal edges are
    // deduplicated loopless pairs; cross edges get nonzero offsets, are
    // closed under the mirror (u, delta, v) <-> (v, -delta, u), and duplicate
    // relations are rejected as multigraph input. The input listing order of
    // cross edges fixes the canonical offset order used by neighbor
    // templates (a mirror offset is slotted right after its partner).
    PeriodicGraph(int d, std::vector<std::string> domain_labels,
                  const std::vector<std::pair<int, int>>& internal_edges,
                  const std::vector<CrossEdge>& cross_edges,
                  std::vector<double> lambda);

    int dimension() const { return d_; }
    int domain_size() const { return static_cast<int>(labels_.size()); }
    const std::string& domain_label(int u) const { return labels_[static_cast<std::size_t>(u)]; }
    const std::vector<std::string>& domain_labels() const { return labels_; }
    int domain_index_of_label(const std::string& label) const; // -1 if absent

    const std::vector<double>& activities() const { return lambda_; }
    double activity(int u) const { return lambda_[static_cast<std::size_t>(u)]; }

    // Internal edges as (min, max) pairs in input order (deduplicated).
    const std::vector<std::pair<int, int>>& internal_edges() const { return internal_; }
    // Mirror-closed cross edges in canonical listing order.
    const std::vector<CrossEdge>& cross_edges() const { return cross_; }
    // Distinct cross offsets in canonical listing order.
    const std::vector<Offset>& offset_listing() const { return offsets_; }

    // Neighbor template of domain vertex u: (delta, v) pairs giving the
    // neighbors of (g, u) as (g + delta, v). Canonical order: internal
    // neighbors (delta = 0) by domain index, then cross neighbors grouped by
    // offset in listing order, by domain index within an offset.
    const std::vector<std::pair<Offset, int>>& neighbor_template(int u) const {
        return templates_[static_cast<std::size_t>(u)];
    }

    std::vector<PeriodicVertex> neighbors(const PeriodicVertex& w) const;

    int max_degree() const;
    // Max |delta_k| over cross edges for coordinate k (0-based), 0 if none.
    int max_offset_abs(int k) const;

    std::string vertex_name(const PeriodicVertex& w) const;

private:
    int d_ = 1;
    std::vector<std::string> labels_;
    std::vector<double> lambda_;
    std::vector<std::pair<int, int>> internal_;
    std::vector<CrossEdge> cross_;
    std::vector<Offset> offsets_;
    std::vector<std::vector<std::pair<Offset, int>>> templates_;
};

// Finite ball: the subgraph induced by all vertices within graph distance
// `radius` of `center`, skipping `deleted` vertices entirely (they are not
// traversed through). `coordinate[i]` maps finite indices back to the
// periodic vertices.
struct BallResult {
    FiniteGraph graph;
    ActivityMap lambda;
    std::vector<PeriodicVertex> coordinate;
};

BallResult ball(const PeriodicGraph& pg, const PeriodicVertex& center, int radius,
                const PeriodicVertexSet& deleted = {});

// Finite torus quotient with side lengths dims[k] (one per dimension). Each
// side must exceed twice the largest cross offset in its coordinate so that
// distinct edge relations stay distinct in the quotient.
std::pair<FiniteGraph, ActivityMap> torus_quotient(const PeriodicGraph& pg,
                                                   const std::vector<int>& dims);

} // namespace hardcore

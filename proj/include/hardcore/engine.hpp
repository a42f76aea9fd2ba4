#pragma once
// Counting engines: the exact and certified-approximate partition functions
// on finite graphs, certified free energy (log-partition density) on
// periodic graphs, and the activity-regime report.
//
// Everything here is deterministic: results are bit-identical for a fixed
// input and configuration regardless of the thread count.

#include <cstdint>
#include <optional>

#include "hardcore/graph.hpp"
#include "hardcore/interval.hpp"
#include "hardcore/periodic.hpp"

namespace hardcore {

struct EngineConfig {
    double epsilon = 1e-3;                  // requested accuracy
    int depth_start = 4;                    // first walk-tree depth tried
    int depth_step = 2;                     // depth increment while widening
    int depth_cap = 40;                     // hard depth limit (>= 2)
    std::uint64_t node_budget = 10'000'000; // per tree build
    int threads = 1;                        // 0 = hardware concurrency
    Normalization normalization = Normalization::PerVertex;
};

// Tree-uniqueness threshold (d-1)^(d-1) / (d-2)^d at degree bound t = d;
// +infinity for t <= 2. Accepts real arguments (useful for growth-rate
// estimates that are not integers).
double lambda_c(double t);

// Exact partition function by telescoping the vertex marginals: vertices are
// deleted in index order and each factor is the reciprocal unoccupied
// marginal of the first remaining vertex, computed from a complete
// (untruncated) walk tree.
double weitz_partition_exact(const FiniteGraph& g, const ActivityMap& lambda,
                             const EngineConfig& cfg = {});

// Certified multiplicative bracket: lower <= Z <= upper with
// upper / lower <= 1 + epsilon on success. Throws NoConvergence (carrying
// the best bracket) if some factor cannot reach its share of the target
// within the depth cap and node budget.
CertifiedInterval weitz_partition_approx(const FiniteGraph& g, const ActivityMap& lambda,
                                         const EngineConfig& cfg = {});

// Certified additive bracket for the free energy of a periodic graph, i.e.
// the infinite-volume limit of log Z per vertex (default) or per group
// element. One factor per fundamental-domain vertex: the factor graph
// removes every domain copy in the lexicographic past plus the earlier
// domain vertices of the origin cell, and the factor value is -log of the
// root's unoccupied marginal, bracketed by walk trees of adaptively
// increasing depth.
CertifiedInterval free_energy(const PeriodicGraph& pg, const EngineConfig& cfg = {});

enum class Regime { Subcritical, Supercritical, Unknown };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "subcritical";
        case Regime::Supercritical: return "supercritical";
        case Regime::Unknown: return "unknown";
    }
    return "?";
}

// Where the activities sit relative to the tree-uniqueness threshold.
// Subcritical requires lambda_plus < lambda_c(max degree); if that fails, a
// self-avoiding-walk growth estimate mu_hat is tried, and
// lambda_plus < lambda_c(mu_hat + 1) downgrades Supercritical to Unknown
// (the growth estimate is not a certified bound).
struct RegimeReport {
    int max_degree = 0;
    double lambda_plus = 0.0;
    double lambda_c_degree = 0.0; // lambda_c(max_degree), may be +inf
    std::optional<double> mu_hat;
    std::optional<double> lambda_c_mu; // lambda_c(mu_hat + 1)
    Regime regime = Regime::Unknown;
};

RegimeReport regime_report(const FiniteGraph& g, const ActivityMap& lambda,
                           int walk_depth = 10, std::uint64_t budget = 2'000'000);
RegimeReport regime_report(const PeriodicGraph& pg, int walk_depth = 10,
                           std::uint64_t budget = 2'000'000);

} // namespace hardcore

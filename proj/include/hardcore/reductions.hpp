#pragma once
// Reductions from symbolic-dynamics quantities (entropy, pressure, spectral
// radius) and from monomer-dimer systems to hardcore free-energy
// computations on periodic graphs.

#include <cstdint>
#include <string>
#include <vector>

#include "hardcore/engine.hpp"
#include "hardcore/interval.hpp"
#include "hardcore/periodic.hpp"

namespace hardcore {

// Nearest-neighbor shift of finite type on Z^d: one 0/1 transition matrix
// per positive coordinate direction. matrices[k][a][b] == 1 means symbol b
// may sit at offset +e_(k+1) from symbol a; the constraint for -e_(k+1) is
// the transpose.
struct TransitionSystem {
    std::vector<std::string> alphabet;
    int d = 1;
    std::vector<std::vector<std::vector<std::uint8_t>>> matrices; // [k][a][b]

    int symbol_count() const { return static_cast<int>(alphabet.size()); }
    int symbol_index(const std::string& s) const; // -1 if absent
    void validate() const;                        // throws InvalidInput
};

// Per-symbol weights; pressure uses exp of these as activities.
struct SingleSitePotential {
    std::vector<double> values; // one per symbol, finite
};

// Symbols compatible with everything in every direction (all-ones row and
// column in every matrix), in alphabet order.
std::vector<int> find_safe_symbols(const TransitionSystem& ts);

// Hardcore reduction of a system with at least one safe symbol of zero
// potential: one such symbol (the first in alphabet order) becomes the
// vacuum and is dropped; every other symbol becomes a domain vertex with
// activity exp(phi), cells are cliques, and a cross edge (a, +e_k, b) is
// added exactly when matrices[k][a][b] == 0. Throws NotReducible when no
// safe zero-potential symbol exists.
PeriodicGraph hardcore_reduction(const TransitionSystem& ts, const SingleSitePotential& phi);

// Same construction but keeping only the non-safe symbols as domain
// vertices, all at constant activity `lambda`. Requires at least one safe
// and at least one non-safe symbol (NotReducible otherwise) — used by the
// entropy and constraintedness computations, where all safe symbols are
// interchangeable.
PeriodicGraph collapsed_safe_reduction(const TransitionSystem& ts, double lambda);

// Certified topological entropy per group element. With n_s safe and n_u
// non-safe symbols: h = log n_s + n_u * f, where f is the per-vertex free
// energy of the collapsed reduction at activity 1/n_s (h = log n_s exactly
// when n_u = 0). Throws NotReducible without a safe symbol; propagates
// NoConvergence with the transformed bracket.
CertifiedInterval entropy(const TransitionSystem& ts, const EngineConfig& cfg = {});

// Certified pressure per group element of the single-site potential. With
// phi identically zero this is exactly the entropy (same code path); in
// general it is (|alphabet| - 1) times the per-vertex free energy of the
// hardcore reduction.
CertifiedInterval pressure(const TransitionSystem& ts, const SingleSitePotential& phi,
                           const EngineConfig& cfg = {});

// How constrained the system is, as seen by the reduction at activity
// 1/n_s: the reduction graph's max degree with its closed-form bound
// (2d+1) * n_u - 1, a self-avoiding-walk growth estimate mu_hat, and the
// comparisons of 1/n_s against lambda_c of each.
struct ConstraintednessReport {
    int n_safe = 0;
    int n_unsafe = 0;
    double lambda = 0.0; // 1 / n_safe
    int max_degree = 0;
    int degree_bound = 0;
    double mu_hat = 0.0;
    double lambda_c_degree = 0.0;
    double lambda_c_mu = 0.0;
    bool subcritical_by_degree = false;
    bool subcritical_by_mu = false;
};

ConstraintednessReport constraintedness(const TransitionSystem& ts, int walk_depth = 10,
                                        std::uint64_t budget = 2'000'000);

// Edge orbits of a periodic graph: internal edges in storage order, then
// cross edges with lexicographically positive offset in canonical listing
// order. These index the monomer-dimer edge activities and name the line
// graph's domain ("a~b" internal, "a~b@(dx,..)" cross).
std::vector<std::string> edge_orbit_labels(const PeriodicGraph& pg);
std::size_t edge_orbit_count(const PeriodicGraph& pg);

// Periodic line graph: one domain vertex per edge orbit, adjacent whenever
// translates of the two edges share an endpoint. Requires at least one edge
// orbit (use the f = 0 convention for edgeless graphs upstream).
PeriodicGraph periodic_line_graph(const PeriodicGraph& pg,
                                  const std::vector<double>& edge_activities);

// Certified monomer-dimer free energy per edge orbit: matchings of the
// periodic graph are independent sets of its line graph. An edgeless graph
// has the empty matching only, giving exactly 0.
CertifiedInterval monomer_dimer_free_energy(const PeriodicGraph& pg,
                                            const std::vector<double>& edge_activities,
                                            const EngineConfig& cfg = {});

// Certified Perron-root bracket of a 0/1 matrix whose row and column at
// `safe_index` are all ones: lambda_max = exp(h) for the entropy h of the
// one-dimensional system with that transition matrix. The entropy target is
// chosen so the exponentiated bracket is within `epsilon`, retightening from
// the observed magnitude if needed. Throws NotReducible when row/column
// `safe_index` contain a zero.
CertifiedInterval spectral_radius_safe(const std::vector<std::vector<std::uint8_t>>& matrix,
                                       int safe_index, double epsilon,
                                       const EngineConfig& cfg = {});

} // namespace hardcore

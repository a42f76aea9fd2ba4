#pragma once
// Reference computations used by tests and diagnostics. These deliberately
// do not reuse the engine's graph machinery: adjacency, compatibility, and
// transfer structures are rebuilt here directly from the input descriptions,
// so agreement with the engine is evidence rather than tautology.

#include <cstdint>
#include <utility>
#include <vector>

#include "hardcore/graph.hpp"
#include "hardcore/periodic.hpp"
#include "hardcore/reductions.hpp"

namespace hardcore {

// Perron root of a nonnegative primitive matrix by power iteration from the
// all-ones vector, to ~1e-12 relative accuracy. Non-primitive matrices
// (reducible or periodic, e.g. the identity) raise OracleUnsupported.
double power_iteration(const std::vector<std::vector<double>>& m);

// Free energy per vertex of a one-dimensional periodic graph via the
// transfer matrix over independent sets of a re-blocked fundamental domain
// (cells are grouped so every cross offset becomes +-1). Not certified to
// any epsilon beyond the power-iteration tolerance, but exact in structure.
double transfer_free_energy_1d(const PeriodicGraph& pg);

// Transfer-matrix free energy per vertex of a two-dimensional periodic
// graph restricted to an infinite strip of `width` blocked cells in the
// second coordinate. Returns the values for free and wrapped transverse
// boundary conditions, ordered (min, max). A heuristic band for the plane
// value, not a certified bracket.
std::pair<double, double> strip_free_energy_2d(const PeriodicGraph& pg, int width);

// Number of matchings (dimer configurations, empty included) by exhaustive
// backtracking over the edge list.
std::uint64_t count_matchings(const FiniteGraph& g);

// Number of valid length-L words of a one-dimensional transition system by
// depth-first enumeration over strings.
std::uint64_t box_configuration_count(const TransitionSystem& ts, int length);

// The same count predicted through the safe-symbol split: sum over
// placements x of non-safe symbols (adjacent placements allowed only when
// the transition matrix permits them) of n_safe^(number of free cells).
// Built directly from the matrices, independently of the reduction code.
std::uint64_t box_count_via_safe_split(const TransitionSystem& ts, int length);

} // namespace hardcore

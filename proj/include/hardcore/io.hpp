#pragma once
// JSON input parsing and result serialization. All malformed-input paths
// throw InvalidInput with a message naming the offending field.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hardcore/engine.hpp"
#include "hardcore/graph.hpp"
#include "hardcore/interval.hpp"
#include "hardcore/periodic.hpp"
#include "hardcore/reductions.hpp"

namespace hardcore {

nlohmann::json load_json_file(const std::string& path);

// {"vertices": ["a", ...], "edges": [["a","b"], ...], "lambda": {"a": 1.5}}
// lambda entries default to 1.0.
std::pair<FiniteGraph, ActivityMap> parse_finite_graph(const nlohmann::json& j);

// {"group": {"type": "Zd", "d": 2}, "domain": [...], "internal_edges": [...],
//  "cross_edges": [{"from": "a", "offset": [1,0], "to": "a"}, ...],
//  "lambda": {...}}
PeriodicGraph parse_periodic_graph(const nlohmann::json& j);

// {"alphabet": ["0","1"], "d": 1, "matrices": {"e1": [[1,1],[1,0]]},
//  "phi": {"1": 0.25}}   phi optional, defaults to 0 per symbol.
std::pair<TransitionSystem, SingleSitePotential>
parse_transition_system(const nlohmann::json& j);

// {"matrix": [[...], ...]}  square, 0/1 entries.
std::vector<std::vector<std::uint8_t>> parse_binary_matrix(const nlohmann::json& j);

// Edge activities for matching problems, keyed by edge-orbit label
// ("a~b" or "a~b@(1,0)"); missing orbits default to 1.0.
std::vector<double> parse_edge_activities(const nlohmann::json& j, const PeriodicGraph& pg);

bool looks_like_periodic_graph(const nlohmann::json& j);

// Interval results serialize with lower/upper/estimate/epsilon/certified/
// depth_used and the per-factor brackets; +-infinity becomes the strings
// "infinity"/"-infinity" since JSON numbers cannot carry them.
nlohmann::json interval_to_json(const CertifiedInterval& iv, bool with_normalization);
nlohmann::json regime_to_json(const RegimeReport& rep);
nlohmann::json json_number_or_infinity(double x);

std::string dump_json(const nlohmann::json& j);

} // namespace hardcore

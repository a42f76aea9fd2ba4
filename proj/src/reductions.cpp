#include "hardcore/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hardcore/errors.hpp"
#include "hardcore/saw.hpp"
#include "hardcore/views.hpp"

namespace hardcore {

int TransitionSystem::symbol_index(const std::string& s) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == s) return static_cast<int>(i);
    return -1;
}

void TransitionSystem::validate() const {
    if (alphabet.empty()) throw InvalidInput("alphabet must be nonempty");
    {
        std::set<std::string> seen;
        for (const auto& s : alphabet) {
            if (s.empty()) throw InvalidInput("alphabet symbols must be nonempty");
            if (!seen.insert(s).second) throw InvalidInput("duplicate alphabet symbol: " + s);
        }
    }
    if (d < 1 || d > kMaxDim)
        throw InvalidInput("dimension must be between 1 and " + std::to_string(kMaxDim));
    if (static_cast<int>(matrices.size()) != d)
        throw InvalidInput("need one transition matrix per dimension");
    const std::size_t k = alphabet.size();
    for (const auto& m : matrices) {
        if (m.size() != k) throw InvalidInput("transition matrix must be square over the alphabet");
        for (const auto& row : m) {
            if (row.size() != k)
                throw InvalidInput("transition matrix must be square over the alphabet");
            for (auto x : row)
                if (x != 0 && x != 1) throw InvalidInput("transition matrix entries must be 0 or 1");
        }
    }
}

std::vector<int> find_safe_symbols(const TransitionSystem& ts) {
    ts.validate();
    const int k = ts.symbol_count();
    std::vector<int> safe;
    for (int s = 0; s < k; ++s) {
        bool ok = true;
        for (const auto& m : ts.matrices) {
            for (int b = 0; b < k && ok; ++b)
                ok = m[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)] == 1 &&
                     m[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)] == 1;
            if (!ok) break;
        }
        if (ok) safe.push_back(s);
    }
    return safe;
}

namespace {

// Shared construction: the kept symbols become a clique fundamental domain;
// a cross edge (a, +e_k, b) forbids symbol a at g and symbol b at g + e_k,
// i.e. it is present exactly where the transition matrix has a zero.
PeriodicGraph make_reduction(const TransitionSystem& ts, const std::vector<int>& kept,
                             const std::vector<double>& activities) {
    std::vector<std::string> labels;
    labels.reserve(kept.size());
    for (int s : kept) labels.push_back(ts.alphabet[static_cast<std::size_t>(s)]);

    std::vector<std::pair<int, int>> internal;
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = i + 1; j < kept.size(); ++j)
            internal.emplace_back(static_cast<int>(i), static_cast<int>(j));

    std::vector<CrossEdge> cross;
    for (int k = 0; k < ts.d; ++k) {
        Offset step{};
        step[k] = 1;
        const auto& m = ts.matrices[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < kept.size(); ++i)
            for (std::size_t j = 0; j < kept.size(); ++j)
                if (m[static_cast<std::size_t>(kept[i])][static_cast<std::size_t>(kept[j])] == 0)
                    cross.push_back({static_cast<int>(i), step, static_cast<int>(j)});
    }
    return PeriodicGraph(ts.d, std::move(labels), internal, cross, activities);
}

} // namespace

PeriodicGraph hardcore_reduction(const TransitionSystem& ts, const SingleSitePotential& phi) {
    ts.validate();
    if (phi.values.size() != ts.alphabet.size())
        throw InvalidInput("potential count does not match alphabet size");
    for (double x : phi.values)
        if (!std::isfinite(x)) throw InvalidInput("potential values must be finite");

    const std::vector<int> safe = find_safe_symbols(ts);
    int vacuum = -1;
    for (int s : safe)
        if (phi.values[static_cast<std::size_t>(s)] == 0.0) {
            vacuum = s;
            break;
        }
    if (vacuum < 0) {
        if (safe.empty()) throw NotReducible("no safe symbol: hardcore reduction needs one");
        throw NotReducible("no safe symbol has zero potential to serve as the vacuum");
    }

    std::vector<int> kept;
    std::vector<double> activities;
    for (int s = 0; s < ts.symbol_count(); ++s) {
        if (s == vacuum) continue;
        kept.push_back(s);
        activities.push_back(std::exp(phi.values[static_cast<std::size_t>(s)]));
    }
    if (kept.empty())
        throw NotReducible("single-symbol system reduces to an empty domain; its value is trivial");
    return make_reduction(ts, kept, activities);
}

PeriodicGraph collapsed_safe_reduction(const TransitionSystem& ts, double lambda) {
    ts.validate();
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw InvalidInput("activity must be positive and finite");
    const std::vector<int> safe = find_safe_symbols(ts);
    if (safe.empty()) throw NotReducible("no safe symbol: reduction needs one");
    std::vector<int> kept;
    for (int s = 0; s < ts.symbol_count(); ++s)
        if (std::find(safe.begin(), safe.end(), s) == safe.end()) kept.push_back(s);
    if (kept.empty())
        throw NotReducible("every symbol is safe: the collapsed reduction has an empty domain");
    return make_reduction(ts, kept, std::vector<double>(kept.size(), lambda));
}

CertifiedInterval entropy(const TransitionSystem& ts, const EngineConfig& cfg) {
    ts.validate();
    const std::vector<int> safe = find_safe_symbols(ts);
    if (safe.empty())
        throw NotReducible("no safe symbol: entropy via the hardcore reduction needs one");
    const int n_s = static_cast<int>(safe.size());
    const int n_u = ts.symbol_count() - n_s;
    const double log_ns = std::log(static_cast<double>(n_s));

    CertifiedInterval iv;
    iv.epsilon = cfg.epsilon;
    iv.normalization = Normalization::PerGroupElement;
    if (n_u == 0) {
        // Full shift on the safe symbols: entropy is exactly log n_s.
        iv.lower = iv.upper = log_ns;
        return iv;
    }

    // Each cell is a safe symbol (n_s interchangeable choices) or one of the
    // non-safe symbols; dividing out n_s per cell turns the count into the
    // hardcore partition function of the collapsed reduction at activity
    // 1/n_s, giving h = log n_s + n_u * f with f its per-vertex free energy.
    const PeriodicGraph reduction = collapsed_safe_reduction(ts, 1.0 / n_s);
    EngineConfig inner = cfg;
    inner.normalization = Normalization::PerVertex;
    inner.epsilon = cfg.epsilon / n_u;

    auto transform = [&](const CertifiedInterval& f) {
        CertifiedInterval out = iv;
        out.lower = log_ns + n_u * f.lower;
        out.upper = log_ns + n_u * f.upper;
        out.depth_used = f.depth_used;
        out.factors = f.factors;
        return out;
    };
    try {
        return transform(free_energy(reduction, inner));
    } catch (const NoConvergence& e) {
        throw NoConvergence(e.what(), transform(e.best()));
    }
}

CertifiedInterval pressure(const TransitionSystem& ts, const SingleSitePotential& phi,
                           const EngineConfig& cfg) {
    ts.validate();
    if (phi.values.size() != ts.alphabet.size())
        throw InvalidInput("potential count does not match alphabet size");
    for (double x : phi.values)
        if (!std::isfinite(x)) throw InvalidInput("potential values must be finite");

    const bool phi_zero =
        std::all_of(phi.values.begin(), phi.values.end(), [](double x) { return x == 0.0; });
    if (phi_zero) return entropy(ts, cfg); // pressure at zero potential IS the entropy

    const PeriodicGraph reduction = hardcore_reduction(ts, phi);
    const int m = ts.symbol_count() - 1; // domain size of the reduction
    EngineConfig inner = cfg;
    inner.normalization = Normalization::PerVertex;
    inner.epsilon = cfg.epsilon / m;

    auto transform = [&](const CertifiedInterval& f) {
        CertifiedInterval out;
        out.epsilon = cfg.epsilon;
        out.normalization = Normalization::PerGroupElement;
        out.lower = m * f.lower;
        out.upper = m * f.upper;
        out.depth_used = f.depth_used;
        out.factors = f.factors;
        return out;
    };
    try {
        return transform(free_energy(reduction, inner));
    } catch (const NoConvergence& e) {
        throw NoConvergence(e.what(), transform(e.best()));
    }
}

ConstraintednessReport constraintedness(const TransitionSystem& ts, int walk_depth,
                                        std::uint64_t budget) {
    ts.validate();
    if (walk_depth < 1) throw InvalidInput("walk depth must be at least 1");
    const std::vector<int> safe = find_safe_symbols(ts);
    if (safe.empty())
        throw NotReducible("no safe symbol: constraintedness is defined via the reduction");

    ConstraintednessReport rep;
    rep.n_safe = static_cast<int>(safe.size());
    rep.n_unsafe = ts.symbol_count() - rep.n_safe;
    rep.lambda = 1.0 / rep.n_safe;
    if (rep.n_unsafe == 0) {
        rep.lambda_c_degree = lambda_c(0.0);
        rep.lambda_c_mu = lambda_c(1.0);
        rep.subcritical_by_degree = true;
        rep.subcritical_by_mu = true;
        return rep;
    }

    const PeriodicGraph reduction = collapsed_safe_reduction(ts, rep.lambda);
    rep.max_degree = reduction.max_degree();
    rep.degree_bound = (2 * ts.d + 1) * rep.n_unsafe - 1;
    rep.lambda_c_degree = lambda_c(static_cast<double>(rep.max_degree));
    rep.subcritical_by_degree = rep.lambda < rep.lambda_c_degree;

    // Growth estimate of the reduction graph's walk tree; on a budget hit
    // retry shallower rather than failing the whole report.
    double mu = 0.0;
    for (int depth = walk_depth; depth >= 2; depth -= 2) {
        try {
            double best = 0.0;
            PeriodicPastView view(reduction, /*remove_past=*/false);
            for (int u = 0; u < reduction.domain_size(); ++u) {
                const PeriodicVertex root{Offset{}, static_cast<std::int32_t>(u)};
                WalkCounts wc = count_walks(view, root, depth, budget);
                bool nonzero = false;
                for (auto c : wc.counts) nonzero = nonzero || c > 0;
                if (nonzero) best = std::max(best, estimate_connective_constant(wc.counts));
            }
            mu = best;
            break;
        } catch (const BudgetExceeded&) {
            continue;
        }
    }
    rep.mu_hat = mu;
    rep.lambda_c_mu = lambda_c(mu + 1.0);
    rep.subcritical_by_mu = rep.lambda < rep.lambda_c_mu;
    return rep;
}

namespace {

struct EdgeOrbit {
    int u = 0;
    Offset delta{}; // zero for internal edges
    int v = 0;
};

std::vector<EdgeOrbit> edge_orbits(const PeriodicGraph& pg) {
    std::vector<EdgeOrbit> orbits;
    for (auto [u, v] : pg.internal_edges()) orbits.push_back({u, Offset{}, v});
    for (const CrossEdge& e : pg.cross_edges())
        if (!lex_past(e.delta, pg.dimension())) // keep the lex-positive representative
            orbits.push_back({e.u, e.delta, e.v});
    return orbits;
}

} // namespace

std::vector<std::string> edge_orbit_labels(const PeriodicGraph& pg) {
    std::vector<std::string> labels;
    for (const EdgeOrbit& o : edge_orbits(pg)) {
        std::string s = pg.domain_label(o.u) + "~" + pg.domain_label(o.v);
        if (!offset_is_zero(o.delta)) s += "@" + offset_to_string(o.delta, pg.dimension());
        labels.push_back(std::move(s));
    }
    return labels;
}

std::size_t edge_orbit_count(const PeriodicGraph& pg) { return edge_orbits(pg).size(); }

PeriodicGraph periodic_line_graph(const PeriodicGraph& pg,
                                  const std::vector<double>& edge_activities) {
    const std::vector<EdgeOrbit> orbits = edge_orbits(pg);
    if (orbits.empty())
        throw InvalidInput("edgeless graph has no line graph; handle the empty case upstream");
    if (edge_activities.size() != orbits.size())
        throw InvalidInput("edge activity count does not match edge orbit count");

    const int d = pg.dimension();
    std::vector<std::string> labels = edge_orbit_labels(pg);

    // Orbit i sits at {(0, u_i), (delta_i, v_i)}; a translate of orbit j by h
    // sits at {(h, u_j), (h + delta_j, v_j)}. The two are adjacent in the
    // line graph when they share an endpoint and are not the same edge.
    std::vector<std::pair<int, int>> internal;
    std::vector<CrossEdge> cross;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        for (std::size_t j = i; j < orbits.size(); ++j) {
            const EdgeOrbit& a = orbits[i];
            const EdgeOrbit& b = orbits[j];
            std::set<Offset> shifts;
            if (a.u == b.u) shifts.insert(Offset{});
            if (a.u == b.v) shifts.insert(offset_neg(b.delta));
            if (a.v == b.u) shifts.insert(a.delta);
            if (a.v == b.v) shifts.insert(offset_add(a.delta, offset_neg(b.delta)));
            for (const Offset& h : shifts) {
                if (i == j) {
                    // Mirror shifts name the same relation; keep one side.
                    if (offset_is_zero(h) || lex_past(h, d)) continue;
                    cross.push_back({static_cast<int>(i), h, static_cast<int>(j)});
                } else if (offset_is_zero(h)) {
                    internal.emplace_back(static_cast<int>(i), static_cast<int>(j));
                } else {
                    cross.push_back({static_cast<int>(i), h, static_cast<int>(j)});
                }
            }
        }
    }
    return PeriodicGraph(d, std::move(labels), internal, cross, edge_activities);
}

CertifiedInterval monomer_dimer_free_energy(const PeriodicGraph& pg,
                                            const std::vector<double>& edge_activities,
                                            const EngineConfig& cfg) {
    const std::size_t m = edge_orbit_count(pg);
    if (edge_activities.size() != m)
        throw InvalidInput("edge activity count does not match edge orbit count");
    if (m == 0) {
        // Only the empty matching exists; the free energy is exactly zero.
        CertifiedInterval iv;
        iv.epsilon = cfg.epsilon;
        iv.normalization = cfg.normalization;
        iv.lower = iv.upper = 0.0;
        return iv;
    }
    return free_energy(periodic_line_graph(pg, edge_activities), cfg);
}

CertifiedInterval spectral_radius_safe(const std::vector<std::vector<std::uint8_t>>& matrix,
                                       int safe_index, double epsilon, const EngineConfig& cfg) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw InvalidInput("epsilon must be positive and finite");
    const std::size_t k = matrix.size();
    if (k == 0) throw InvalidInput("matrix must be nonempty");
    if (safe_index < 0 || static_cast<std::size_t>(safe_index) >= k)
        throw InvalidInput("safe index out of range");

    TransitionSystem ts;
    ts.d = 1;
    for (std::size_t i = 0; i < k; ++i) ts.alphabet.push_back("s" + std::to_string(i));
    ts.matrices.push_back(matrix);
    ts.validate(); // squareness and 0/1 entries

    const std::vector<int> safe = find_safe_symbols(ts);
    if (std::find(safe.begin(), safe.end(), safe_index) == safe.end())
        throw NotReducible("row/column at the safe index contain a zero");

    // lambda_max = exp(h), and with a safe symbol 1 <= lambda_max <= k, so an
    // entropy bracket of width eps_h maps to a root bracket of width at most
    // exp(h_hi) * eps_h <= k * e^(eps_h) * eps_h. Start from eps_h = eps/(2k)
    // and retighten from the observed bracket if that was not enough.
    auto transform = [&](const CertifiedInterval& h) {
        CertifiedInterval out;
        out.epsilon = epsilon;
        out.normalization = Normalization::PerGroupElement;
        out.lower = std::exp(h.lower);
        out.upper = std::exp(h.upper);
        out.depth_used = h.depth_used;
        out.factors = h.factors;
        return out;
    };

    double eps_h = epsilon / (2.0 * static_cast<double>(k));
    CertifiedInterval out;
    for (int round = 0; round < 4; ++round) {
        EngineConfig inner = cfg;
        inner.epsilon = eps_h;
        try {
            out = transform(entropy(ts, inner));
        } catch (const NoConvergence& e) {
            throw NoConvergence(e.what(), transform(e.best()));
        }
        if (out.width() <= epsilon) return out;
        eps_h = epsilon / (2.0 * out.upper);
    }
    out.certified = false;
    throw NoConvergence("spectral-radius bracket did not tighten as expected", out);
}

} // namespace hardcore

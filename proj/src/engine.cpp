#include "hardcore/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "hardcore/errors.hpp"
#include "hardcore/saw.hpp"
#include "hardcore/util.hpp"
#include "hardcore/views.hpp"

namespace hardcore {

double lambda_c(double t) {
    if (!std::isfinite(t)) throw InvalidInput("degree argument must be finite");
    if (!(t > 2.0)) return std::numeric_limits<double>::infinity();
    // Small arguments go through pow so the dyadic-rational values
    // (t = 3, 4, 6, ...) come out exactly; large ones through logs to dodge
    // intermediate overflow.
    if (t <= 100.0) return std::pow(t - 1.0, t - 1.0) / std::pow(t - 2.0, t);
    return std::exp((t - 1.0) * std::log(t - 1.0) - t * std::log(t - 2.0));
}

namespace {

int resolve_threads(int threads) {
    if (threads < 0) throw InvalidInput("thread count must be nonnegative");
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void validate_config(const EngineConfig& cfg) {
    if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon))
        throw InvalidInput("epsilon must be positive and finite");
    if (cfg.depth_cap < 2) throw InvalidInput("depth cap must be at least 2");
    if (cfg.depth_start < 1) throw InvalidInput("depth start must be at least 1");
    if (cfg.depth_step < 1) throw InvalidInput("depth step must be at least 1");
    if (cfg.node_budget == 0) throw InvalidInput("node budget must be positive");
}

// Run jobs 0..count-1, possibly concurrently. Each job writes only its own
// slot; errors are kept per index and the lowest-index one is rethrown, so
// results and failures are independent of the thread count.
void run_indexed(std::size_t count, int threads, const std::function<void(std::size_t)>& job) {
    if (count == 0) return;
    std::vector<std::exception_ptr> errs(count);
    auto guarded = [&](std::size_t i) {
        try {
            job(i);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    };
    const int workers = std::min<int>(threads, static_cast<int>(count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) guarded(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                    guarded(i);
            });
        for (auto& th : pool) th.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

// Deepen the walk tree until the stop predicate accepts the bracket, the
// tree completes (bracket is exact), or the depth cap / node budget ends the
// search. A budget hit after at least one completed depth keeps the best
// completed bracket (marked not converged); a budget hit on the very first
// depth propagates as BudgetExceeded.
template <class View, class Stop>
FactorBracket adaptive_bracket(const View& view, const typename View::Vertex& root, int index,
                               const EngineConfig& cfg, int eval_threads, Stop&& stop) {
    FactorBracket best{index, 0.0, 1.0, 0, false};
    bool have = false;
    int depth = std::min(cfg.depth_start, cfg.depth_cap);
    for (;;) {
        BracketOut out;
        try {
            out = evaluate_root_bracket(view, root, depth, cfg.node_budget, eval_threads);
        } catch (const BudgetExceeded&) {
            if (have) return best; // best completed bracket, converged == false
            throw;
        }
        best = FactorBracket{index, out.q(), out.r(), depth, false};
        have = true;
        if (!out.truncated || stop(out.q(), out.r())) {
            best.converged = true;
            return best;
        }
        if (depth >= cfg.depth_cap) return best;
        depth = std::min(depth + cfg.depth_step, cfg.depth_cap);
    }
}

} // namespace

double weitz_partition_exact(const FiniteGraph& g, const ActivityMap& lambda,
                             const EngineConfig& cfg) {
    validate_config(cfg);
    if (lambda.size() != g.vertex_count())
        throw InvalidInput("activity count does not match vertex count");
    const int n = static_cast<int>(g.vertex_count());
    if (n == 0) return 1.0;
    const int threads = resolve_threads(cfg.threads);

    // Walks visit distinct vertices, so depth n + 1 is unreachable and every
    // tree is complete: both boundary conditions coincide and each factor is
    // the exact unoccupied marginal of its root in the reduced graph.
    const int cap = n + 1;
    std::vector<double> p(static_cast<std::size_t>(n));
    run_indexed(static_cast<std::size_t>(n), n >= 2 ? threads : 1, [&](std::size_t i) {
        FiniteGraphView view(g, lambda, static_cast<int>(i));
        const BracketOut out = evaluate_root_bracket(view, static_cast<int>(i), cap,
                                                     cfg.node_budget, n >= 2 ? 1 : threads);
        p[i] = out.p_all_unoccupied;
    });

    ProductAccumulator acc(static_cast<std::size_t>(n));
    for (double pi : p) acc.multiply(1.0 / pi);
    return acc.value();
}

CertifiedInterval weitz_partition_approx(const FiniteGraph& g, const ActivityMap& lambda,
                                         const EngineConfig& cfg) {
    validate_config(cfg);
    if (lambda.size() != g.vertex_count())
        throw InvalidInput("activity count does not match vertex count");
    const int n = static_cast<int>(g.vertex_count());

    CertifiedInterval iv;
    iv.epsilon = cfg.epsilon;
    iv.normalization = cfg.normalization;
    if (n == 0) {
        iv.lower = iv.upper = 1.0;
        return iv;
    }

    // If every factor bracket satisfies r <= q (1 + target) then the product
    // brackets satisfy upper/lower <= (1 + target)^n <= e^(eps/(1+eps))
    // <= 1 + eps.
    const double target = cfg.epsilon / ((1.0 + cfg.epsilon) * n);
    const int threads = resolve_threads(cfg.threads);
    std::vector<FactorBracket> factors(static_cast<std::size_t>(n));
    run_indexed(static_cast<std::size_t>(n), n >= 2 ? threads : 1, [&](std::size_t i) {
        FiniteGraphView view(g, lambda, static_cast<int>(i));
        factors[i] = adaptive_bracket(view, static_cast<int>(i), static_cast<int>(i), cfg,
                                      n >= 2 ? 1 : threads,
                                      [&](double q, double r) { return r <= q * (1.0 + target); });
    });

    ProductAccumulator lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    bool all_converged = true;
    for (const FactorBracket& f : factors) {
        lo.multiply(1.0 / f.r);
        hi.multiply(1.0 / f.q);
        all_converged = all_converged && f.converged;
        iv.depth_used = std::max(iv.depth_used, f.depth);
    }
    iv.lower = lo.value();
    iv.upper = hi.value();
    iv.factors = std::move(factors);
    if (!all_converged)
        throw NoConvergence("partition bracket missed the accuracy target", iv);
    return iv;
}

CertifiedInterval free_energy(const PeriodicGraph& pg, const EngineConfig& cfg) {
    validate_config(cfg);
    const int n = pg.domain_size();
    const int threads = resolve_threads(cfg.threads);
    const double per_factor =
        cfg.normalization == Normalization::PerVertex ? cfg.epsilon : cfg.epsilon / n;

    std::vector<FactorBracket> factors(static_cast<std::size_t>(n));
    run_indexed(static_cast<std::size_t>(n), n >= 2 ? threads : 1, [&](std::size_t i) {
        PeriodicPastView view(pg, /*remove_past=*/true, static_cast<int>(i));
        const PeriodicVertex root{Offset{}, static_cast<std::int32_t>(i)};
        factors[i] =
            adaptive_bracket(view, root, static_cast<int>(i), cfg, n >= 2 ? 1 : threads,
                             [&](double q, double r) { return std::log(r / q) <= per_factor; });
    });

    CompensatedSum lo, hi;
    bool all_converged = true;
    CertifiedInterval iv;
    iv.epsilon = cfg.epsilon;
    iv.normalization = cfg.normalization;
    for (const FactorBracket& f : factors) {
        lo.add(-std::log(f.r));
        hi.add(-std::log(f.q));
        all_converged = all_converged && f.converged;
        iv.depth_used = std::max(iv.depth_used, f.depth);
    }
    const double scale = cfg.normalization == Normalization::PerVertex ? 1.0 / n : 1.0;
    iv.lower = scale * lo.value();
    iv.upper = scale * hi.value();
    iv.factors = std::move(factors);
    if (!all_converged)
        throw NoConvergence("free-energy bracket missed the accuracy target", iv);
    return iv;
}

namespace {

// mu estimate with a budget: on a budget hit, retry at smaller depths; give
// up (nullopt) below depth 2.
template <class MakeCounts>
std::optional<double> mu_estimate(int walk_depth, MakeCounts&& make_counts) {
    for (int depth = walk_depth; depth >= 2; depth -= 2) {
        try {
            std::vector<std::uint64_t> best;
            if (!make_counts(depth, best)) return std::nullopt; // nothing to count
            return estimate_connective_constant(best);
        } catch (const BudgetExceeded&) {
            continue;
        }
    }
    return std::nullopt;
}

RegimeReport regime_from(int max_degree, double lambda_plus,
                         const std::function<std::optional<double>()>& mu_supplier) {
    RegimeReport rep;
    rep.max_degree = max_degree;
    rep.lambda_plus = lambda_plus;
    rep.lambda_c_degree = lambda_c(static_cast<double>(max_degree));
    if (lambda_plus < rep.lambda_c_degree) {
        rep.regime = Regime::Subcritical;
        return rep;
    }
    // Not below the degree threshold; a growth estimate can only downgrade
    // the verdict to Unknown, never certify subcriticality.
    if (auto mu = mu_supplier()) {
        rep.mu_hat = *mu;
        rep.lambda_c_mu = lambda_c(*mu + 1.0);
        if (lambda_plus < *rep.lambda_c_mu) {
            rep.regime = Regime::Unknown;
            return rep;
        }
    }
    rep.regime = lambda_plus > rep.lambda_c_degree ? Regime::Supercritical : Regime::Unknown;
    return rep;
}

} // namespace

RegimeReport regime_report(const FiniteGraph& g, const ActivityMap& lambda, int walk_depth,
                           std::uint64_t budget) {
    if (lambda.size() != g.vertex_count())
        throw InvalidInput("activity count does not match vertex count");
    if (walk_depth < 1) throw InvalidInput("walk depth must be at least 1");
    auto supplier = [&]() -> std::optional<double> {
        return mu_estimate(walk_depth, [&](int depth, std::vector<std::uint64_t>& out) {
            double best = 0.0;
            bool any = false;
            FiniteGraphView view(g);
            for (int v = 0; v < static_cast<int>(g.vertex_count()); ++v) {
                WalkCounts wc = count_walks(view, v, depth, budget);
                bool nonzero = false;
                for (auto c : wc.counts) nonzero = nonzero || c > 0;
                if (!nonzero) continue;
                const double est = estimate_connective_constant(wc.counts);
                if (!any || est > best) {
                    best = est;
                    out = wc.counts;
                    any = true;
                }
            }
            return any;
        });
    };
    return regime_from(g.max_degree(), lambda.lambda_plus(), supplier);
}

RegimeReport regime_report(const PeriodicGraph& pg, int walk_depth, std::uint64_t budget) {
    if (walk_depth < 1) throw InvalidInput("walk depth must be at least 1");
    ActivityMap lam;
    lam.values = pg.activities();
    auto supplier = [&]() -> std::optional<double> {
        return mu_estimate(walk_depth, [&](int depth, std::vector<std::uint64_t>& out) {
            double best = 0.0;
            bool any = false;
            PeriodicPastView view(pg, /*remove_past=*/false);
            for (int u = 0; u < pg.domain_size(); ++u) {
                const PeriodicVertex root{Offset{}, static_cast<std::int32_t>(u)};
                WalkCounts wc = count_walks(view, root, depth, budget);
                bool nonzero = false;
                for (auto c : wc.counts) nonzero = nonzero || c > 0;
                if (!nonzero) continue;
                const double est = estimate_connective_constant(wc.counts);
                if (!any || est > best) {
                    best = est;
                    out = wc.counts;
                    any = true;
                }
            }
            return any;
        });
    };
    return regime_from(pg.max_degree(), lam.lambda_plus(), supplier);
}

} // namespace hardcore

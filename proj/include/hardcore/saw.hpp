#pragma once
// Walk trees for the hardcore model. A tree is rooted at a vertex; children
// of a walk endpoint are its live neighbors other than the vertex just
// stepped from (so no edge repeats), and a step onto a vertex already on the
// walk closes a cycle and becomes a tagged leaf. The tag compares, in the
// canonical neighbor order of the revisited vertex u, the rank of the walk's
// original exit from u against the rank of its return edge: exits earlier
// than the return fix u occupied, later fix it unoccupied. Walks are cut at
// a depth cap; a cut endpoint with any non-backtracking continuation is a
// truncated leaf, one with none is an exact free leaf.
//
// The recursive marginal
//     p(v) = 1 / (1 + lambda(v) * prod_children p(child))
// with tagged leaves pinned to 1 (unoccupied) or 0 (occupied) reproduces the
// root's unoccupied probability exactly when no leaf is truncated. With
// truncated leaves, evaluating once with every truncated leaf at 1 and once
// with every truncated leaf at 0 propagates the two endpoints of [0, 1]
// through anti-monotone steps, so the min/max of the two results is a
// certified bracket for the true marginal at every depth.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hardcore/errors.hpp"

namespace hardcore {

enum class NodeState { Free, FixedUnoccupied, FixedOccupied, Truncated };

inline const char* to_string(NodeState s) {
    switch (s) {
        case NodeState::Free: return "free";
        case NodeState::FixedUnoccupied: return "fixed_unoccupied";
        case NodeState::FixedOccupied: return "fixed_occupied";
        case NodeState::Truncated: return "truncated";
    }
    return "?";
}

enum class BoundaryCondition { AllUnoccupied, AllOccupied };

// Materialized tree node, for diagnostics and small exact checks. The
// streaming evaluator below never builds these.
struct SawNode {
    NodeState state = NodeState::Free;
    double activity = 1.0;
    std::string name; // originating vertex, for dumps
    std::vector<std::unique_ptr<SawNode>> children;
};

inline std::uint64_t node_count(const SawNode& n) {
    std::uint64_t c = 1;
    for (const auto& ch : n.children) c += node_count(*ch);
    return c;
}

inline double root_unoccupied_probability(const SawNode& n, BoundaryCondition bc) {
    switch (n.state) {
        case NodeState::FixedUnoccupied: return 1.0;
        case NodeState::FixedOccupied: return 0.0;
        case NodeState::Truncated: return bc == BoundaryCondition::AllUnoccupied ? 1.0 : 0.0;
        case NodeState::Free: break;
    }
    double prod = 1.0;
    for (const auto& ch : n.children) prod *= root_unoccupied_probability(*ch, bc);
    return 1.0 / (1.0 + n.activity * prod);
}

// Root marginal evaluated under both homogeneous boundary conditions in one
// pass. q()/r() order the pair into a bracket; `truncated` reports whether
// any leaf was cut (if not, q == r is the exact marginal).
struct BracketOut {
    double p_all_unoccupied = 1.0;
    double p_all_occupied = 1.0;
    std::uint64_t nodes = 0;
    bool truncated = false;

    double q() const { return std::min(p_all_unoccupied, p_all_occupied); }
    double r() const { return std::max(p_all_unoccupied, p_all_occupied); }
};

namespace detail {

// Streaming depth-first evaluation of one root-child subtree: O(depth)
// memory, two accumulators, no materialized nodes. Each instance owns its
// walk stack, so instances can run concurrently on different subtrees.
template <class View>
class WalkDfs {
public:
    using Vertex = typename View::Vertex;

    struct Out {
        double p_u = 1.0;
        double p_o = 1.0;
        std::uint64_t nodes = 0;
        bool truncated = false;
    };

    WalkDfs(const View& view, int cap, std::uint64_t budget)
        : view_(view), cap_(cap), budget_(budget) {
        path_.reserve(static_cast<std::size_t>(cap) + 2);
    }

    // Subtree below the walk (root, first); `first` is at tree depth 1.
    Out run_subtree(const Vertex& root, const Vertex& first) {
        path_.clear();
        path_.push_back(root);
        path_.push_back(first);
        nodes_ = 0;
        truncated_ = false;
        auto pr = node(1);
        return {pr.first, pr.second, nodes_, truncated_};
    }

private:
    int position_in_path(const Vertex& w, int depth) const {
        for (int k = 0; k < depth; ++k)
            if (path_[static_cast<std::size_t>(k)] == w) return k;
        return -1;
    }

    void charge_node() {
        if (++nodes_ > budget_) throw BudgetExceeded("walk-tree node budget exceeded");
    }

    // path_[0..depth] is the walk; evaluates the node at its endpoint.
    std::pair<double, double> node(int depth) {
        charge_node();
        const Vertex cur = path_[static_cast<std::size_t>(depth)];
        const Vertex prev = path_[static_cast<std::size_t>(depth - 1)];
        const double lam = view_.activity(cur);

        if (depth == cap_) {
            bool has_continuation = false;
            view_.for_each_neighbor(cur, [&](const Vertex& w) {
                if (!(w == prev)) has_continuation = true;
            });
            if (has_continuation) {
                truncated_ = true;
                return {1.0, 0.0};
            }
            const double p = 1.0 / (1.0 + lam);
            return {p, p}; // walk cannot continue: exact leaf even at the cap
        }

        double prod_u = 1.0;
        double prod_o = 1.0;
        view_.for_each_neighbor(cur, [&](const Vertex& w) {
            if (w == prev) return;
            // A fixed-occupied tag zeroes both accumulators for good;
            // remaining siblings cannot change the value.
            if (prod_u == 0.0 && prod_o == 0.0) return;
            const int k = position_in_path(w, depth);
            if (k >= 0) {
                charge_node(); // tagged leaf
                const Vertex& u = path_[static_cast<std::size_t>(k)];
                const int exit_rank = view_.neighbor_rank(u, path_[static_cast<std::size_t>(k + 1)]);
                const int return_rank = view_.neighbor_rank(u, cur);
                if (exit_rank < return_rank) {
                    prod_u = 0.0;
                    prod_o = 0.0;
                }
                // exit after return: fixed unoccupied, multiplies by 1
            } else {
                path_.push_back(w);
                const auto child = node(depth + 1);
                path_.pop_back();
                prod_u *= child.first;
                prod_o *= child.second;
            }
        });
        return {1.0 / (1.0 + lam * prod_u), 1.0 / (1.0 + lam * prod_o)};
    }

    const View& view_;
    int cap_;
    std::uint64_t budget_;
    std::vector<Vertex> path_;
    std::uint64_t nodes_ = 0;
    bool truncated_ = false;
};

} // namespace detail

// Certified bracket for the root's unoccupied marginal from one tree build.
//
// The root's child subtrees are independent, so they are evaluated by
// separate WalkDfs instances and combined in canonical child order; with
// threads > 1 the subtrees run concurrently but the combination order, and
// therefore every floating-point result, is identical to the sequential run.
// The node budget bounds each subtree individually and the final total, so
// budget aborts are also independent of the thread count (the lowest-index
// offending subtree wins).
template <class View>
BracketOut evaluate_root_bracket(const View& view, const typename View::Vertex& root,
                                 int depth_cap, std::uint64_t node_budget, int threads = 1) {
    using Vertex = typename View::Vertex;
    using Out = typename detail::WalkDfs<View>::Out;

    if (node_budget == 0) throw BudgetExceeded("walk-tree node budget is zero");

    const double lam = view.activity(root);
    std::vector<Vertex> children;
    view.for_each_neighbor(root, [&](const Vertex& w) { children.push_back(w); });

    if (children.empty()) {
        const double p = 1.0 / (1.0 + lam);
        return {p, p, 1, false};
    }
    if (depth_cap <= 0) return {1.0, 0.0, 1, true}; // root itself is cut

    std::vector<Out> outs(children.size());
    std::vector<std::exception_ptr> errs(children.size());

    auto run_one = [&](std::size_t k) {
        try {
            detail::WalkDfs<View> dfs(view, depth_cap, node_budget);
            outs[k] = dfs.run_subtree(root, children[k]);
        } catch (...) {
            errs[k] = std::current_exception();
        }
    };

    const int workers = std::min<int>(threads, static_cast<int>(children.size()));
    if (workers <= 1) {
        for (std::size_t k = 0; k < children.size(); ++k) {
            run_one(k);
            if (errs[k]) break; // later siblings cannot rescue the build
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < children.size(); k = next.fetch_add(1))
                    run_one(k);
            });
        for (auto& th : pool) th.join();
    }

    for (std::size_t k = 0; k < children.size(); ++k)
        if (errs[k]) std::rethrow_exception(errs[k]);

    double prod_u = 1.0, prod_o = 1.0;
    std::uint64_t total = 1;
    bool truncated = false;
    for (const Out& o : outs) {
        prod_u *= o.p_u;
        prod_o *= o.p_o;
        total += o.nodes;
        truncated = truncated || o.truncated;
    }
    if (total > node_budget) throw BudgetExceeded("walk-tree node budget exceeded");

    return {1.0 / (1.0 + lam * prod_u), 1.0 / (1.0 + lam * prod_o), total, truncated};
}

// Materialized tree build (diagnostics; applies no evaluation shortcuts, so
// node counts here are the full tree size).
template <class View>
std::unique_ptr<SawNode> build_tsaw(const View& view, const typename View::Vertex& root,
                                    int depth_cap, std::uint64_t node_budget) {
    using Vertex = typename View::Vertex;

    struct Builder {
        const View& view;
        int cap;
        std::uint64_t budget;
        std::uint64_t nodes = 0;
        std::vector<Vertex> path;

        void charge() {
            if (++nodes > budget) throw BudgetExceeded("walk-tree node budget exceeded");
        }

        std::unique_ptr<SawNode> make(int depth) {
            charge();
            const Vertex cur = path[static_cast<std::size_t>(depth)];
            auto n = std::make_unique<SawNode>();
            n->activity = view.activity(cur);
            n->name = view.label(cur);

            std::vector<Vertex> nbrs;
            view.for_each_neighbor(cur, [&](const Vertex& w) {
                if (depth == 0 || !(w == path[static_cast<std::size_t>(depth - 1)]))
                    nbrs.push_back(w);
            });

            if (depth == cap) {
                n->state = nbrs.empty() ? NodeState::Free : NodeState::Truncated;
                return n;
            }
            n->state = NodeState::Free;
            for (const Vertex& w : nbrs) {
                int k = -1;
                for (int j = 0; j < depth; ++j)
                    if (path[static_cast<std::size_t>(j)] == w) { k = j; break; }
                if (k >= 0) {
                    charge();
                    auto leaf = std::make_unique<SawNode>();
                    leaf->activity = view.activity(w);
                    leaf->name = view.label(w);
                    const Vertex& u = path[static_cast<std::size_t>(k)];
                    const int exit_rank = view.neighbor_rank(u, path[static_cast<std::size_t>(k + 1)]);
                    const int return_rank = view.neighbor_rank(u, cur);
                    leaf->state = exit_rank < return_rank ? NodeState::FixedOccupied
                                                          : NodeState::FixedUnoccupied;
                    n->children.push_back(std::move(leaf));
                } else {
                    path.push_back(w);
                    n->children.push_back(make(depth + 1));
                    path.pop_back();
                }
            }
            return n;
        }
    };

    Builder b{view, depth_cap, node_budget, 0, {}};
    b.path.push_back(root);
    return b.make(0);
}

// Self-avoiding-walk counts from `root`: counts[k-1] is the number of walks
// with exactly k edges and pairwise-distinct vertices, 1 <= k <= max_len.
struct WalkCounts {
    std::vector<std::uint64_t> counts;
    std::uint64_t work = 0;
};

template <class View>
WalkCounts count_walks(const View& view, const typename View::Vertex& root, int max_len,
                       std::uint64_t budget) {
    using Vertex = typename View::Vertex;

    struct Counter {
        const View& view;
        int max_len;
        std::uint64_t budget;
        std::uint64_t work = 0;
        std::vector<Vertex> path;
        std::vector<std::uint64_t> counts;

        void extend(int depth) {
            if (depth == max_len) return;
            // By value: push_back below may reallocate `path` while the
            // view is still reading this vertex between callbacks.
            const Vertex cur = path[static_cast<std::size_t>(depth)];
            view.for_each_neighbor(cur, [&](const Vertex& w) {
                for (const Vertex& p : path)
                    if (p == w) return;
                if (++work > budget) throw BudgetExceeded("walk-count budget exceeded");
                ++counts[static_cast<std::size_t>(depth)];
                path.push_back(w);
                extend(depth + 1);
                path.pop_back();
            });
        }
    };

    Counter c{view, max_len, budget, 0, {}, {}};
    c.counts.assign(static_cast<std::size_t>(max_len), 0);
    c.path.push_back(root);
    c.extend(0);
    return {std::move(c.counts), c.work};
}

} // namespace hardcore

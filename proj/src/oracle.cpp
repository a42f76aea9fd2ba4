#include "hardcore/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>
#include <vector>

#include "hardcore/errors.hpp"

namespace hardcore {

namespace {

// Primitivity (strong connectivity + aperiodicity) of the support digraph;
// power iteration converges to the Perron root exactly for primitive
// matrices, so anything else is refused rather than silently mis-averaged.
bool is_primitive(const std::vector<std::vector<double>>& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<int>> fwd(n), bwd(n);
    bool any_edge = false;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m[i][j] != 0.0) {
                fwd[i].push_back(static_cast<int>(j));
                bwd[j].push_back(static_cast<int>(i));
                any_edge = true;
            }
    if (!any_edge) return false;

    auto reach_all = [&](const std::vector<std::vector<int>>& adj) {
        std::vector<std::uint8_t> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        std::size_t cnt = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    ++cnt;
                    stack.push_back(w);
                }
        }
        return cnt == n;
    };
    if (!reach_all(fwd) || !reach_all(bwd)) return false;

    // Period = gcd over edges (u,v) of level(u) + 1 - level(v) for BFS levels
    // from any root; aperiodic means period 1.
    std::vector<int> level(n, -1);
    std::vector<int> queue{0};
    level[0] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (int w : fwd[static_cast<std::size_t>(v)])
            if (level[static_cast<std::size_t>(w)] < 0) {
                level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(v)] + 1;
                queue.push_back(w);
            }
    }
    long long g = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (int j : fwd[i])
            g = std::gcd(g, static_cast<long long>(level[i]) + 1 - level[static_cast<std::size_t>(j)]);
    return g == 1;
}

} // namespace

double power_iteration(const std::vector<std::vector<double>>& m) {
    const std::size_t n = m.size();
    if (n == 0) throw InvalidInput("matrix must be nonempty");
    for (const auto& row : m) {
        if (row.size() != n) throw InvalidInput("matrix must be square");
        for (double x : row)
            if (!(x >= 0.0) || !std::isfinite(x))
                throw InvalidInput("matrix entries must be nonnegative and finite");
    }
    if (!is_primitive(m))
        throw OracleUnsupported("matrix is not primitive (reducible or periodic support)");

    std::vector<double> v(n, 1.0), w(n, 0.0);
    double rq = 0.0;
    const double tol = 1e-12;
    for (int iter = 0; iter < 200000; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += m[i][j] * v[j];
            w[i] = s;
        }
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += v[i] * w[i];
            den += v[i] * v[i];
        }
        rq = num / den;
        double resid = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            resid = std::max(resid, std::abs(w[i] - rq * v[i]));
            scale = std::max(scale, std::abs(v[i]));
        }
        if (resid <= tol * std::max(1.0, rq) * scale) return rq;
        double norm = 0.0;
        for (double x : w) norm = std::max(norm, std::abs(x));
        if (norm == 0.0) return 0.0; // nilpotent cannot be primitive; defensive
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    }
    throw OracleUnsupported("power iteration did not converge");
}

namespace {

// Symmetric half of the cross relations: the lexicographically positive
// representatives, taken straight from the input description.
std::vector<CrossEdge> positive_cross(const PeriodicGraph& pg) {
    std::vector<CrossEdge> out;
    for (const CrossEdge& e : pg.cross_edges())
        if (!lex_past(e.delta, pg.dimension())) out.push_back(e);
    return out;
}

// Backtracking enumeration of the independent subsets of a small vertex set
// under an explicit edge list, as bitmasks.
std::vector<std::uint32_t> independent_masks(int size, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::uint32_t> conflict(static_cast<std::size_t>(size), 0);
    for (auto [a, b] : edges) {
        conflict[static_cast<std::size_t>(std::max(a, b))] |= 1u << std::min(a, b);
    }
    std::vector<std::uint32_t> states;
    std::uint32_t cur = 0;
    auto rec = [&](auto&& self, int v) -> void {
        if (v == size) {
            states.push_back(cur);
            return;
        }
        self(self, v + 1);
        if ((cur & conflict[static_cast<std::size_t>(v)]) == 0) {
            cur |= 1u << v;
            self(self, v + 1);
            cur &= ~(1u << v);
        }
    };
    rec(rec, 0);
    return states;
}

// Perron root of the transfer matrix over `states`, where x -> y is allowed
// unless some forbidden pair (p in x, q in y) matches, and y carries its
// occupation weight.
double transfer_perron(const std::vector<std::uint32_t>& states,
                       const std::vector<std::pair<int, int>>& forbidden,
                       const std::vector<double>& site_weight) {
    const std::size_t s = states.size();
    if (s > 4096) throw OracleUnsupported("transfer state space too large for a dense oracle");
    std::vector<double> weight(s, 1.0);
    for (std::size_t x = 0; x < s; ++x)
        for (std::size_t i = 0; i < site_weight.size(); ++i)
            if (states[x] >> i & 1u) weight[x] *= site_weight[i];

    std::vector<std::uint32_t> block(s, 0); // OR of q-bits triggered by state x
    for (std::size_t x = 0; x < s; ++x) {
        std::uint32_t f = 0;
        for (auto [p, q] : forbidden)
            if (states[x] >> p & 1u) f |= 1u << q;
        block[x] = f;
    }

    std::vector<std::vector<double>> t(s, std::vector<double>(s, 0.0));
    for (std::size_t x = 0; x < s; ++x)
        for (std::size_t y = 0; y < s; ++y)
            if ((block[x] & states[y]) == 0) t[x][y] = weight[y];
    return power_iteration(t);
}

} // namespace

double transfer_free_energy_1d(const PeriodicGraph& pg) {
    if (pg.dimension() != 1)
        throw InvalidInput("transfer oracle handles one-dimensional graphs only");
    const int n = pg.domain_size();
    const auto cross = positive_cross(pg);
    int span = 0;
    for (const CrossEdge& e : cross) span = std::max(span, static_cast<int>(e.delta[0]));

    // Group b = max offset cells into one block so every interaction is
    // internal or reaches exactly the next block.
    const int b = std::max(1, span);
    const int size = b * n;
    if (size > 24) throw OracleUnsupported("blocked domain too large for a dense transfer");
    auto flat = [n](int cell, int u) { return cell * n + u; };

    std::vector<std::pair<int, int>> inside;
    std::vector<std::pair<int, int>> between; // (index in block t, index in block t+1)
    for (int c = 0; c < b; ++c)
        for (auto [u, v] : pg.internal_edges()) inside.emplace_back(flat(c, u), flat(c, v));
    for (const CrossEdge& e : cross) {
        const int d0 = static_cast<int>(e.delta[0]);
        for (int c = 0; c < b; ++c) {
            if (c + d0 < b)
                inside.emplace_back(flat(c, e.u), flat(c + d0, e.v));
            else
                between.emplace_back(flat(c, e.u), flat(c + d0 - b, e.v));
        }
    }

    std::vector<double> site_weight(static_cast<std::size_t>(size));
    for (int c = 0; c < b; ++c)
        for (int u = 0; u < n; ++u)
            site_weight[static_cast<std::size_t>(flat(c, u))] = pg.activity(u);

    const auto states = independent_masks(size, inside);
    const double perron = transfer_perron(states, between, site_weight);
    return std::log(perron) / size;
}

std::pair<double, double> strip_free_energy_2d(const PeriodicGraph& pg, int width) {
    if (pg.dimension() != 2)
        throw InvalidInput("strip oracle handles two-dimensional graphs only");
    if (width < 1) throw InvalidInput("strip width must be positive");
    const int n = pg.domain_size();
    const auto cross = positive_cross(pg);
    int span1 = 0, span2 = 0;
    for (const CrossEdge& e : cross) {
        span1 = std::max(span1, std::abs(static_cast<int>(e.delta[0])));
        span2 = std::max(span2, std::abs(static_cast<int>(e.delta[1])));
    }
    const int b1 = std::max(1, span1);
    const int b2 = std::max(1, span2);
    const int rows = width * b2; // original cells across the strip
    const int size = b1 * rows * n;
    if (size > 26) throw OracleUnsupported("strip column too large for a dense transfer");

    // Column layout: x1 in [0, b1) within the transfer step, x2 in [0, rows).
    auto flat = [rows, n](int x1, int x2, int u) { return (x1 * rows + x2) * n + u; };

    // One transfer matrix per transverse boundary condition. Narrow wrapped
    // strips can identify a site with its own transverse neighbor or merge
    // the two transverse neighbors; the simple-graph quotient applies (loops
    // dropped, parallel edges collapsed), so width 1 degenerates to the
    // one-dimensional chain under both boundary conditions.
    auto build = [&](bool wrap) -> double {
        std::set<std::pair<int, int>> inside_set;
        std::set<std::pair<int, int>> between_set;
        auto place = [&](int x1, int x2, int u, int dx1, int dx2, int v) {
            int y2 = x2 + dx2;
            if (wrap)
                y2 = ((y2 % rows) + rows) % rows;
            else if (y2 < 0 || y2 >= rows)
                return;
            const int y1 = x1 + dx1;
            if (y1 < b1) {
                const int a = flat(x1, x2, u);
                const int b = flat(y1, y2, v);
                if (a != b) inside_set.insert(std::minmax(a, b));
            } else {
                between_set.insert({flat(x1, x2, u), flat(y1 - b1, y2, v)});
            }
        };
        for (int x1 = 0; x1 < b1; ++x1)
            for (int x2 = 0; x2 < rows; ++x2) {
                for (auto [u, v] : pg.internal_edges()) place(x1, x2, u, 0, 0, v);
                for (const CrossEdge& e : cross)
                    place(x1, x2, e.u, static_cast<int>(e.delta[0]),
                          static_cast<int>(e.delta[1]), e.v);
            }
        // Lex-positive representatives have delta_1 >= 0, so `between` only
        // ever points at the next column, as a transfer matrix needs.
        const std::vector<std::pair<int, int>> inside(inside_set.begin(), inside_set.end());
        const std::vector<std::pair<int, int>> between(between_set.begin(), between_set.end());
        std::vector<double> site_weight(static_cast<std::size_t>(size));
        for (int x1 = 0; x1 < b1; ++x1)
            for (int x2 = 0; x2 < rows; ++x2)
                for (int u = 0; u < n; ++u)
                    site_weight[static_cast<std::size_t>(flat(x1, x2, u))] = pg.activity(u);
        const auto states = independent_masks(size, inside);
        const double perron = transfer_perron(states, between, site_weight);
        return std::log(perron) / size;
    };

    const double f_free = build(false);
    const double f_wrap = build(true);
    return {std::min(f_free, f_wrap), std::max(f_free, f_wrap)};
}

std::uint64_t count_matchings(const FiniteGraph& g) {
    const int n = static_cast<int>(g.vertex_count());
    std::vector<std::uint8_t> used(static_cast<std::size_t>(n), 0);
    // Decide vertices in index order: leave the current one unmatched or
    // match it to a free higher-indexed neighbor; each matching is produced
    // exactly once.
    auto rec = [&](auto&& self, int v) -> std::uint64_t {
        while (v < n && used[static_cast<std::size_t>(v)]) ++v;
        if (v == n) return 1;
        used[static_cast<std::size_t>(v)] = 1;
        std::uint64_t total = self(self, v + 1);
        for (int w : g.neighbors(v)) {
            if (w <= v || used[static_cast<std::size_t>(w)]) continue;
            used[static_cast<std::size_t>(w)] = 1;
            total += self(self, v + 1);
            used[static_cast<std::size_t>(w)] = 0;
        }
        used[static_cast<std::size_t>(v)] = 0;
        return total;
    };
    return rec(rec, 0);
}

namespace {

void check_box_size(int symbols, int length) {
    if (length < 1) throw InvalidInput("box length must be at least 1");
    double bits = length * std::log2(static_cast<double>(std::max(symbols, 2)));
    if (bits > 62.0) throw OracleUnsupported("box too large to count in 64-bit integers");
}

} // namespace

std::uint64_t box_configuration_count(const TransitionSystem& ts, int length) {
    ts.validate();
    if (ts.d != 1) throw InvalidInput("box counting oracle handles dimension 1 only");
    check_box_size(ts.symbol_count(), length);
    const auto& m = ts.matrices[0];
    const int k = ts.symbol_count();
    auto rec = [&](auto&& self, int pos, int prev) -> std::uint64_t {
        if (pos == length) return 1;
        std::uint64_t total = 0;
        for (int a = 0; a < k; ++a)
            if (pos == 0 || m[static_cast<std::size_t>(prev)][static_cast<std::size_t>(a)] == 1)
                total += self(self, pos + 1, a);
        return total;
    };
    return rec(rec, 0, -1);
}

std::uint64_t box_count_via_safe_split(const TransitionSystem& ts, int length) {
    ts.validate();
    if (ts.d != 1) throw InvalidInput("box counting oracle handles dimension 1 only");
    check_box_size(ts.symbol_count(), length);
    const auto& m = ts.matrices[0];
    const int k = ts.symbol_count();

    // Independent safe scan (deliberately not the reduction module's).
    std::vector<int> unsafe;
    std::uint64_t n_safe = 0;
    for (int s = 0; s < k; ++s) {
        bool all_ones = true;
        for (int b = 0; b < k; ++b)
            all_ones = all_ones &&
                       m[static_cast<std::size_t>(s)][static_cast<std::size_t>(b)] == 1 &&
                       m[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)] == 1;
        if (all_ones)
            ++n_safe;
        else
            unsafe.push_back(s);
    }

    // Sum over placements of unsafe symbols; every cell left free contributes
    // a factor n_safe (any safe symbol may fill it, compatibly with
    // everything). prev == -1 encodes "previous cell free".
    auto rec = [&](auto&& self, int pos, int prev) -> std::uint64_t {
        if (pos == length) return 1;
        std::uint64_t total = n_safe * self(self, pos + 1, -1);
        for (int a : unsafe)
            if (prev < 0 || m[static_cast<std::size_t>(prev)][static_cast<std::size_t>(a)] == 1)
                total += self(self, pos + 1, a);
        return total;
    };
    return rec(rec, 0, -1);
}

} // namespace hardcore

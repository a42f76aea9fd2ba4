#pragma once
// Certified interval results shared by the counting engine and the
// reductions built on top of it.

#include <vector>

namespace hardcore {

// Certified bracket q <= p_i <= r for the root-unoccupied marginal of the
// i-th reduced graph, obtained from a walk tree evaluated at depth `depth`.
struct FactorBracket {
    int index = 0;
    double q = 0.0;        // lower bound on the marginal
    double r = 0.0;        // upper bound on the marginal
    int depth = 0;         // tree depth the bracket was evaluated at
    bool converged = true; // reached its width target (or was exact)
};

enum class Normalization { PerVertex, PerGroupElement };

inline const char* to_string(Normalization n) {
    return n == Normalization::PerVertex ? "per_vertex" : "per_group_element";
}

// A [lower, upper] bracket guaranteed by construction to contain the true
// value. `certified` is cleared when the bracket is attached to a
// non-convergence report (still sound, just wider than requested).
struct CertifiedInterval {
    double lower = 0.0;
    double upper = 0.0;
    double epsilon = 0.0;  // requested accuracy
    int depth_used = 0;    // max tree depth over factors
    bool certified = true;
    Normalization normalization = Normalization::PerVertex;
    std::vector<FactorBracket> factors;

    double estimate() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
    bool contains(double x) const { return lower <= x && x <= upper; }
};

} // namespace hardcore

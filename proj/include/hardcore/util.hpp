#pragma once
// Small numeric helpers: compensated summation and the factor-product
// accumulator used when multiplying many per-vertex marginals.

#include <cmath>
#include <cstddef>

namespace hardcore {

// Kahan-Neumaier compensated sum; the correction term also captures the case
// where the addend is larger than the running sum.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Product of strictly positive factors. For many factors the direct product
// can leave the double range, so past a fixed count the accumulator works in
// log space instead; the threshold is part of the numeric contract (results
// for small instances stay bit-identical to the naive product).
class ProductAccumulator {
public:
    static constexpr std::size_t kLogSpaceThreshold = 40;

    explicit ProductAccumulator(std::size_t factor_count)
        : log_space_(factor_count > kLogSpaceThreshold) {}

    void multiply(double f) {
        if (log_space_)
            logsum_.add(std::log(f));
        else
            direct_ *= f;
    }

    bool log_space() const { return log_space_; }
    double value() const { return log_space_ ? std::exp(logsum_.value()) : direct_; }
    double log_value() const { return log_space_ ? logsum_.value() : std::log(direct_); }

private:
    bool log_space_;
    double direct_ = 1.0;
    CompensatedSum logsum_;
};

} // namespace hardcore

#pragma once

#include <vector>

#include "fjlab/graph.hpp"

namespace fjlab {

/// Compensated summation; result is independent of how additions are
/// grouped only if the add order is fixed, which the callers guarantee.
class KahanAccumulator {
  public:
    void add(double x) {
        const double y = x - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Product-moment correlation; throws ZeroVariance when either input is
/// constant and InvalidArgument for mismatched or short inputs.
double pearson(const Vector& x, const Vector& y);

/// Average ranks (ties share the mean of their positions), 1-based.
Vector averageRanks(const Vector& x);

/// Pearson correlation of average ranks.
double spearman(const Vector& x, const Vector& y);

/// Fraction of indices appearing in the top k of both vectors; ties break
/// toward the smaller index so the result is deterministic.
double topKOverlap(const Vector& x, const Vector& y, int k);

struct Histogram {
    std::vector<double> edges;          ///< bins + 1 ascending values
    std::vector<long long> counts;      ///< per bin; sums to the sample size
};

/// Uniform bins over [min, max]; the last bin is right-closed. Constant
/// samples land in the first bin. Throws EmptySample for empty input and
/// InvalidArgument for nonfinite samples or bins < 1.
Histogram histogram(const std::vector<double>& samples, int bins);

struct LeastSquares {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = slope * x + intercept; ZeroVariance when x
/// is constant.
LeastSquares leastSquaresFit(const Vector& x, const Vector& y);

}  // namespace fjlab

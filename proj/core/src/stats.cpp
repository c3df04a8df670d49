#include "fjlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fjlab/errors.hpp"

namespace fjlab {

namespace {

void requirePair(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::InvalidArgument, "vector lengths differ");
    }
    if (x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument,
                    "need at least 2 observations");
    }
}

}  // namespace

double pearson(const Vector& x, const Vector& y) {
    requirePair(x, y);
    const auto n = x.size();
    const double mx = x.mean();
    const double my = y.mean();
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(ErrorCode::ZeroVariance, "constant input to correlation");
    }
    return sxy / std::sqrt(sxx * syy);
}

Vector averageRanks(const Vector& x) {
    const auto n = x.size();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return a < b;
    });
    Vector ranks(n);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double spearman(const Vector& x, const Vector& y) {
    requirePair(x, y);
    return pearson(averageRanks(x), averageRanks(y));
}

double topKOverlap(const Vector& x, const Vector& y, int k) {
    if (x.size() != y.size()) {
        throw Error(ErrorCode::InvalidArgument, "vector lengths differ");
    }
    if (k < 1 || k > x.size()) {
        throw Error(ErrorCode::InvalidArgument, "k out of range");
    }
    const auto top = [k](const Vector& v) {
        std::vector<int> order(static_cast<std::size_t>(v.size()));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (v[a] != v[b]) return v[a] > v[b];
            return a < b;
        });
        order.resize(static_cast<std::size_t>(k));
        std::sort(order.begin(), order.end());
        return order;
    };
    const auto tx = top(x);
    const auto ty = top(y);
    std::vector<int> common;
    std::set_intersection(tx.begin(), tx.end(), ty.begin(), ty.end(),
                          std::back_inserter(common));
    return static_cast<double>(common.size()) / static_cast<double>(k);
}

Histogram histogram(const std::vector<double>& samples, int bins) {
    if (bins < 1) {
        throw Error(ErrorCode::InvalidArgument, "bins must be >= 1");
    }
    if (samples.empty()) {
        throw Error(ErrorCode::EmptySample, "histogram of empty sample");
    }
    for (double v : samples) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument,
                        "histogram requires finite samples");
        }
    }
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) {
        h.edges[static_cast<std::size_t>(b)] =
            lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    }
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    const double width = hi - lo;
    for (double v : samples) {
        int idx = 0;
        if (width > 0.0) {
            idx = static_cast<int>((v - lo) / width * static_cast<double>(bins));
            idx = std::clamp(idx, 0, bins - 1);
        }
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    return h;
}

LeastSquares leastSquaresFit(const Vector& x, const Vector& y) {
    requirePair(x, y);
    const double mx = x.mean();
    const double my = y.mean();
    double sxx = 0.0, sxy = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw Error(ErrorCode::ZeroVariance, "constant abscissa in fit");
    }
    LeastSquares fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

}  // namespace fjlab

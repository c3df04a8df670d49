#ifndef FJLAB_GRAPH_HPP
#define FJLAB_GRAPH_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fjlab/errors.hpp"

namespace fjlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sentinel for an unreachable pair in hop-distance matrices. Kept integral
/// so exact distances never pass through floating point.
inline constexpr std::int64_t kInfiniteDistance =
    std::numeric_limits<std::int64_t>::max();

/// Row-stochastic rows may deviate from exact unit sum by at most this much.
inline constexpr double kRowSumTolerance = 1e-12;

/// A directed influence network: nonnegative weights with unit row sums.
/// W(i, j) is the weight node i places on node j's opinion. Immutable after
/// construction, safe to share across threads.
class InfluenceSystem {
public:
    /// Validates and adopts a weight matrix. Throws NegativeWeight or
    /// RowSumViolation (tolerance kRowSumTolerance) on bad input.
    static InfluenceSystem fromWeights(Matrix weights,
                                       std::vector<std::string> labels = {});

    /// Builds W = D^{-1} A from a symmetric 0/1 adjacency matrix.
    /// Throws AsymmetricAdjacency, IsolatedNode, or InvalidArgument.
    static InfluenceSystem randomWalk(const Matrix& adjacency,
                                      std::vector<std::string> labels = {});

    int size() const { return n_; }
    const Matrix& weights() const { return w_; }
    bool hasEdge(int i, int j) const { return w_(i, j) > 0.0; }
    int outDegree(int i) const { return static_cast<int>(out_[i].size()); }

    /// Support out-neighbourhoods N+(i), ascending node index.
    const std::vector<std::vector<int>>& outNeighbors() const { return out_; }
    /// Support in-neighbourhoods N-(i), ascending node index.
    const std::vector<std::vector<int>>& inNeighbors() const { return in_; }

    /// Empty unless labels were supplied; otherwise one label per node.
    const std::vector<std::string>& nodeLabels() const { return labels_; }

    /// True when the support is symmetric and every weight equals
    /// 1/outdeg(i) within tolerance, i.e. W is the random walk on an
    /// undirected graph. Degree-based spectral routines require this.
    bool isRandomWalk(double tolerance = 1e-12) const;

private:
    InfluenceSystem(Matrix w, std::vector<std::string> labels);

    int n_;
    Matrix w_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<std::string> labels_;
};

/// Dense matrix of pairwise hop counts with kInfiniteDistance for
/// unreachable pairs.
class DistanceMatrix {
public:
    DistanceMatrix() : n_(0) {}
    explicit DistanceMatrix(int n)
        : n_(n), d_(static_cast<std::size_t>(n) * n, kInfiniteDistance) {}

    int size() const { return n_; }
    std::int64_t operator()(int i, int j) const {
        return d_[static_cast<std::size_t>(i) * n_ + j];
    }
    std::int64_t at(int i, int j) const {
        return d_[static_cast<std::size_t>(i) * n_ + j];
    }
    std::int64_t& at(int i, int j) {
        return d_[static_cast<std::size_t>(i) * n_ + j];
    }
    bool reachable(int i, int j) const {
        return (*this)(i, j) != kInfiniteDistance;
    }

    /// Transposes the matrix; used for reception-side (in-) variants.
    DistanceMatrix transposed() const;

private:
    int n_;
    std::vector<std::int64_t> d_;
};

/// All-pairs BFS hop distances over the support digraph.
DistanceMatrix directedDistances(const InfluenceSystem& system,
                                 int threads = 1);

/// Single-source BFS row of hop distances.
std::vector<std::int64_t> bfsDistances(const InfluenceSystem& system,
                                       int source);

/// Vertices j != i with a directed path i -> j, ascending.
std::vector<int> outReachability(const InfluenceSystem& system, int i);
std::vector<int> outReachability(const DistanceMatrix& distances, int i);

/// Harmonic-free closeness |R+(i)| / sum of hop distances into R+(i);
/// zero when nothing is reachable. Always in [0, 1].
double outCloseness(const InfluenceSystem& system, int i);
double outCloseness(const DistanceMatrix& distances, int i);

/// Strongly connected components of a digraph given as adjacency lists.
/// Components are emitted in reverse topological order of the condensation;
/// each component lists its vertices ascending.
std::vector<std::vector<int>> stronglyConnectedComponents(
    const std::vector<std::vector<int>>& adjacency);

/// Compressed sparse row view of a dense matrix, for matvec-heavy loops on
/// sparse instances. Products agree with dense evaluation to roundoff, not
/// bitwise (summation order differs).
struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    static CsrMatrix fromDense(const Matrix& dense, double drop_below = 0.0);
    Vector multiply(const Vector& x) const;
    double density() const {
        return rows == 0 || cols == 0
                   ? 0.0
                   : static_cast<double>(val.size()) / (static_cast<double>(rows) * cols);
    }
};

}  // namespace fjlab

#endif

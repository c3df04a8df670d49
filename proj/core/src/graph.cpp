#include "fjlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "fjlab/parallel.hpp"

namespace fjlab {

const char* errorCodeName(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NegativeWeight: return "NegativeWeight";
        case ErrorCode::RowSumViolation: return "RowSumViolation";
        case ErrorCode::IsolatedNode: return "IsolatedNode";
        case ErrorCode::AsymmetricAdjacency: return "AsymmetricAdjacency";
        case ErrorCode::EmptyBoundary: return "EmptyBoundary";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotWellPosed: return "NotWellPosed";
        case ErrorCode::NeumannNotConverged: return "NeumannNotConverged";
        case ErrorCode::NotRandomWalkSystem: return "NotRandomWalkSystem";
        case ErrorCode::SpectralGapViolation: return "SpectralGapViolation";
        case ErrorCode::NotInterior: return "NotInterior";
        case ErrorCode::PartitionMismatch: return "PartitionMismatch";
        case ErrorCode::PowerIterationDiverged: return "PowerIterationDiverged";
        case ErrorCode::CapReached: return "CapReached";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::AllRunsIllPosed: return "AllRunsIllPosed";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

InfluenceSystem::InfluenceSystem(Matrix w, std::vector<std::string> labels)
    : n_(static_cast<int>(w.rows())), w_(std::move(w)), labels_(std::move(labels)) {
    out_.resize(n_);
    in_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            if (w_(i, j) > 0.0) {
                out_[i].push_back(j);
                in_[j].push_back(i);
            }
        }
    }
}

InfluenceSystem InfluenceSystem::fromWeights(Matrix weights,
                                             std::vector<std::string> labels) {
    const auto n = weights.rows();
    if (n == 0 || weights.cols() != n) {
        throw Error(ErrorCode::InvalidArgument,
                    "weight matrix must be square and non-empty");
    }
    if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "label count does not match node count");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = weights(i, j);
            if (!(v >= 0.0)) {
                std::ostringstream msg;
                msg << "negative or non-finite weight at (" << i << ", " << j
                    << "): " << v;
                throw Error(ErrorCode::NegativeWeight, msg.str());
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
            std::ostringstream msg;
            msg << "row " << i << " sums to " << sum << ", expected 1 within "
                << kRowSumTolerance;
            throw Error(ErrorCode::RowSumViolation, msg.str());
        }
    }
    return InfluenceSystem(std::move(weights), std::move(labels));
}

InfluenceSystem InfluenceSystem::randomWalk(const Matrix& adjacency,
                                            std::vector<std::string> labels) {
    const auto n = adjacency.rows();
    if (n == 0 || adjacency.cols() != n) {
        throw Error(ErrorCode::InvalidArgument,
                    "adjacency matrix must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double a = adjacency(i, j);
            if (a != 0.0 && a != 1.0) {
                std::ostringstream msg;
                msg << "adjacency entry (" << i << ", " << j
                    << ") is not 0 or 1: " << a;
                throw Error(ErrorCode::InvalidArgument, msg.str());
            }
            if (adjacency(i, j) != adjacency(j, i)) {
                std::ostringstream msg;
                msg << "adjacency is not symmetric at (" << i << ", " << j << ")";
                throw Error(ErrorCode::AsymmetricAdjacency, msg.str());
            }
        }
    }
    Matrix w(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double degree = adjacency.row(i).sum();
        if (degree == 0.0) {
            std::ostringstream msg;
            msg << "node " << i << " has degree zero";
            throw Error(ErrorCode::IsolatedNode, msg.str());
        }
        w.row(i) = adjacency.row(i) / degree;
    }
    return InfluenceSystem(std::move(w), std::move(labels));
}

bool InfluenceSystem::isRandomWalk(double tolerance) const {
    for (int i = 0; i < n_; ++i) {
        const double degree = static_cast<double>(outDegree(i));
        for (int j : out_[i]) {
            if (!hasEdge(j, i)) return false;
            if (std::abs(w_(i, j) - 1.0 / degree) > tolerance) return false;
        }
    }
    return true;
}

DistanceMatrix DistanceMatrix::transposed() const {
    DistanceMatrix t(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) t.at(j, i) = (*this)(i, j);
    return t;
}

std::vector<std::int64_t> bfsDistances(const InfluenceSystem& system,
                                       int source) {
    const int n = system.size();
    std::vector<std::int64_t> dist(n, kInfiniteDistance);
    dist[source] = 0;
    std::deque<int> queue{source};
    const auto& out = system.outNeighbors();
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : out[u]) {
            if (dist[v] == kInfiniteDistance) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

DistanceMatrix directedDistances(const InfluenceSystem& system, int threads) {
    const int n = system.size();
    DistanceMatrix d(n);
    parallelFor(n, threads, [&](int i) {
        const auto row = bfsDistances(system, i);
        for (int j = 0; j < n; ++j) d.at(i, j) = row[j];
    });
    return d;
}

std::vector<int> outReachability(const InfluenceSystem& system, int i) {
    const auto row = bfsDistances(system, i);
    std::vector<int> reach;
    for (int j = 0; j < system.size(); ++j) {
        if (j != i && row[j] != kInfiniteDistance) reach.push_back(j);
    }
    return reach;
}

std::vector<int> outReachability(const DistanceMatrix& distances, int i) {
    std::vector<int> reach;
    for (int j = 0; j < distances.size(); ++j) {
        if (j != i && distances.reachable(i, j)) reach.push_back(j);
    }
    return reach;
}

namespace {

double closenessFromRow(const std::vector<std::int64_t>& row, int i) {
    std::int64_t total = 0;
    int reached = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (static_cast<int>(j) == i || row[j] == kInfiniteDistance) continue;
        total += row[j];
        ++reached;
    }
    if (reached == 0) return 0.0;
    return static_cast<double>(reached) / static_cast<double>(total);
}

}  // namespace

double outCloseness(const InfluenceSystem& system, int i) {
    return closenessFromRow(bfsDistances(system, i), i);
}

double outCloseness(const DistanceMatrix& distances, int i) {
    std::vector<std::int64_t> row(distances.size());
    for (int j = 0; j < distances.size(); ++j) row[j] = distances(i, j);
    return closenessFromRow(row, i);
}

// Iterative Tarjan; recursion depth would be O(n) otherwise.
std::vector<std::vector<int>> stronglyConnectedComponents(
    const std::vector<std::vector<int>>& adjacency) {
    const int n = static_cast<int>(adjacency.size());
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::vector<int>> components;
    int next_index = 0;

    struct Frame {
        int node;
        std::size_t edge;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            Frame& frame = call.back();
            const int u = frame.node;
            if (frame.edge < adjacency[u].size()) {
                const int v = adjacency[u][frame.edge++];
                if (index[v] == -1) {
                    index[v] = low[v] = next_index++;
                    stack.push_back(v);
                    on_stack[v] = 1;
                    call.push_back({v, 0});
                } else if (on_stack[v]) {
                    low[u] = std::min(low[u], index[v]);
                }
            } else {
                if (low[u] == index[u]) {
                    std::vector<int> component;
                    int w;
                    do {
                        w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        component.push_back(w);
                    } while (w != u);
                    std::sort(component.begin(), component.end());
                    components.push_back(std::move(component));
                }
                call.pop_back();
                if (!call.empty()) {
                    low[call.back().node] = std::min(low[call.back().node], low[u]);
                }
            }
        }
    }
    return components;
}

CsrMatrix CsrMatrix::fromDense(const Matrix& dense, double drop_below) {
    CsrMatrix m;
    m.rows = static_cast<int>(dense.rows());
    m.cols = static_cast<int>(dense.cols());
    m.row_ptr.reserve(m.rows + 1);
    m.row_ptr.push_back(0);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) {
            const double v = dense(i, j);
            if (std::abs(v) > drop_below) {
                m.col.push_back(j);
                m.val.push_back(v);
            }
        }
        m.row_ptr.push_back(static_cast<int>(m.col.size()));
    }
    return m;
}

Vector CsrMatrix::multiply(const Vector& x) const {
    if (static_cast<int>(x.size()) != cols) {
        throw Error(ErrorCode::DimensionMismatch,
                    "CSR multiply: vector length does not match columns");
    }
    Vector y = Vector::Zero(rows);
    for (int i = 0; i < rows; ++i) {
        double acc = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            acc += val[k] * x[col[k]];
        }
        y[i] = acc;
    }
    return y;
}

}  // namespace fjlab

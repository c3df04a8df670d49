#include "fjlab/broadcasting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "fjlab/parallel.hpp"

namespace fjlab {

const char* const kMeasureNames[kMeasureCount] = {
    "degree", "closeness", "betweenness", "eigenvector", "pagerank"};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSigmaCap = 9007199254740992.0;  // 2^53

bool tied(double a, double b) {
    return std::abs(a - b) <=
           kGeodesicTieTolerance * (1.0 + std::min(std::abs(a), std::abs(b)));
}

DistanceMatrix influenceDistances(const InfluenceSystem& system) {
    return directedDistances(system).transposed();
}

/// One Dijkstra pass over a dense length matrix. Settled order, geodesic
/// counts, and predecessor lists feed both logDistances and Brandes.
struct DijkstraPass {
    std::vector<double> dist;
    std::vector<double> sigma;
    std::vector<std::vector<int>> preds;
    std::vector<int> settled;  // in ascending distance order

    DijkstraPass(const Matrix& lengths, int source) {
        const int n = static_cast<int>(lengths.rows());
        dist.assign(n, kInf);
        sigma.assign(n, 0.0);
        preds.assign(n, {});
        settled.reserve(n);
        std::vector<char> done(n, 0);

        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        dist[source] = 0.0;
        sigma[source] = 1.0;
        heap.emplace(0.0, source);
        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (done[u]) continue;
            done[u] = 1;
            settled.push_back(u);
            for (int v = 0; v < n; ++v) {
                const double len = lengths(u, v);
                if (!(len < kInf) || done[v]) continue;
                const double cand = dist[u] + len;
                if (tied(cand, dist[v])) {
                    sigma[v] += sigma[u];
                    preds[v].push_back(u);
                } else if (cand < dist[v]) {
                    dist[v] = cand;
                    sigma[v] = sigma[u];
                    preds[v].assign(1, u);
                    heap.emplace(cand, v);
                }
            }
        }
    }
};

}  // namespace

BroadcastingGraph broadcastingGraph(const InfluenceSystem& system,
                                    const ScanMatrices& scan) {
    return broadcastingGraph(system, scan, influenceDistances(system));
}

BroadcastingGraph broadcastingGraph(const InfluenceSystem& system,
                                    const ScanMatrices& scan,
                                    const DistanceMatrix& distances) {
    const int n = system.size();
    if (scan.n != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "scan size does not match system size");
    }
    for (int i = 0; i < n; ++i) {
        if (!scan.row_ok[i]) {
            throw Error(ErrorCode::NotWellPosed,
                        "scan row " + std::to_string(i) +
                            " is ill-posed; the run must be excluded");
        }
    }
    BroadcastingGraph graph;
    graph.influence = scan.steady_influence;
    graph.weights = Matrix::Zero(n, n);
    graph.log_lengths = Matrix::Constant(n, n, kInf);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (system.weights()(b, a) <= 0.0) continue;  // b listens to a
            const double w = scan.steady_influence(a, b);
            graph.weights(a, b) = w;
            if (w > 0.0) graph.log_lengths(a, b) = -std::log(w);
        }
    }
    graph.distances = distances;
    return graph;
}

BroadcastingGraph receptionGraph(const BroadcastingGraph& graph) {
    BroadcastingGraph reversed;
    reversed.influence = graph.influence.transpose();
    reversed.weights = graph.weights.transpose();
    reversed.log_lengths = graph.log_lengths.transpose();
    reversed.distances = graph.distances.transposed();
    return reversed;
}

Matrix logDistances(const BroadcastingGraph& graph, int threads) {
    const int n = graph.n();
    Matrix result = Matrix::Constant(n, n, kInf);
    parallelFor(n, threads, [&](int source) {
        const DijkstraPass pass(graph.log_lengths, source);
        for (int j = 0; j < n; ++j) result(source, j) = pass.dist[j];
    });
    return result;
}

double minReachableInfluence(const BroadcastingGraph& graph) {
    const int n = graph.n();
    double nu = kInf;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j || !graph.distances.reachable(i, j)) continue;
            nu = std::min(nu, graph.influence(i, j));
        }
    }
    return nu == kInf ? 0.0 : nu;
}

Vector obdeg(const BroadcastingGraph& graph) {
    const int n = graph.n();
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument,
                    "degree centrality needs at least 2 nodes");
    }
    return graph.weights.rowwise().sum() / static_cast<double>(n - 1);
}

Vector obclose(const BroadcastingGraph& graph) {
    const int n = graph.n();
    const double nu = minReachableInfluence(graph);
    Vector values = Vector::Zero(n);
    if (nu <= 0.0) return values;
    for (int i = 0; i < n; ++i) {
        long long reached = 0;
        double weighted = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j || !graph.distances.reachable(i, j)) continue;
            ++reached;
            weighted += graph.influence(i, j) *
                        static_cast<double>(graph.distances.at(i, j));
        }
        if (reached > 0) values[i] = static_cast<double>(reached) * nu / weighted;
    }
    return values;
}

Vector weightedBetweenness(const Matrix& lengths, int threads,
                           bool* sigma_overflow) {
    const int n = static_cast<int>(lengths.rows());
    if (sigma_overflow) *sigma_overflow = false;
    if (n < 3) return Vector::Zero(std::max(n, 0));

    // Per-source contributions are reduced in ascending source order so the
    // result is bitwise identical for every thread count.
    std::vector<Vector> partial(n);
    std::vector<char> overflow(n, 0);
    parallelFor(n, threads, [&](int source) {
        const DijkstraPass pass(lengths, source);
        Vector delta = Vector::Zero(n);
        for (auto it = pass.settled.rbegin(); it != pass.settled.rend(); ++it) {
            const int w = *it;
            if (pass.sigma[w] > kSigmaCap) overflow[source] = 1;
            for (int v : pass.preds[w]) {
                delta[v] += pass.sigma[v] / pass.sigma[w] * (1.0 + delta[w]);
            }
        }
        delta[source] = 0.0;
        partial[source] = std::move(delta);
    });

    Vector values = Vector::Zero(n);
    for (int source = 0; source < n; ++source) {
        values += partial[source];
        if (overflow[source] && sigma_overflow) *sigma_overflow = true;
    }
    return values / (static_cast<double>(n - 1) * (n - 2));
}

Vector obbet(const BroadcastingGraph& graph, int threads) {
    return weightedBetweenness(graph.log_lengths, threads);
}

Vector perronVector(const Matrix& m, double eta) {
    if (eta < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "eta must be nonnegative");
    }
    const auto n = m.rows();
    if (n == 0) return Vector();
    // Iterate on m_eta + I. The Perron vector is unchanged, but eigenvalue
    // magnitude ties (a bipartite dominant component contributes -rho exactly,
    // split only by eta) become a strict gap: |lambda + 1| < rho + 1 for every
    // non-Perron eigenvalue of a nonnegative matrix.
    Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
    for (int iter = 0; iter < kPowerIterationCap; ++iter) {
        Vector y = m * x + Vector::Constant(n, eta * x.sum()) + x;
        const double total = y.sum();
        if (!(total > 0.0)) {
            throw Error(ErrorCode::PowerIterationDiverged,
                        "power iteration collapsed to zero");
        }
        y /= total;
        const double change = (y - x).cwiseAbs().maxCoeff();
        x = y;
        if (change <= kPowerIterationTolerance) return x / x.sum();
    }
    throw Error(ErrorCode::PowerIterationDiverged,
                "power iteration did not converge");
}

Vector pagerankVector(const Matrix& weights, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
    }
    const auto n = weights.rows();
    if (n == 0) return Vector();
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mass = weights.row(i).sum();
        if (mass > 0.0) {
            p.row(i) = weights.row(i) / mass;
        } else {
            p.row(i).setConstant(1.0 / static_cast<double>(n));
        }
    }
    const double jump = (1.0 - alpha) / static_cast<double>(n);
    Vector pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
    for (int iter = 0; iter < 1000000; ++iter) {
        Vector next = alpha * (p.transpose() * pi) + Vector::Constant(n, jump);
        const double change = (next - pi).cwiseAbs().sum();
        pi = next;
        if (change <= kPageRankTolerance) return pi / pi.sum();
    }
    throw Error(ErrorCode::PowerIterationDiverged,
                "pagerank iteration did not converge");
}

double centralization(const Vector& values) {
    if (values.size() == 0) return 0.0;
    const double top = values.maxCoeff();
    return (Vector::Constant(values.size(), top) - values).sum();
}

Vector obeig(const BroadcastingGraph& graph, double eta) {
    return perronVector(graph.weights, eta);
}

Vector obpr(const BroadcastingGraph& graph, double alpha) {
    return pagerankVector(graph.weights, alpha);
}

CentralitySet broadcastingCentralities(const BroadcastingGraph& graph,
                                       double eta, double alpha, int threads) {
    CentralitySet set;
    set.degree = obdeg(graph);
    set.closeness = obclose(graph);
    set.betweenness = obbet(graph, threads);
    set.eigenvector = obeig(graph, eta);
    set.pagerank = obpr(graph, alpha);
    return set;
}

CentralitySet classicalCentralities(const InfluenceSystem& system, double eta,
                                    double alpha, int threads) {
    const int n = system.size();
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument,
                    "centralities need at least 2 nodes");
    }
    Matrix adjacency = Matrix::Zero(n, n);
    Matrix unit_lengths = Matrix::Constant(n, n, kInf);
    for (int i = 0; i < n; ++i) {
        for (int j : system.outNeighbors()[i]) {
            adjacency(i, j) = 1.0;
            unit_lengths(i, j) = 1.0;
        }
    }
    const DistanceMatrix distances = directedDistances(system, threads);

    CentralitySet set;
    set.degree = adjacency.rowwise().sum() / static_cast<double>(n - 1);
    set.closeness = Vector::Zero(n);
    for (int i = 0; i < n; ++i) set.closeness[i] = outCloseness(distances, i);
    set.betweenness = weightedBetweenness(unit_lengths, threads);
    set.eigenvector = perronVector(adjacency, eta);
    set.pagerank = pagerankVector(adjacency, alpha);
    return set;
}

}  // namespace fjlab

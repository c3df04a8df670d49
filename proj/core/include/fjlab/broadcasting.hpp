#pragma once

#include "fjlab/graph.hpp"
#include "fjlab/influence.hpp"

namespace fjlab {

inline constexpr double kDefaultEta = 1e-8;
inline constexpr double kDefaultAlpha = 0.85;
inline constexpr double kGeodesicTieTolerance = 1e-9;
inline constexpr double kPowerIterationTolerance = 1e-12;
inline constexpr int kPowerIterationCap = 100000;
inline constexpr double kPageRankTolerance = 1e-14;

/// Weighted digraph of steady broadcasting strength. An edge a -> b exists
/// where influence can cross from a to b in one update (b listens to a) and
/// carries the steady response of receiver b when a is the unit source.
/// On symmetric supports this is the support graph reweighted in place.
struct BroadcastingGraph {
    Matrix influence;    ///< full response matrix, row = source
    Matrix weights;      ///< influence restricted to edges, 0 elsewhere
    Matrix log_lengths;  ///< -log(weights), +infinity where weights == 0
    DistanceMatrix distances;  ///< hop distances in the same orientation

    int n() const { return static_cast<int>(weights.rows()); }
};

/// Requires every scan row well-posed; throws NotWellPosed otherwise.
BroadcastingGraph broadcastingGraph(const InfluenceSystem& system,
                                    const ScanMatrices& scan);

/// Variant reusing precomputed hop distances (they do not depend on the
/// susceptibility draw, so campaigns compute them once).
BroadcastingGraph broadcastingGraph(const InfluenceSystem& system,
                                    const ScanMatrices& scan,
                                    const DistanceMatrix& distances);

/// Same constructions on the reversed digraph: reception instead of
/// broadcasting. All five measures apply unchanged.
BroadcastingGraph receptionGraph(const BroadcastingGraph& graph);

/// All-pairs shortest paths under the log-lengths (Dijkstra per source).
/// exp(-entry) is the best multiplicative path reliability.
Matrix logDistances(const BroadcastingGraph& graph, int threads = 1);

/// Smallest response over ordered pairs (i, j), i != j, with finite hop
/// distance; 0 when no such pair exists.
double minReachableInfluence(const BroadcastingGraph& graph);

Vector obdeg(const BroadcastingGraph& graph);
Vector obclose(const BroadcastingGraph& graph);
Vector obbet(const BroadcastingGraph& graph, int threads = 1);
Vector obeig(const BroadcastingGraph& graph, double eta = kDefaultEta);
Vector obpr(const BroadcastingGraph& graph, double alpha = kDefaultAlpha);

/// Sum of gaps to the maximum entry; 0 for constant vectors.
double centralization(const Vector& values);

struct CentralitySet {
    Vector degree;
    Vector closeness;
    Vector betweenness;
    Vector eigenvector;
    Vector pagerank;
};

inline constexpr int kMeasureCount = 5;
extern const char* const kMeasureNames[kMeasureCount];

CentralitySet broadcastingCentralities(const BroadcastingGraph& graph,
                                       double eta = kDefaultEta,
                                       double alpha = kDefaultAlpha,
                                       int threads = 1);

/// Topology-only counterparts on the 0/1 support adjacency: normalized
/// out-degree, out-closeness over hop distances, unit-length betweenness,
/// and the same eigenvector/PageRank machinery.
CentralitySet classicalCentralities(const InfluenceSystem& system,
                                    double eta = kDefaultEta,
                                    double alpha = kDefaultAlpha,
                                    int threads = 1);

/// Brandes accumulation over shortest paths of a nonnegative length matrix
/// (+infinity = no edge). Two path lengths tie when their gap is within
/// kGeodesicTieTolerance * (1 + min |length|). Normalized by
/// 1/((n-1)(n-2)); zero vector when n < 3. If sigma_overflow is non-null it
/// reports whether any geodesic count exceeded 2^53.
Vector weightedBetweenness(const Matrix& lengths, int threads = 1,
                           bool* sigma_overflow = nullptr);

/// Sum-normalized Perron vector of m + eta * ones. Power iteration with
/// tolerance kPowerIterationTolerance; throws PowerIterationDiverged at the
/// cap (possible when eta == 0 and m is reducible or periodic).
Vector perronVector(const Matrix& m, double eta);

/// Stationary vector of the damped walk on row-normalized weights; rows
/// with zero mass jump uniformly. Fixed point to kPageRankTolerance in
/// 1-norm.
Vector pagerankVector(const Matrix& weights, double alpha);

}  // namespace fjlab

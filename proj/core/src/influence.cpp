#include "fjlab/influence.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/LU>

#include "fjlab/graph_io.hpp"
#include "fjlab/parallel.hpp"

namespace fjlab {

namespace {

constexpr double kNumericKickoffThreshold = 1e-14;

/// Matvec operator for the simulation loop: CSR pays off only on large
/// sparse interiors, dense Eigen wins otherwise. The choice depends only on
/// the problem, never on the thread count.
struct IterationOp {
    const Matrix* dense = nullptr;
    CsrMatrix csr;
    bool use_csr = false;

    explicit IterationOp(const Matrix& a) {
        const auto m = a.rows();
        if (m > 64) {
            Eigen::Index nnz = 0;
            for (Eigen::Index i = 0; i < m; ++i)
                for (Eigen::Index j = 0; j < m; ++j)
                    if (a(i, j) != 0.0) ++nnz;
            if (static_cast<double>(nnz) < 0.05 * static_cast<double>(m) * m) {
                csr = CsrMatrix::fromDense(a);
                use_csr = true;
                return;
            }
        }
        dense = &a;
    }

    Vector apply(const Vector& v) const {
        return use_csr ? csr.multiply(v) : Vector((*dense) * v);
    }
};

/// Hop distances of influence propagation: sources hold nonzero data at
/// t = 0, influence crosses from v to any u listening to v (W_uv > 0), and
/// blocked vertices (stubborn with zero data) never transmit or fire.
std::vector<std::int64_t> influenceBfs(const InfluenceSystem& system,
                                       const std::vector<int>& sources,
                                       const std::vector<char>& blocked) {
    std::vector<std::int64_t> dist(system.size(), kInfiniteDistance);
    std::deque<int> queue;
    for (int s : sources) {
        dist[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int u : system.inNeighbors()[v]) {
            if (blocked[u] || dist[u] != kInfiniteDistance) continue;
            dist[u] = dist[v] + 1;
            queue.push_back(u);
        }
    }
    return dist;
}

struct TransientMarks {
    std::vector<std::int64_t> kickoff;
    std::vector<double> germinated;
    std::vector<std::int64_t> stabilization;
};

/// Walks the trajectory once, recording kickoff (numeric mode only),
/// germinated opinions, and stabilization times for all n nodes.
/// In structural mode `kickoff` is already final and only consulted.
TransientMarks transientMarks(const DirichletProblem& problem,
                              const Vector& steady_full,
                              std::vector<std::int64_t> kickoff,
                              bool structural, double epsilon,
                              std::int64_t t_cap) {
    const int n = problem.system().size();
    TransientMarks marks;
    marks.kickoff = std::move(kickoff);
    marks.germinated.assign(n, 0.0);
    marks.stabilization.assign(n, kInfiniteDistance);

    std::int64_t max_structural_kick = -1;
    if (structural) {
        for (int j = 0; j < n; ++j) {
            if (marks.kickoff[j] != kInfiniteDistance) {
                max_structural_kick = std::max(max_structural_kick, marks.kickoff[j]);
            }
        }
    }

    const IterationOp op(problem.iterationMatrix());
    Vector interior = problem.phi();
    Vector full = problem.embedFull(interior);

    // In numeric mode a node j can still fire after step t only if
    // |steady_j| plus the current interior gap exceeds the threshold: row
    // sums of the iteration matrix never exceed 1, so the gap cannot grow.
    std::vector<char> kick_watch(n, 0);
    int pending_kick = 0;
    if (!structural) {
        for (int j = 0; j < n; ++j) {
            kick_watch[j] = 1;
            ++pending_kick;
        }
    }
    int pending_stab = n;

    for (std::int64_t t = 0;; ++t) {
        double gap = 0.0;
        for (int k = 0; k < problem.interiorSize(); ++k) {
            gap = std::max(gap,
                           std::abs(interior[k] - steady_full[problem.interior()[k]]));
        }
        for (int j = 0; j < n; ++j) {
            if (!structural && kick_watch[j]) {
                if (std::abs(full[j]) > kNumericKickoffThreshold) {
                    marks.kickoff[j] = t;
                    marks.germinated[j] = full[j];
                    kick_watch[j] = 0;
                    --pending_kick;
                } else if (std::abs(steady_full[j]) + gap <= kNumericKickoffThreshold) {
                    kick_watch[j] = 0;  // provably silent forever
                    --pending_kick;
                }
            }
            if (structural && marks.kickoff[j] == t) {
                marks.germinated[j] = full[j];
            }
            if (marks.stabilization[j] == kInfiniteDistance &&
                std::abs(full[j] - steady_full[j]) < epsilon) {
                marks.stabilization[j] = t;
                --pending_stab;
            }
        }
        const bool germ_done = structural ? t >= max_structural_kick : pending_kick == 0;
        if ((pending_stab == 0 && germ_done) || t >= t_cap) break;
        interior = op.apply(interior) + problem.affineTerm();
        full = problem.embedFull(interior);
    }
    return marks;
}

std::vector<std::int64_t> structuralKickoff(const DirichletProblem& problem) {
    const auto& system = problem.system();
    std::vector<char> blocked(system.size(), 0);
    std::vector<int> sources;
    for (int k = 0; k < problem.boundarySize(); ++k) {
        const int node = problem.boundary()[k];
        if (problem.psi()[k] != 0.0) {
            sources.push_back(node);
        } else {
            blocked[node] = 1;
        }
    }
    return influenceBfs(system, sources, blocked);
}

}  // namespace

std::vector<NodeDiagnostics> nodeDiagnostics(const DirichletProblem& problem,
                                             double epsilon,
                                             std::int64_t t_cap) {
    if (!(epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    }
    if (t_cap < 0) {
        throw Error(ErrorCode::InvalidArgument, "t_cap must be >= 0");
    }
    const SteadyState ss = steadyState(problem);
    const int n = problem.system().size();

    const bool structural =
        problem.interiorSize() == 0 || problem.phi().cwiseAbs().maxCoeff() == 0.0;
    std::vector<std::int64_t> kickoff(n, kInfiniteDistance);
    if (structural) kickoff = structuralKickoff(problem);

    const auto marks =
        transientMarks(problem, ss.full, std::move(kickoff), structural, epsilon, t_cap);

    std::vector<NodeDiagnostics> out(n);
    for (int j = 0; j < n; ++j) {
        out[j].kickoff_time = marks.kickoff[j];
        out[j].germinated_opinion = marks.germinated[j];
        out[j].stabilization_time = marks.stabilization[j];
        out[j].steady_value = ss.full[j];
    }
    return out;
}

InfluenceMatrixResult influenceMatrix(const InfluenceSystem& system,
                                      const SusceptibilityProfile& profile) {
    const auto part = partition(profile);
    DirichletProblem problem(
        system, profile, Vector::Zero(static_cast<Eigen::Index>(part.boundary.size())),
        Vector::Zero(static_cast<Eigen::Index>(part.interior.size())));
    const auto wp = diagnoseWellPosedness(problem);
    if (!wp.well_posed) {
        steadyState(problem);  // throws with full diagnosis
    }
    InfluenceMatrixResult result;
    result.interior = problem.interior();
    result.boundary = problem.boundary();
    const int m = problem.interiorSize();
    if (m == 0) {
        result.u.resize(0, problem.boundarySize());
        return result;
    }
    Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(m, m) -
                                   problem.iterationMatrix());
    result.u = lu.solve(problem.interiorSusceptibility().asDiagonal() *
                        problem.boundaryBlock());
    return result;
}

BoundaryDecomposition boundaryDecomposition(const DirichletProblem& problem) {
    const auto wp = diagnoseWellPosedness(problem);
    if (!wp.well_posed) {
        steadyState(problem);  // throws with full diagnosis
    }
    BoundaryDecomposition result;
    result.interior = problem.interior();
    result.boundary = problem.boundary();
    const int m = problem.interiorSize();
    if (m == 0) {
        result.beta.resize(0, problem.boundarySize());
        result.interior_term.resize(0);
        return result;
    }
    Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(m, m) -
                                   problem.iterationMatrix());
    result.beta = lu.solve(problem.interiorSusceptibility().asDiagonal() *
                           problem.boundaryBlock());
    result.interior_term =
        lu.solve(Vector((Vector::Ones(m) - problem.interiorSusceptibility())
                            .cwiseProduct(problem.phi())));
    return result;
}

ScanMatrices scanAllVertices(const InfluenceSystem& system,
                             const SusceptibilityProfile& baseline,
                             double epsilon, std::int64_t t_cap, int threads) {
    if (!(epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    }
    if (baseline.size() != system.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "baseline length does not match system size");
    }
    const int n = system.size();
    ScanMatrices scan;
    scan.n = n;
    scan.epsilon = epsilon;
    scan.steady_influence.resize(n, n);
    scan.germinated.resize(n, n);
    scan.kickoff.assign(static_cast<std::size_t>(n) * n, kInfiniteDistance);
    scan.stabilization.assign(static_cast<std::size_t>(n) * n, kInfiniteDistance);
    scan.row_ok.assign(n, 1);

    const double nan = std::numeric_limits<double>::quiet_NaN();

    parallelFor(n, threads, [&](int i) {
        Vector s = baseline.values();
        s[i] = 0.0;
        const SusceptibilityProfile profile(std::move(s));
        auto part = partition(profile);
        Vector psi = Vector::Zero(static_cast<Eigen::Index>(part.boundary.size()));
        for (std::size_t k = 0; k < part.boundary.size(); ++k) {
            if (part.boundary[k] == i) psi[static_cast<Eigen::Index>(k)] = 1.0;
        }
        const DirichletProblem problem(
            system, profile, std::move(psi),
            Vector::Zero(static_cast<Eigen::Index>(part.interior.size())));

        if (!diagnoseWellPosedness(problem).well_posed) {
            scan.row_ok[i] = 0;
            scan.steady_influence.row(i).setConstant(nan);
            scan.germinated.row(i).setConstant(nan);
            return;  // time rows keep the infinity sentinel
        }

        const int m = problem.interiorSize();
        Vector steady_interior(m);
        if (m > 0) {
            Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(m, m) -
                                           problem.iterationMatrix());
            steady_interior = lu.solve(problem.affineTerm());
        }
        const Vector steady_full = problem.embedFull(steady_interior);

        const auto marks = transientMarks(problem, steady_full,
                                          structuralKickoff(problem),
                                          /*structural=*/true, epsilon, t_cap);

        scan.steady_influence.row(i) = steady_full.transpose();
        for (int j = 0; j < n; ++j) {
            scan.germinated(i, j) = marks.germinated[j];
            scan.kickoff[static_cast<std::size_t>(i) * n + j] = marks.kickoff[j];
            scan.stabilization[static_cast<std::size_t>(i) * n + j] =
                marks.stabilization[j];
        }
    });
    return scan;
}

Volumes volumes(const ScanMatrices& scan) {
    const int n = scan.n;
    Volumes result;
    result.row_ok = scan.row_ok;
    result.out_volume.resize(n);
    result.in_volume.resize(n);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < n; ++i) {
        if (!scan.row_ok[i]) {
            result.out_volume[i] = nan;
            continue;
        }
        double total = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j != i) total += scan.steady_influence(i, j);
        }
        result.out_volume[i] = total;
    }
    for (int j = 0; j < n; ++j) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i != j && scan.row_ok[i]) total += scan.steady_influence(i, j);
        }
        result.in_volume[j] = total;
    }
    double influenceability = 0.0;
    for (int i = 0; i < n; ++i) {
        if (scan.row_ok[i]) influenceability += result.out_volume[i];
    }
    result.graph_influenceability = influenceability;
    return result;
}

namespace {

void writeTimesCsv(std::ostream& out, const std::vector<std::int64_t>& times,
                   int n) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ',';
            const std::int64_t v = times[static_cast<std::size_t>(i) * n + j];
            if (v == kInfiniteDistance) {
                out << "inf";
            } else {
                out << v;
            }
        }
        out << '\n';
    }
}

}  // namespace

void writeScanCsvs(std::ostream& u_inf, std::ostream& kickoff,
                   std::ostream& germinated, std::ostream& stabilization,
                   const ScanMatrices& scan) {
    writeMatrixCsv(u_inf, scan.steady_influence);
    writeTimesCsv(kickoff, scan.kickoff, scan.n);
    writeMatrixCsv(germinated, scan.germinated);
    writeTimesCsv(stabilization, scan.stabilization, scan.n);
}

}  // namespace fjlab

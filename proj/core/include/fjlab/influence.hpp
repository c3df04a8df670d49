#ifndef FJLAB_INFLUENCE_HPP
#define FJLAB_INFLUENCE_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fjlab/dynamics.hpp"

namespace fjlab {

/// Per-node transient markers for one Dirichlet problem.
/// kickoff_time: first step the node's opinion is nonzero. When phi = 0 it
/// is computed structurally (hop distance from active boundary data through
/// non-stubborn nodes); otherwise numerically with threshold 1e-14.
/// germinated_opinion: opinion value at the kickoff step, 0 if never.
/// stabilization_time: first step within epsilon of the steady value; nodes
/// still outside the band at t_cap get kInfiniteDistance.
struct NodeDiagnostics {
    std::int64_t kickoff_time = kInfiniteDistance;
    double germinated_opinion = 0.0;
    std::int64_t stabilization_time = kInfiniteDistance;
    double steady_value = 0.0;
};

std::vector<NodeDiagnostics> nodeDiagnostics(const DirichletProblem& problem,
                                             double epsilon,
                                             std::int64_t t_cap = 1000000);

/// Influence matrix U = G S W_boundary: U(r, c) is the steady response of
/// interior node r to a unit of boundary data at boundary node c.
struct InfluenceMatrixResult {
    Matrix u;                   // |interior| x |boundary|
    std::vector<int> interior;  // row ids
    std::vector<int> boundary;  // column ids
};

InfluenceMatrixResult influenceMatrix(const InfluenceSystem& system,
                                      const SusceptibilityProfile& profile);

/// v* = sum_j psi_j beta_j + interior_term, with beta_j = U e_j.
struct BoundaryDecomposition {
    Matrix beta;           // columns beta_j, |interior| x |boundary|
    Vector interior_term;  // G (I - S) phi
    std::vector<int> interior;
    std::vector<int> boundary;
};

BoundaryDecomposition boundaryDecomposition(const DirichletProblem& problem);

/// Result of perturbing each vertex in turn into a unit source: node i is
/// made stubborn with opinion 1, every other node keeps the baseline
/// susceptibility, all remaining boundary data and phi are zero. Row i of
/// each matrix describes the response of all n nodes to source i.
struct ScanMatrices {
    int n = 0;
    double epsilon = 0.0;
    Matrix steady_influence;                 // U_inf, NaN rows when not ok
    Matrix germinated;                       // E
    std::vector<std::int64_t> kickoff;       // T, row-major
    std::vector<std::int64_t> stabilization; // S_eps, row-major
    std::vector<char> row_ok;                // per-source well-posedness

    std::int64_t kickoffAt(int i, int j) const {
        return kickoff[static_cast<std::size_t>(i) * n + j];
    }
    std::int64_t stabilizationAt(int i, int j) const {
        return stabilization[static_cast<std::size_t>(i) * n + j];
    }
};

ScanMatrices scanAllVertices(const InfluenceSystem& system,
                             const SusceptibilityProfile& baseline,
                             double epsilon, std::int64_t t_cap = 1000000,
                             int threads = 1);

/// Row and column sums of U_inf off the diagonal, restricted to well-posed
/// rows. The shared total is the graph influenceability.
struct Volumes {
    Vector out_volume;              // NaN for skipped rows
    Vector in_volume;
    double graph_influenceability = 0.0;
    std::vector<char> row_ok;
};

Volumes volumes(const ScanMatrices& scan);

/// Writes U_inf, E (17 significant digits) and T, S_eps ("inf" for
/// unreachable / never-stabilized).
void writeScanCsvs(std::ostream& u_inf, std::ostream& kickoff,
                   std::ostream& germinated, std::ostream& stabilization,
                   const ScanMatrices& scan);

}  // namespace fjlab

#endif

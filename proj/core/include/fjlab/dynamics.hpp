#ifndef FJLAB_DYNAMICS_HPP
#define FJLAB_DYNAMICS_HPP

#include <utility>
#include <vector>

#include "fjlab/graph.hpp"

namespace fjlab {

/// Per-node susceptibilities s_i in [0, 1]. s_i = 0 marks a stubborn node.
class SusceptibilityProfile {
public:
    explicit SusceptibilityProfile(Vector s);

    int size() const { return static_cast<int>(s_.size()); }
    const Vector& values() const { return s_; }
    double operator[](int i) const { return s_[i]; }
    bool isStubborn(int i) const { return s_[i] == 0.0; }

private:
    Vector s_;
};

/// Interior (s_i > 0) and boundary (s_i = 0) node ids, each ascending.
struct Partition {
    std::vector<int> interior;
    std::vector<int> boundary;
};

/// Splits nodes by susceptibility. Throws EmptyBoundary when no node is
/// stubborn: the update then has no anchoring data.
Partition partition(const SusceptibilityProfile& profile);

/// Diagnosis of the contraction requirement rho(S W_interior) < 1.
///
/// well_posed is decided by an exact combinatorial criterion: the update
/// fails to contract if and only if some interior strongly connected
/// component carries a cycle, is fully undamped (s = 1 throughout), and is
/// closed (all its weight mass stays inside the component). The two classic
/// sufficient checks are reported alongside: either boundary_reachable or
/// cycles_damped alone already implies well-posedness, but their conjunction
/// is not necessary for it.
struct WellPosedness {
    bool well_posed = true;
    bool boundary_reachable = true;
    bool cycles_damped = true;
    /// Vertex ids of a fully undamped cycle inside a closed interior class;
    /// empty when well_posed.
    std::vector<int> witness_cycle;
};

/// A Dirichlet boundary-value problem for the opinion update: boundary data
/// psi on stubborn nodes, initial interior data phi. Holds the interior and
/// boundary blocks of W in block order. References the system, which must
/// outlive the problem. Immutable after construction.
class DirichletProblem {
public:
    /// psi is indexed by boundary() order, phi by interior() order.
    DirichletProblem(const InfluenceSystem& system, SusceptibilityProfile profile,
                     Vector psi, Vector phi);

    /// Convenience: full-length vectors, restricted to the relevant blocks
    /// (boundary entries of `boundary_full`, interior entries of `initial_full`).
    static DirichletProblem fromFullVectors(const InfluenceSystem& system,
                                            SusceptibilityProfile profile,
                                            const Vector& boundary_full,
                                            const Vector& initial_full);

    const InfluenceSystem& system() const { return *system_; }
    const SusceptibilityProfile& profile() const { return profile_; }
    const std::vector<int>& interior() const { return interior_; }
    const std::vector<int>& boundary() const { return boundary_; }
    int interiorSize() const { return static_cast<int>(interior_.size()); }
    int boundarySize() const { return static_cast<int>(boundary_.size()); }

    const Matrix& interiorBlock() const { return w_ii_; }   // W restricted to interior x interior
    const Matrix& boundaryBlock() const { return w_ib_; }   // W restricted to interior x boundary
    const Vector& psi() const { return psi_; }
    const Vector& phi() const { return phi_; }
    const Vector& interiorSusceptibility() const { return s_interior_; }

    /// Iteration matrix S W_interior of the affine update.
    const Matrix& iterationMatrix() const { return a_; }
    /// Affine term S W_boundary psi + (I - S) phi.
    const Vector& affineTerm() const { return b_; }

    /// Position of a node in interior() order, -1 if it is not interior.
    int interiorIndexOf(int node) const;
    /// Position of a node in boundary() order, -1 if it is not boundary.
    int boundaryIndexOf(int node) const;

    /// Embeds an interior state into a full-length vector with psi on the
    /// boundary coordinates.
    Vector embedFull(const Vector& interior_state) const;

private:
    const InfluenceSystem* system_;
    SusceptibilityProfile profile_;
    std::vector<int> interior_;
    std::vector<int> boundary_;
    std::vector<int> interior_index_;  // node id -> interior position or -1
    std::vector<int> boundary_index_;  // node id -> boundary position or -1
    Matrix w_ii_;
    Matrix w_ib_;
    Matrix a_;
    Vector psi_;
    Vector phi_;
    Vector s_interior_;
    Vector b_;
};

WellPosedness diagnoseWellPosedness(const DirichletProblem& problem);

/// True when no interior cycle is fully undamped (every directed interior
/// cycle contains a node with s < 1). Sufficient for well-posedness, not
/// necessary.
bool checkCycleDamping(const DirichletProblem& problem);

/// True when every interior node has a directed path to the boundary.
/// Sufficient for well-posedness, not necessary.
bool checkBoundaryReachability(const DirichletProblem& problem);

/// One synchronous update of the interior state.
Vector step(const DirichletProblem& problem, const Vector& interior_state);

/// Spectral radius of a nonnegative matrix: dense eigensolver up to 64 rows,
/// otherwise shifted power iteration (all-ones start, 1e-12 tolerance on the
/// Rayleigh quotient, 1e5 iteration cap) with a dense fallback.
double spectralRadius(const Matrix& nonnegative);
double spectralRadius(const DirichletProblem& problem);

struct SteadyState {
    Vector interior;     // fixed point over interior nodes, block order
    Vector full;         // embedded full-length profile
    double rho;          // spectral radius of the iteration matrix
    double residual;     // infinity norm of (I - SW)v - b after solving
    int refinements;     // iterative refinement sweeps applied (0 or 1)
};

/// Direct solve of (I - S W_interior) v = b via partial-pivot LU with one
/// refinement sweep if the residual exceeds 1e-10. Throws NotWellPosedError
/// when the gate fails or rho >= 1 - 1e-12.
SteadyState steadyState(const DirichletProblem& problem);

/// Full-length trajectory v^0 .. v^horizon; boundary coordinates equal psi
/// at every step.
struct Trajectory {
    std::vector<Vector> states;
    int horizon = 0;
};

Trajectory simulate(const DirichletProblem& problem, int horizon);

/// Interior state after t steps, computed by t-fold application of step.
Vector transient(const DirichletProblem& problem, int t);

/// Left: v^t - v* from simulation. Right: (S W_interior)^t (phi - v*) by
/// explicit matrix power. Equal up to roundoff for well-posed problems.
std::pair<Vector, Vector> errorRecursionCheck(const DirichletProblem& problem,
                                              int t);

struct RateBound {
    double c_delta;             // smallest observed prefactor, >= 1
    int t0;                     // first t with ||A^t||^(1/t) <= rho + delta
    double rho;
    std::vector<double> bound;  // c_delta (rho+delta)^t ||phi - v*||_inf, t = 0..t_max
};

/// Non-asymptotic envelope for ||v^t - v*||_inf. Throws CapReached when the
/// Gelfand crossing t0 is not reached by t_max.
RateBound rateBound(const DirichletProblem& problem, double delta, int t_max);

enum class GreenMethod { Factorization, Neumann };

struct NeumannOptions {
    int max_terms = 100000;
    double tolerance = 1e-14;  // stop once the added term's inf norm drops below
};

/// Materializes the Green operator (I - S W_interior)^{-1}. The Neumann
/// route throws NeumannNotConverged past max_terms.
Matrix greenOperator(const DirichletProblem& problem,
                     GreenMethod method = GreenMethod::Factorization,
                     const NeumannOptions& options = {});

}  // namespace fjlab

#endif

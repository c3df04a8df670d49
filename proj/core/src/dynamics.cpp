#include "fjlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace fjlab {

namespace {

double infNorm(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double infNorm(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

std::string joinNodes(const std::vector<int>& nodes) {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out << ", ";
        out << nodes[i];
    }
    out << ']';
    return out.str();
}

/// Adjacency of the interior-induced support subgraph, in interior positions.
std::vector<std::vector<int>> interiorAdjacency(const DirichletProblem& p) {
    const int m = p.interiorSize();
    std::vector<std::vector<int>> adj(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (p.interiorBlock()(i, j) > 0.0) adj[i].push_back(j);
        }
    }
    return adj;
}

/// A directed cycle inside a strongly connected component that has one.
/// `component` holds interior positions; `adj` is the interior adjacency.
std::vector<int> cycleWithin(const std::vector<int>& component,
                             const std::vector<std::vector<int>>& adj) {
    std::vector<char> in_component(adj.size(), 0);
    for (int v : component) in_component[v] = 1;
    const int start = component.front();
    std::vector<int> walk;
    std::unordered_map<int, int> position;
    int u = start;
    while (true) {
        auto it = position.find(u);
        if (it != position.end()) {
            return std::vector<int>(walk.begin() + it->second, walk.end());
        }
        position[u] = static_cast<int>(walk.size());
        walk.push_back(u);
        int next = -1;
        for (int v : adj[u]) {
            if (in_component[v]) {
                next = v;
                break;
            }
        }
        if (next == -1) return {};  // acyclic singleton
        u = next;
    }
}

struct ClosedClassResult {
    bool found = false;
    std::vector<int> witness;  // interior positions forming a cycle
};

/// Searches for an interior strongly connected component that is cyclic,
/// fully undamped, and closed under the full weight support. Such a class
/// carries a row-stochastic principal block of S W, forcing rho >= 1; its
/// absence forces rho < 1.
ClosedClassResult findClosedUndampedClass(const DirichletProblem& p) {
    const auto adj = interiorAdjacency(p);
    const auto components = stronglyConnectedComponents(adj);
    const auto& s = p.interiorSusceptibility();
    const auto& system = p.system();
    for (const auto& component : components) {
        const bool cyclic =
            component.size() >= 2 ||
            p.interiorBlock()(component[0], component[0]) > 0.0;
        if (!cyclic) continue;
        bool undamped = true;
        for (int v : component) {
            if (s[v] < 1.0) {
                undamped = false;
                break;
            }
        }
        if (!undamped) continue;
        std::vector<char> member(adj.size(), 0);
        for (int v : component) member[v] = 1;
        bool closed = true;
        for (int v : component) {
            const int node = p.interior()[v];
            for (int target : system.outNeighbors()[node]) {
                const int pos = p.interiorIndexOf(target);
                if (pos < 0 || !member[pos]) {
                    closed = false;
                    break;
                }
            }
            if (!closed) break;
        }
        if (closed) return {true, cycleWithin(component, adj)};
    }
    return {false, {}};
}

}  // namespace

SusceptibilityProfile::SusceptibilityProfile(Vector s) : s_(std::move(s)) {
    if (s_.size() == 0) {
        throw Error(ErrorCode::InvalidArgument,
                    "susceptibility profile must be non-empty");
    }
    for (Eigen::Index i = 0; i < s_.size(); ++i) {
        if (!(s_[i] >= 0.0) || !(s_[i] <= 1.0)) {
            std::ostringstream msg;
            msg << "susceptibility s[" << i << "] = " << s_[i]
                << " outside [0, 1]";
            throw Error(ErrorCode::InvalidArgument, msg.str());
        }
    }
}

Partition partition(const SusceptibilityProfile& profile) {
    Partition part;
    for (int i = 0; i < profile.size(); ++i) {
        (profile[i] > 0.0 ? part.interior : part.boundary).push_back(i);
    }
    if (part.boundary.empty()) {
        throw Error(ErrorCode::EmptyBoundary,
                    "no stubborn node: boundary data would be empty");
    }
    return part;
}

DirichletProblem::DirichletProblem(const InfluenceSystem& system,
                                   SusceptibilityProfile profile, Vector psi,
                                   Vector phi)
    : system_(&system), profile_(std::move(profile)) {
    const int n = system.size();
    if (profile_.size() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "susceptibility length does not match system size");
    }
    auto part = partition(profile_);
    interior_ = std::move(part.interior);
    boundary_ = std::move(part.boundary);
    const int m = static_cast<int>(interior_.size());
    const int b = static_cast<int>(boundary_.size());
    if (psi.size() != b) {
        throw Error(ErrorCode::DimensionMismatch,
                    "psi length does not match boundary size");
    }
    if (phi.size() != m) {
        throw Error(ErrorCode::DimensionMismatch,
                    "phi length does not match interior size");
    }
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        if (!std::isfinite(psi[i])) {
            throw Error(ErrorCode::InvalidArgument, "psi must be finite");
        }
    }
    for (Eigen::Index i = 0; i < phi.size(); ++i) {
        if (!std::isfinite(phi[i])) {
            throw Error(ErrorCode::InvalidArgument, "phi must be finite");
        }
    }
    psi_ = std::move(psi);
    phi_ = std::move(phi);

    interior_index_.assign(n, -1);
    boundary_index_.assign(n, -1);
    for (int k = 0; k < m; ++k) interior_index_[interior_[k]] = k;
    for (int k = 0; k < b; ++k) boundary_index_[boundary_[k]] = k;

    const Matrix& w = system.weights();
    w_ii_.resize(m, m);
    w_ib_.resize(m, b);
    s_interior_.resize(m);
    for (int r = 0; r < m; ++r) {
        const int node = interior_[r];
        s_interior_[r] = profile_[node];
        for (int c = 0; c < m; ++c) w_ii_(r, c) = w(node, interior_[c]);
        for (int c = 0; c < b; ++c) w_ib_(r, c) = w(node, boundary_[c]);
    }
    a_ = s_interior_.asDiagonal() * w_ii_;
    b_ = s_interior_.asDiagonal() * (w_ib_ * psi_) +
         (Vector::Ones(m) - s_interior_).cwiseProduct(phi_);
}

DirichletProblem DirichletProblem::fromFullVectors(
    const InfluenceSystem& system, SusceptibilityProfile profile,
    const Vector& boundary_full, const Vector& initial_full) {
    const int n = system.size();
    if (boundary_full.size() != n || initial_full.size() != n) {
        throw Error(ErrorCode::DimensionMismatch,
                    "full vectors must have one entry per node");
    }
    auto part = partition(profile);
    Vector psi(part.boundary.size());
    Vector phi(part.interior.size());
    for (std::size_t k = 0; k < part.boundary.size(); ++k) {
        psi[static_cast<Eigen::Index>(k)] = boundary_full[part.boundary[k]];
    }
    for (std::size_t k = 0; k < part.interior.size(); ++k) {
        phi[static_cast<Eigen::Index>(k)] = initial_full[part.interior[k]];
    }
    return DirichletProblem(system, std::move(profile), std::move(psi),
                            std::move(phi));
}

int DirichletProblem::interiorIndexOf(int node) const {
    if (node < 0 || node >= static_cast<int>(interior_index_.size())) return -1;
    return interior_index_[node];
}

int DirichletProblem::boundaryIndexOf(int node) const {
    if (node < 0 || node >= static_cast<int>(boundary_index_.size())) return -1;
    return boundary_index_[node];
}

Vector DirichletProblem::embedFull(const Vector& interior_state) const {
    if (interior_state.size() != interiorSize()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "interior state has wrong length");
    }
    Vector full(system_->size());
    for (int k = 0; k < interiorSize(); ++k) full[interior_[k]] = interior_state[k];
    for (int k = 0; k < boundarySize(); ++k) full[boundary_[k]] = psi_[k];
    return full;
}

bool checkBoundaryReachability(const DirichletProblem& problem) {
    const auto& system = problem.system();
    std::vector<char> visited(system.size(), 0);
    std::deque<int> queue;
    for (int b : problem.boundary()) {
        visited[b] = 1;
        queue.push_back(b);
    }
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : system.inNeighbors()[u]) {
            if (!visited[v]) {
                visited[v] = 1;
                queue.push_back(v);
            }
        }
    }
    for (int i : problem.interior()) {
        if (!visited[i]) return false;
    }
    return true;
}

bool checkCycleDamping(const DirichletProblem& problem) {
    const int m = problem.interiorSize();
    const auto& s = problem.interiorSusceptibility();
    // Subgraph induced by fully undamped interior nodes; any cycle there is
    // a fully undamped interior cycle.
    std::vector<int> undamped;
    std::vector<int> local(m, -1);
    for (int i = 0; i < m; ++i) {
        if (s[i] == 1.0) {
            local[i] = static_cast<int>(undamped.size());
            undamped.push_back(i);
        }
    }
    std::vector<std::vector<int>> adj(undamped.size());
    for (std::size_t r = 0; r < undamped.size(); ++r) {
        for (int c = 0; c < m; ++c) {
            if (local[c] >= 0 && problem.interiorBlock()(undamped[r], c) > 0.0) {
                adj[r].push_back(local[c]);
            }
        }
    }
    for (const auto& component : stronglyConnectedComponents(adj)) {
        if (component.size() >= 2) return false;
        const int v = component[0];
        if (problem.interiorBlock()(undamped[v], undamped[v]) > 0.0) return false;
    }
    return true;
}

WellPosedness diagnoseWellPosedness(const DirichletProblem& problem) {
    WellPosedness result;
    result.boundary_reachable = checkBoundaryReachability(problem);
    result.cycles_damped = checkCycleDamping(problem);
    if (result.boundary_reachable || result.cycles_damped) {
        // Either condition alone rules out a closed fully undamped class.
        result.well_posed = true;
        return result;
    }
    const auto closed = findClosedUndampedClass(problem);
    result.well_posed = !closed.found;
    if (closed.found) {
        result.witness_cycle.reserve(closed.witness.size());
        for (int pos : closed.witness) {
            result.witness_cycle.push_back(problem.interior()[pos]);
        }
    }
    return result;
}

namespace {

[[noreturn]] void throwNotWellPosed(const WellPosedness& wp,
                                    std::optional<double> rho) {
    std::ostringstream msg;
    msg << "interior update is not a contraction";
    if (rho) msg << " (spectral radius " << *rho << ")";
    if (!wp.witness_cycle.empty()) {
        msg << ": fully undamped closed cycle through nodes "
            << joinNodes(wp.witness_cycle);
    }
    throw NotWellPosedError(msg.str(), rho, wp.witness_cycle,
                            wp.boundary_reachable, wp.cycles_damped);
}

WellPosedness requireWellPosed(const DirichletProblem& problem) {
    const auto wp = diagnoseWellPosedness(problem);
    if (!wp.well_posed) {
        throwNotWellPosed(wp, spectralRadius(problem));
    }
    return wp;
}

}  // namespace

Vector step(const DirichletProblem& problem, const Vector& interior_state) {
    if (interior_state.size() != problem.interiorSize()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "interior state has wrong length");
    }
    return problem.iterationMatrix() * interior_state + problem.affineTerm();
}

namespace {

constexpr int kDenseEigLimit = 64;
constexpr double kPowerTolerance = 1e-12;
constexpr int kPowerCap = 100000;

double denseSpectralRadius(const Matrix& a) {
    Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double spectralRadius(const Matrix& nonnegative) {
    const auto m = nonnegative.rows();
    if (m == 0) return 0.0;
    if (m <= kDenseEigLimit) return denseSpectralRadius(nonnegative);
    // Shifted power iteration: A + I has a strictly positive action on
    // nonnegative vectors, which removes rotation between eigenvalues of
    // equal modulus; subtracting the shift recovers rho(A).
    Vector x = Vector::Ones(m);
    double previous = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < kPowerCap; ++iter) {
        Vector y = nonnegative * x + x;
        const double rq = x.dot(y) / x.dot(x);
        if (std::abs(rq - previous) <= kPowerTolerance * std::max(1.0, std::abs(rq))) {
            return rq - 1.0;
        }
        previous = rq;
        x = y / y.cwiseAbs().maxCoeff();
    }
    return denseSpectralRadius(nonnegative);
}

double spectralRadius(const DirichletProblem& problem) {
    return spectralRadius(problem.iterationMatrix());
}

SteadyState steadyState(const DirichletProblem& problem) {
    const auto wp = diagnoseWellPosedness(problem);
    if (!wp.well_posed) {
        throwNotWellPosed(wp, spectralRadius(problem));
    }
    const double rho = spectralRadius(problem);
    if (rho >= 1.0 - 1e-12) {
        throwNotWellPosed(wp, rho);
    }
    SteadyState result;
    result.rho = rho;
    result.refinements = 0;
    const int m = problem.interiorSize();
    if (m == 0) {
        result.interior = Vector(0);
        result.full = problem.embedFull(result.interior);
        result.residual = 0.0;
        return result;
    }
    const Matrix coeff = Matrix::Identity(m, m) - problem.iterationMatrix();
    Eigen::PartialPivLU<Matrix> lu(coeff);
    Vector v = lu.solve(problem.affineTerm());
    Vector residual = problem.affineTerm() - coeff * v;
    if (infNorm(residual) > 1e-10) {
        v += lu.solve(residual);
        residual = problem.affineTerm() - coeff * v;
        result.refinements = 1;
    }
    result.residual = infNorm(residual);
    result.interior = std::move(v);
    result.full = problem.embedFull(result.interior);
    return result;
}

Trajectory simulate(const DirichletProblem& problem, int horizon) {
    if (horizon < 0) {
        throw Error(ErrorCode::InvalidArgument, "horizon must be >= 0");
    }
    Trajectory trajectory;
    trajectory.horizon = horizon;
    trajectory.states.reserve(horizon + 1);
    Vector v = problem.phi();
    trajectory.states.push_back(problem.embedFull(v));
    for (int t = 1; t <= horizon; ++t) {
        v = problem.iterationMatrix() * v + problem.affineTerm();
        trajectory.states.push_back(problem.embedFull(v));
    }
    return trajectory;
}

Vector transient(const DirichletProblem& problem, int t) {
    if (t < 0) throw Error(ErrorCode::InvalidArgument, "t must be >= 0");
    Vector v = problem.phi();
    for (int k = 0; k < t; ++k) {
        v = problem.iterationMatrix() * v + problem.affineTerm();
    }
    return v;
}

std::pair<Vector, Vector> errorRecursionCheck(const DirichletProblem& problem,
                                              int t) {
    if (t < 0) throw Error(ErrorCode::InvalidArgument, "t must be >= 0");
    const SteadyState ss = steadyState(problem);
    const Vector lhs = transient(problem, t) - ss.interior;
    const int m = problem.interiorSize();
    Matrix power = Matrix::Identity(m, m);
    for (int k = 0; k < t; ++k) power = power * problem.iterationMatrix();
    const Vector rhs = power * (problem.phi() - ss.interior);
    return {lhs, rhs};
}

RateBound rateBound(const DirichletProblem& problem, double delta, int t_max) {
    if (!(delta > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "delta must be positive");
    }
    if (t_max < 1) {
        throw Error(ErrorCode::InvalidArgument, "t_max must be >= 1");
    }
    const SteadyState ss = steadyState(problem);
    RateBound result;
    result.rho = ss.rho;
    const double rate = ss.rho + delta;
    const double initial_gap = infNorm(Vector(problem.phi() - ss.interior));
    const int m = problem.interiorSize();
    if (m == 0) {
        result.c_delta = 1.0;
        result.t0 = 1;
        result.bound.assign(t_max + 1, 0.0);
        return result;
    }
    Matrix power = Matrix::Identity(m, m);
    double c = 1.0;  // t = 0 term: ||I|| / rate^0
    int t0 = -1;
    for (int t = 1; t <= t_max; ++t) {
        power = power * problem.iterationMatrix();
        const double norm = infNorm(power);
        c = std::max(c, norm / std::pow(rate, t));
        if (std::pow(norm, 1.0 / t) <= rate) {
            t0 = t;
            break;
        }
    }
    if (t0 < 0) {
        std::ostringstream msg;
        msg << "Gelfand crossing not reached within " << t_max << " steps";
        throw Error(ErrorCode::CapReached, msg.str());
    }
    result.c_delta = c;
    result.t0 = t0;
    result.bound.resize(t_max + 1);
    for (int t = 0; t <= t_max; ++t) {
        result.bound[t] = c * std::pow(rate, t) * initial_gap;
    }
    return result;
}

Matrix greenOperator(const DirichletProblem& problem, GreenMethod method,
                     const NeumannOptions& options) {
    requireWellPosed(problem);
    const int m = problem.interiorSize();
    if (m == 0) return Matrix(0, 0);
    const Matrix& a = problem.iterationMatrix();
    if (method == GreenMethod::Factorization) {
        Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(m, m) - a);
        return lu.inverse();
    }
    Matrix green = Matrix::Identity(m, m);
    Matrix term = Matrix::Identity(m, m);
    for (int k = 1; k <= options.max_terms; ++k) {
        term = term * a;
        green += term;
        if (infNorm(term) <= options.tolerance) return green;
    }
    std::ostringstream msg;
    msg << "Neumann series did not converge within " << options.max_terms
        << " terms";
    throw Error(ErrorCode::NeumannNotConverged, msg.str());
}

}  // namespace fjlab

#include "fjlab/sensitivity.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "fjlab/graph_io.hpp"
#include "fjlab/parallel.hpp"

namespace fjlab {

namespace {

Vector fixedPointMismatch(const DirichletProblem& p, const Vector& v_star) {
    // u = W_interior v* + W_boundary psi - phi; u_k scales column k of the
    // Green operator in the gradient formula.
    return p.interiorBlock() * v_star + p.boundaryBlock() * p.psi() - p.phi();
}

}  // namespace

SensitivityReport steadyStateGradient(const DirichletProblem& problem,
                                      int node_k) {
    const int pos = problem.interiorIndexOf(node_k);
    if (pos < 0) {
        std::ostringstream msg;
        msg << "node " << node_k << " is not interior";
        throw Error(ErrorCode::NotInterior, msg.str());
    }
    const SteadyState ss = steadyState(problem);
    const Vector u = fixedPointMismatch(problem, ss.interior);
    const int m = problem.interiorSize();
    const Matrix coeff = Matrix::Identity(m, m) - problem.iterationMatrix();
    Eigen::PartialPivLU<Matrix> lu(coeff);
    Vector e = Vector::Zero(m);
    e[pos] = 1.0;
    SensitivityReport report;
    report.node = node_k;
    report.scalar_factor = u[pos];
    report.gradient = u[pos] * lu.solve(e);
    return report;
}

std::vector<SensitivityReport> allGradients(const DirichletProblem& problem,
                                            int threads) {
    const SteadyState ss = steadyState(problem);
    const Vector u = fixedPointMismatch(problem, ss.interior);
    const int m = problem.interiorSize();
    std::vector<SensitivityReport> reports(m);
    if (m == 0) return reports;
    const Matrix coeff = Matrix::Identity(m, m) - problem.iterationMatrix();
    Eigen::PartialPivLU<Matrix> lu(coeff);
    const Matrix green = lu.inverse();
    parallelFor(m, threads, [&](int k) {
        reports[k].node = problem.interior()[k];
        reports[k].scalar_factor = u[k];
        reports[k].gradient = u[k] * green.col(k);
    });
    return reports;
}

const char* normName(NormKind kind) noexcept {
    switch (kind) {
        case NormKind::Inf: return "inf";
        case NormKind::One: return "one";
        case NormKind::Two: return "two";
    }
    return "?";
}

double inducedNorm(const Matrix& m, NormKind kind) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    switch (kind) {
        case NormKind::Inf:
            return m.cwiseAbs().rowwise().sum().maxCoeff();
        case NormKind::One:
            return m.cwiseAbs().colwise().sum().maxCoeff();
        case NormKind::Two: {
            Eigen::JacobiSVD<Matrix> svd(m);
            return svd.singularValues()[0];
        }
    }
    return 0.0;
}

double vectorNorm(const Vector& v, NormKind kind) {
    if (v.size() == 0) return 0.0;
    switch (kind) {
        case NormKind::Inf: return v.cwiseAbs().maxCoeff();
        case NormKind::One: return v.cwiseAbs().sum();
        case NormKind::Two: return v.norm();
    }
    return 0.0;
}

namespace {

bool sameEntries(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] != y[i]) return false;
    }
    return true;
}

double inverseNorm(const Matrix& a, NormKind kind) {
    // Small systems throughout: materialize the inverse for the row/column
    // norms, use 1/sigma_min for the spectral norm (same result, better
    // conditioning than inverting first).
    if (kind == NormKind::Two) {
        Eigen::JacobiSVD<Matrix> svd(a);
        const double sigma_min = svd.singularValues().tail(1)[0];
        return 1.0 / sigma_min;
    }
    Eigen::PartialPivLU<Matrix> lu(a);
    return inducedNorm(lu.inverse(), kind);
}

}  // namespace

PerturbationCheck perturbationBound(const DirichletProblem& problem,
                                    const DirichletProblem& perturbed,
                                    NormKind norm) {
    if (problem.interior() != perturbed.interior() ||
        problem.boundary() != perturbed.boundary()) {
        throw Error(ErrorCode::PartitionMismatch,
                    "problems partition the nodes differently");
    }
    if (!sameEntries(problem.interiorSusceptibility(),
                     perturbed.interiorSusceptibility()) ||
        !sameEntries(problem.psi(), perturbed.psi()) ||
        !sameEntries(problem.phi(), perturbed.phi())) {
        throw Error(ErrorCode::PartitionMismatch,
                    "problems must share susceptibilities, psi, and phi");
    }
    const SteadyState base = steadyState(problem);
    const SteadyState tilde = steadyState(perturbed);

    const int m = problem.interiorSize();
    const Matrix identity = Matrix::Identity(m, m);
    const Matrix a = identity - problem.iterationMatrix();
    const Matrix a_tilde = identity - perturbed.iterationMatrix();

    const double s_norm =
        m == 0 ? 0.0 : problem.interiorSusceptibility().cwiseAbs().maxCoeff();
    const double inv_a = m == 0 ? 0.0 : inverseNorm(a, norm);
    const double inv_a_tilde = m == 0 ? 0.0 : inverseNorm(a_tilde, norm);
    const double d_ii =
        inducedNorm(problem.interiorBlock() - perturbed.interiorBlock(), norm);
    const double d_ib =
        inducedNorm(problem.boundaryBlock() - perturbed.boundaryBlock(), norm);

    PerturbationCheck check;
    check.norm = norm;
    check.method = "exact";
    check.bound = inv_a * s_norm * d_ii * inv_a_tilde *
                      vectorNorm(perturbed.affineTerm(), norm) +
                  inv_a_tilde * s_norm * d_ib * vectorNorm(problem.psi(), norm);
    check.actual = vectorNorm(Vector(base.interior - tilde.interior), norm);
    return check;
}

void writeSensitivityCsv(std::ostream& out, const DirichletProblem& problem,
                         const std::vector<SensitivityReport>& reports) {
    out << "node,scalar_factor";
    for (int id : problem.interior()) out << ",g_" << id;
    out << '\n';
    for (const auto& report : reports) {
        out << report.node << ',' << formatDouble(report.scalar_factor);
        for (Eigen::Index k = 0; k < report.gradient.size(); ++k) {
            out << ',' << formatDouble(report.gradient[k]);
        }
        out << '\n';
    }
}

}  // namespace fjlab

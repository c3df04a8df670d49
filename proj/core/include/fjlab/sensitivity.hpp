#ifndef FJLAB_SENSITIVITY_HPP
#define FJLAB_SENSITIVITY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "fjlab/dynamics.hpp"

namespace fjlab {

/// Derivative of the interior fixed point with respect to one node's
/// susceptibility: d v*/d s_k = u_k * G e_k with
/// u = W_interior v* + W_boundary psi - phi evaluated at the fixed point.
struct SensitivityReport {
    int node = -1;           // vertex id (must be interior)
    double scalar_factor = 0.0;  // u_k, the common factor of the column
    Vector gradient;         // length |interior|, block order
};

/// Throws NotInterior when node_k is stubborn; gates well-posedness.
SensitivityReport steadyStateGradient(const DirichletProblem& problem,
                                      int node_k);

/// All interior gradients sharing a single factorization.
std::vector<SensitivityReport> allGradients(const DirichletProblem& problem,
                                            int threads = 1);

enum class NormKind { Inf, One, Two };

const char* normName(NormKind kind) noexcept;

struct PerturbationCheck {
    double bound = 0.0;   // first-order envelope from the resolvent identity
    double actual = 0.0;  // ||v* - v~*|| in the same norm
    NormKind norm = NormKind::Inf;
    std::string method;   // "exact" or "estimated"
};

/// Envelope ||v* - v~*|| <= ||A^{-1}|| ||S|| ||dW_ii|| ||A~^{-1}|| ||b~||
///                        + ||A~^{-1}|| ||S|| ||dW_ib|| ||psi||
/// with A = I - S W_interior. Both problems must share the partition, the
/// susceptibilities, psi, and phi; throws PartitionMismatch otherwise.
PerturbationCheck perturbationBound(const DirichletProblem& problem,
                                    const DirichletProblem& perturbed,
                                    NormKind norm);

/// Induced matrix norm (max row sum, max column sum, or largest singular
/// value).
double inducedNorm(const Matrix& m, NormKind kind);

/// Vector norm matching the induced norm above.
double vectorNorm(const Vector& v, NormKind kind);

/// Rows "node,scalar_factor,g_<id>..." with one gradient column per
/// interior node.
void writeSensitivityCsv(std::ostream& out, const DirichletProblem& problem,
                         const std::vector<SensitivityReport>& reports);

}  // namespace fjlab

#endif

#ifndef FJLAB_SPECTRAL_HPP
#define FJLAB_SPECTRAL_HPP

#include <iosfwd>
#include <vector>

#include "fjlab/graph.hpp"

namespace fjlab {

/// Eigendecomposition of the symmetrized interior operator
/// M = D^{1/2} N D^{-1/2}, where N is the interior block of the random walk
/// matrix and D the interior degree diagonal. M_ij = A_ij / sqrt(d_i d_j) is
/// symmetric, so eigenvalues are real with |lambda| <= 1.
struct DirichletSpectrum {
    Vector eigenvalues;        // descending
    Matrix eigenvectors;       // orthonormal columns, aligned with eigenvalues
    Vector interior_degrees;   // degree of each interior node
    std::vector<int> interior; // node ids, ascending

    double lambdaMax() const { return eigenvalues.size() ? eigenvalues[0] : 0.0; }
};

/// Requires the system to be the random walk on an undirected graph
/// (symmetric support, weights 1/degree within 1e-12); throws
/// NotRandomWalkSystem otherwise. `interior` holds ascending node ids with a
/// non-empty complement (the boundary); throws InvalidArgument or
/// EmptyBoundary when violated.
DirichletSpectrum dirichletSpectrum(const InfluenceSystem& system,
                                    const std::vector<int>& interior);

/// Green operator for homogeneous susceptibility s on the interior,
/// G = D^{-1/2} [sum_k u_k u_k^T / (1 - s lambda_k)] D^{1/2}.
/// Throws SpectralGapViolation when s * lambdaMax >= 1.
Matrix spectralGreen(const DirichletSpectrum& spectrum, double s);

/// Sharpened contraction factor (s lambdaMax)^t for the degree-weighted
/// 2-norm of the error. Throws SpectralGapViolation when s * lambdaMax >= 1.
double sharpenedRate(const DirichletSpectrum& spectrum, double s, int t);

/// Rows "k,lambda" with k = 0-based rank in descending order.
void writeSpectrumCsv(std::ostream& out, const DirichletSpectrum& spectrum);

}  // namespace fjlab

#endif

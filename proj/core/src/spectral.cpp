#include "fjlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fjlab/graph_io.hpp"

namespace fjlab {

DirichletSpectrum dirichletSpectrum(const InfluenceSystem& system,
                                    const std::vector<int>& interior) {
    if (!system.isRandomWalk()) {
        throw Error(ErrorCode::NotRandomWalkSystem,
                    "degree symmetrization requires the random walk on an "
                    "undirected graph");
    }
    const int n = system.size();
    const int m = static_cast<int>(interior.size());
    if (m >= n) {
        throw Error(ErrorCode::EmptyBoundary,
                    "interior set leaves no boundary node");
    }
    std::vector<char> seen(n, 0);
    for (std::size_t k = 0; k < interior.size(); ++k) {
        const int v = interior[k];
        if (v < 0 || v >= n || seen[v] || (k > 0 && interior[k - 1] >= v)) {
            throw Error(ErrorCode::InvalidArgument,
                        "interior must list distinct node ids ascending");
        }
        seen[v] = 1;
    }

    DirichletSpectrum spectrum;
    spectrum.interior = interior;
    spectrum.interior_degrees.resize(m);
    for (int k = 0; k < m; ++k) {
        spectrum.interior_degrees[k] =
            static_cast<double>(system.outDegree(interior[k]));
    }
    Matrix sym(m, m);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            const double a = system.hasEdge(interior[r], interior[c]) ? 1.0 : 0.0;
            sym(r, c) = a / std::sqrt(spectrum.interior_degrees[r] *
                                      spectrum.interior_degrees[c]);
        }
    }
    sym = ((sym + sym.transpose()) / 2.0).eval();  // enforce exact symmetry
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::PowerIterationDiverged,
                    "symmetric eigensolver failed");
    }
    // SelfAdjointEigenSolver sorts ascending; flip to descending.
    spectrum.eigenvalues = solver.eigenvalues().reverse();
    spectrum.eigenvectors = solver.eigenvectors().rowwise().reverse();
    return spectrum;
}

namespace {

void requireGap(const DirichletSpectrum& spectrum, double s) {
    if (!(s > 0.0) || !(s < 1.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "homogeneous susceptibility must lie in (0, 1)");
    }
    if (s * spectrum.lambdaMax() >= 1.0) {
        std::ostringstream msg;
        msg << "s * lambda_max = " << s * spectrum.lambdaMax() << " >= 1";
        throw Error(ErrorCode::SpectralGapViolation, msg.str());
    }
}

}  // namespace

Matrix spectralGreen(const DirichletSpectrum& spectrum, double s) {
    requireGap(spectrum, s);
    const int m = static_cast<int>(spectrum.eigenvalues.size());
    if (m == 0) return Matrix(0, 0);
    Vector inv_gap(m);
    for (int k = 0; k < m; ++k) {
        inv_gap[k] = 1.0 / (1.0 - s * spectrum.eigenvalues[k]);
    }
    const Matrix core = spectrum.eigenvectors * inv_gap.asDiagonal() *
                        spectrum.eigenvectors.transpose();
    Matrix green(m, m);
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            green(r, c) = core(r, c) * std::sqrt(spectrum.interior_degrees[c] /
                                                 spectrum.interior_degrees[r]);
        }
    }
    return green;
}

double sharpenedRate(const DirichletSpectrum& spectrum, double s, int t) {
    requireGap(spectrum, s);
    if (t < 0) throw Error(ErrorCode::InvalidArgument, "t must be >= 0");
    return std::pow(s * spectrum.lambdaMax(), t);
}

void writeSpectrumCsv(std::ostream& out, const DirichletSpectrum& spectrum) {
    out << "k,lambda\n";
    for (Eigen::Index k = 0; k < spectrum.eigenvalues.size(); ++k) {
        out << k << ',' << formatDouble(spectrum.eigenvalues[k]) << '\n';
    }
}

}  // namespace fjlab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fjlab/datasets.hpp"
#include "fjlab/dynamics.hpp"
#include "fjlab/errors.hpp"
#include "fjlab/spectral.hpp"
#include "support/oracles.hpp"

using namespace fjlab;

namespace {

std::vector<int> complementBoundary(int n, const std::vector<int>& interior) {
    std::vector<char> inside(n, 0);
    for (int v : interior) inside[v] = 1;
    std::vector<int> boundary;
    for (int v = 0; v < n; ++v) {
        if (!inside[v]) boundary.push_back(v);
    }
    return boundary;
}

// Homogeneous-susceptibility problem on the interior, zero data elsewhere.
DirichletProblem homogeneousProblem(const InfluenceSystem& system,
                                    const std::vector<int>& interior, double s) {
    const int n = system.size();
    Vector full = Vector::Zero(n);
    for (int v : interior) full(v) = s;
    return DirichletProblem::fromFullVectors(system, SusceptibilityProfile(full),
                                             Vector::Zero(n), Vector::Zero(n));
}

}  // namespace

TEST_CASE("degree-based spectra require a random-walk system") {
    Matrix w(2, 2);
    w << 0.3, 0.7, 1.0, 0.0;  // row-stochastic but not a random walk
    InfluenceSystem system = InfluenceSystem::fromWeights(w);
    try {
        dirichletSpectrum(system, {0});
        FAIL("asymmetric weights accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotRandomWalkSystem);
    }
}

TEST_CASE("spectrum of a single-interior path is the zero eigenvalue") {
    Matrix adjacency = Matrix::Zero(3, 3);
    adjacency(0, 1) = adjacency(1, 0) = 1.0;
    adjacency(1, 2) = adjacency(2, 1) = 1.0;
    InfluenceSystem system = InfluenceSystem::randomWalk(adjacency);
    DirichletSpectrum spectrum = dirichletSpectrum(system, {1});
    REQUIRE(spectrum.eigenvalues.size() == 1);
    CHECK(spectrum.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(spectrum.interior_degrees(0) == 2.0);

    // With a single interior node, G = 1/(1 - s * 0) = 1 for every s.
    Matrix g = spectralGreen(spectrum, 0.7);
    CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("spectrum is real, descending, with orthonormal eigenvectors") {
    fjtest::Rng rng(911);
    Matrix adjacency = fjtest::randomConnectedAdjacency(rng, 18, 12);
    InfluenceSystem system = InfluenceSystem::randomWalk(adjacency);
    std::vector<int> interior;
    for (int v = 0; v < 18; v += 2) interior.push_back(v);  // even ids interior
    DirichletSpectrum spectrum = dirichletSpectrum(system, interior);

    const int m = static_cast<int>(spectrum.eigenvalues.size());
    REQUIRE(m == static_cast<int>(interior.size()));
    for (int k = 0; k + 1 < m; ++k) {
        CHECK(spectrum.eigenvalues(k) >= spectrum.eigenvalues(k + 1));
    }
    CHECK(spectrum.eigenvalues.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    Matrix gram = spectrum.eigenvectors.transpose() * spectrum.eigenvectors;
    CHECK((gram - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("karate with one stubborn node has a strict spectral gap") {
    InfluenceSystem system = karateClubSystem();
    std::vector<int> interior;
    for (int v = 1; v < 34; ++v) interior.push_back(v);
    DirichletSpectrum spectrum = dirichletSpectrum(system, interior);
    CHECK(spectrum.lambdaMax() < 1.0);
    CHECK(spectrum.lambdaMax() > 0.9);  // removing one node barely bites
}

TEST_CASE("spectral Green matches the factorization route") {
    fjtest::Rng rng(922);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = rng.uniformInt(4, 24);
        Matrix adjacency = fjtest::randomConnectedAdjacency(rng, n, n / 2);
        InfluenceSystem system = InfluenceSystem::randomWalk(adjacency);
        std::vector<int> interior;
        const int boundary_size = rng.uniformInt(1, std::max(1, n / 3));
        for (int v = boundary_size; v < n; ++v) interior.push_back(v);

        DirichletSpectrum spectrum = dirichletSpectrum(system, interior);
        for (double s : {0.3, 0.7, 0.95}) {
            Matrix via_spectrum = spectralGreen(spectrum, s);
            DirichletProblem problem = homogeneousProblem(system, interior, s);
            Matrix via_lu = greenOperator(problem, GreenMethod::Factorization);
            CHECK((via_spectrum - via_lu).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("fully interior component forces a spectral gap violation") {
    // Two triangles, boundary only in the first: the second contributes
    // lambda = 1, so s = 1 has no Green operator.
    Matrix adjacency = Matrix::Zero(6, 6);
    auto link = [&](int a, int b) { adjacency(a, b) = adjacency(b, a) = 1.0; };
    link(0, 1); link(1, 2); link(2, 0);
    link(3, 4); link(4, 5); link(5, 3);
    InfluenceSystem system = InfluenceSystem::randomWalk(adjacency);
    DirichletSpectrum spectrum = dirichletSpectrum(system, {1, 2, 3, 4, 5});
    CHECK(spectrum.lambdaMax() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(spectralGreen(spectrum, 1.0), Error);
    CHECK_NOTHROW(spectralGreen(spectrum, 0.95));
}

TEST_CASE("sharpened rate is the claimed geometric factor") {
    InfluenceSystem system = karateClubSystem();
    std::vector<int> interior;
    for (int v = 1; v < 34; ++v) interior.push_back(v);
    DirichletSpectrum spectrum = dirichletSpectrum(system, interior);
    const double s = 0.7;
    for (int t : {0, 1, 5, 20}) {
        CHECK(sharpenedRate(spectrum, s, t) ==
              doctest::Approx(std::pow(s * spectrum.lambdaMax(), t)).epsilon(1e-12));
    }
}

TEST_CASE("degree-weighted error norm contracts at the sharpened rate") {
    // The sharpened factor governs the degree-weighted 2-norm
    // ||D^{1/2} e_t|| <= (s lambda_max)^t ||D^{1/2} e_0||; verify by
    // simulation on random undirected instances.
    fjtest::Rng rng(933);
    for (int trial = 0; trial < 4; ++trial) {
        const int n = rng.uniformInt(5, 20);
        Matrix adjacency = fjtest::randomConnectedAdjacency(rng, n, n / 2);
        InfluenceSystem system = InfluenceSystem::randomWalk(adjacency);
        std::vector<int> interior;
        for (int v = 1; v < n; ++v) interior.push_back(v);
        DirichletSpectrum spectrum = dirichletSpectrum(system, interior);

        for (double s : {0.3, 0.7, 0.95}) {
            Vector s_full = Vector::Zero(n);
            for (int v : interior) s_full(v) = s;
            Vector psi = Vector::Zero(n);
            psi(0) = 1.0;
            Vector phi(n);
            for (int i = 0; i < n; ++i) phi(i) = rng.uniform(0.0, 1.0);
            DirichletProblem problem = DirichletProblem::fromFullVectors(
                system, SusceptibilityProfile(s_full), psi, phi);
            SteadyState state = steadyState(problem);

            Vector d_sqrt(spectrum.interior_degrees.size());
            for (int i = 0; i < d_sqrt.size(); ++i) {
                d_sqrt(i) = std::sqrt(spectrum.interior_degrees(i));
            }
            // Absolute 1e-12 allowance: the iterate bottoms out at the
            // factorization floor while the rate keeps shrinking.
            Vector v = problem.phi();
            const double base = (d_sqrt.asDiagonal() * (v - state.interior)).norm();
            for (int t = 0; t <= 60; ++t) {
                const double weighted =
                    (d_sqrt.asDiagonal() * (v - state.interior)).norm();
                CHECK(weighted <= sharpenedRate(spectrum, s, t) * base * (1.0 + 1e-9) + 1e-12);
                v = step(problem, v);
            }
        }
    }
}

TEST_CASE("spectrum CSV lists ranked eigenvalues") {
    Matrix adjacency = Matrix::Zero(3, 3);
    adjacency(0, 1) = adjacency(1, 0) = 1.0;
    adjacency(1, 2) = adjacency(2, 1) = 1.0;
    InfluenceSystem system = InfluenceSystem::randomWalk(adjacency);
    DirichletSpectrum spectrum = dirichletSpectrum(system, {0, 1});
    std::ostringstream out;
    writeSpectrumCsv(out, spectrum);
    CHECK(out.str().find("k,lambda") == 0);
    CHECK(out.str().find("\n0,") != std::string::npos);
}

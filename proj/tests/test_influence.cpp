#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "fjlab/datasets.hpp"
#include "fjlab/errors.hpp"
#include "fjlab/influence.hpp"
#include "support/oracles.hpp"

using namespace fjlab;

namespace {

InfluenceSystem pathSystem() {
    Matrix w(3, 3);
    w << 0.0, 1.0, 0.0,
         0.5, 0.0, 0.5,
         0.0, 1.0, 0.0;
    return InfluenceSystem::fromWeights(w);
}

DirichletProblem pathProblem(const InfluenceSystem& system) {
    Vector s(3), psi(3), phi(3);
    s << 0.5, 0.5, 0.0;
    psi << 0.0, 0.0, 1.0;
    phi << 0.0, 0.0, 0.0;
    return DirichletProblem::fromFullVectors(system, SusceptibilityProfile(s),
                                             psi, phi);
}

// Two disconnected 2-cycles; the {2, 3} cycle is fully undamped, so every
// scan sourced outside it is ill-posed.
InfluenceSystem twoCycleSystem() {
    Matrix w = Matrix::Zero(4, 4);
    w(0, 1) = w(1, 0) = 1.0;
    w(2, 3) = w(3, 2) = 1.0;
    return InfluenceSystem::fromWeights(w);
}

}  // namespace

TEST_CASE("node diagnostics on the path problem") {
    InfluenceSystem system = pathSystem();
    DirichletProblem problem = pathProblem(system);
    const auto diagnostics = nodeDiagnostics(problem, 1e-6);
    REQUIRE(diagnostics.size() == 3);

    // Boundary source: active from the start.
    CHECK(diagnostics[2].kickoff_time == 0);
    CHECK(diagnostics[2].germinated_opinion == 1.0);
    CHECK(diagnostics[2].stabilization_time == 0);
    CHECK(diagnostics[2].steady_value == 1.0);

    // Node 1 hears the boundary directly, node 0 one step later.
    CHECK(diagnostics[1].kickoff_time == 1);
    CHECK(diagnostics[1].germinated_opinion == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(diagnostics[0].kickoff_time == 2);
    CHECK(diagnostics[0].germinated_opinion == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(diagnostics[0].steady_value == doctest::Approx(1.0 / 7.0).epsilon(1e-13));
    CHECK(diagnostics[1].steady_value == doctest::Approx(2.0 / 7.0).epsilon(1e-13));

    // Stabilization marks the first trajectory entry into the epsilon band.
    SteadyState state = steadyState(problem);
    Trajectory trajectory = simulate(problem, 200);
    for (int node : {0, 1}) {
        std::int64_t expected = kInfiniteDistance;
        for (int t = 0; t <= 200; ++t) {
            if (std::abs(trajectory.states[t](node) - state.full(node)) < 1e-6) {
                expected = t;
                break;
            }
        }
        CHECK(diagnostics[node].stabilization_time == expected);
    }
}

TEST_CASE("kickoff times equal source distances when data flows from one seed") {
    fjtest::Rng rng(1111);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = rng.uniformInt(3, 12);
        InfluenceSystem system = fjtest::randomSystem(rng, n, 0.3);
        Vector s(n);
        for (int i = 0; i < n; ++i) s(i) = rng.uniform(0.05, 0.95);
        const int source = rng.uniformInt(0, n - 1);
        s(source) = 0.0;
        Vector psi = Vector::Zero(n);
        psi(source) = 1.0;
        DirichletProblem problem = DirichletProblem::fromFullVectors(
            system, SusceptibilityProfile(s), psi, Vector::Zero(n));

        // Influence travels along in-neighbor links: it reaches j at the hop
        // distance from j back to the source through listening edges.
        const auto diagnostics = nodeDiagnostics(problem, 1e-6);
        DistanceMatrix support = directedDistances(system);
        for (int j = 0; j < n; ++j) {
            if (j == source) continue;
            CHECK(diagnostics[j].kickoff_time == support.at(j, source));
        }
    }
}

TEST_CASE("numeric and structural kickoff detection agree for clean data") {
    fjtest::Rng rng(1122);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = rng.uniformInt(3, 8);
        InfluenceSystem system = fjtest::randomSystem(rng, n, 0.4);
        Vector s(n);
        for (int i = 0; i < n; ++i) s(i) = rng.uniform(0.3, 0.9);
        const int source = rng.uniformInt(0, n - 1);
        s(source) = 0.0;
        Vector psi = Vector::Zero(n);
        psi(source) = rng.uniform(0.5, 1.0);

        // phi = 0 takes the structural path; a nonzero phi entry on one
        // interior node forces the numeric walk. Nonnegative weights and
        // data rule out cancellation, so both must agree where defined.
        DirichletProblem structural = DirichletProblem::fromFullVectors(
            system, SusceptibilityProfile(s), psi, Vector::Zero(n));
        const auto structural_marks = nodeDiagnostics(structural, 1e-6);

        int seeded = source;
        while (seeded == source) seeded = rng.uniformInt(0, n - 1);
        Vector phi = Vector::Zero(n);
        phi(seeded) = rng.uniform(0.5, 1.0);
        DirichletProblem numeric = DirichletProblem::fromFullVectors(
            system, SusceptibilityProfile(s), psi, phi);
        const auto numeric_marks = nodeDiagnostics(numeric, 1e-6);

        CHECK(numeric_marks[seeded].kickoff_time == 0);
        DistanceMatrix support = directedDistances(system);
        for (int j = 0; j < n; ++j) {
            if (j == source) continue;
            const std::int64_t from_source = support.at(j, source);
            const std::int64_t from_seed =
                j == seeded ? 0
                            : (support.reachable(j, seeded) &&
                                       s(seeded) > 0.0
                                   ? support.at(j, seeded)
                                   : kInfiniteDistance);
            const std::int64_t expected = std::min(from_source, from_seed);
            if (expected == kInfiniteDistance) {
                CHECK(numeric_marks[j].kickoff_time == kInfiniteDistance);
            } else {
                CHECK(numeric_marks[j].kickoff_time == expected);
            }
            CHECK(structural_marks[j].kickoff_time == from_source);
        }
    }
}

TEST_CASE("influence matrix columns are steady responses to unit data") {
    fjtest::Rng rng(1133);
    fjtest::OwnedInstance instance = fjtest::randomInstance(rng, 9, 0.35);
    InfluenceMatrixResult result =
        influenceMatrix(instance.system, SusceptibilityProfile(instance.s));

    CHECK(result.u.minCoeff() >= 0.0);
    CHECK(result.u.maxCoeff() <= 1.0 + 1e-12);

    // Superposition: v* for data psi equals U psi plus nothing (phi = 0).
    Vector psi_full = Vector::Zero(9);
    Vector psi_block(result.boundary.size());
    for (std::size_t b = 0; b < result.boundary.size(); ++b) {
        psi_block(b) = rng.uniform(0.0, 1.0);
        psi_full(result.boundary[b]) = psi_block(b);
    }
    DirichletProblem problem = DirichletProblem::fromFullVectors(
        instance.system, SusceptibilityProfile(instance.s), psi_full,
        Vector::Zero(9));
    SteadyState state = steadyState(problem);
    CHECK((result.u * psi_block - state.interior).cwiseAbs().maxCoeff() <= 1e-12);

    // Row sums: response to psi = 1 everywhere; positive iff the node hears
    // some boundary data, never above 1.
    Vector row_sums = result.u.rowwise().sum();
    for (int r = 0; r < row_sums.size(); ++r) {
        CHECK(row_sums(r) <= 1.0 + 1e-12);
        CHECK(row_sums(r) >= 0.0);
    }
}

TEST_CASE("influence grows monotonically with susceptibility") {
    fjtest::Rng rng(1144);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniformInt(4, 10);
        fjtest::OwnedInstance instance = fjtest::randomInstance(rng, n, 0.4);
        Vector larger = instance.s;
        for (int i = 0; i < n; ++i) {
            if (larger(i) > 0.0) {
                larger(i) += rng.uniform(0.0, 1.0) * (0.999 - larger(i));
            }
        }
        InfluenceMatrixResult u_small =
            influenceMatrix(instance.system, SusceptibilityProfile(instance.s));
        InfluenceMatrixResult u_large =
            influenceMatrix(instance.system, SusceptibilityProfile(larger));
        CHECK((u_large.u - u_small.u).minCoeff() >= -1e-12);
    }
}

TEST_CASE("boundary decomposition reconstructs the steady state") {
    fjtest::Rng rng(1155);
    fjtest::OwnedInstance instance = fjtest::randomInstance(rng, 10, 0.3);
    DirichletProblem problem = instance.problem();
    BoundaryDecomposition decomposition = boundaryDecomposition(problem);
    SteadyState state = steadyState(problem);

    Vector rebuilt = decomposition.interior_term;
    for (std::size_t b = 0; b < decomposition.boundary.size(); ++b) {
        rebuilt += problem.psi()(b) * decomposition.beta.col(b);
    }
    CHECK((rebuilt - state.interior).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("scan rows replay the single-source problems") {
    InfluenceSystem system = karateClubSystem();
    Vector s = Vector::Constant(34, 0.5);
    ScanMatrices scan = scanAllVertices(system, SusceptibilityProfile(s), 1e-6);
    REQUIRE(scan.n == 34);

    for (int source : {0, 18}) {
        Vector s_run = s;
        s_run(source) = 0.0;
        Vector psi = Vector::Zero(34);
        psi(source) = 1.0;
        DirichletProblem problem = DirichletProblem::fromFullVectors(
            system, SusceptibilityProfile(s_run), psi, Vector::Zero(34));
        SteadyState state = steadyState(problem);
        const auto diagnostics = nodeDiagnostics(problem, 1e-6);
        for (int j = 0; j < 34; ++j) {
            CHECK(scan.steady_influence(source, j) ==
                  doctest::Approx(state.full(j)).epsilon(1e-12));
            CHECK(scan.kickoffAt(source, j) == diagnostics[j].kickoff_time);
            CHECK(scan.stabilizationAt(source, j) == diagnostics[j].stabilization_time);
            CHECK(scan.germinated(source, j) == diagnostics[j].germinated_opinion);
        }
    }
    CHECK(scan.steady_influence(5, 5) == 1.0);  // a source holds its unit opinion
}

TEST_CASE("scan marks sources whose problem is ill-posed") {
    InfluenceSystem system = twoCycleSystem();
    Vector s(4);
    s << 0.6, 0.6, 1.0, 1.0;
    ScanMatrices scan = scanAllVertices(system, SusceptibilityProfile(s), 1e-6);

    CHECK_FALSE(scan.row_ok[0]);
    CHECK_FALSE(scan.row_ok[1]);
    CHECK(scan.row_ok[2]);
    CHECK(scan.row_ok[3]);

    CHECK(std::isnan(scan.steady_influence(0, 2)));
    CHECK_FALSE(std::isnan(scan.steady_influence(2, 3)));
    CHECK(scan.kickoffAt(2, 0) == kInfiniteDistance);  // cross-component

    Volumes vol = volumes(scan);
    CHECK(std::isnan(vol.out_volume(0)));
    CHECK_FALSE(std::isnan(vol.out_volume(2)));
}

TEST_CASE("influence volumes balance on well-posed scans") {
    fjtest::Rng rng(1166);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = rng.uniformInt(3, 12);
        InfluenceSystem system = fjtest::randomSystem(rng, n, 0.35);
        Vector s(n);
        for (int i = 0; i < n; ++i) {
            s(i) = rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.05, 0.95);
        }
        ScanMatrices scan = scanAllVertices(system, SusceptibilityProfile(s), 1e-6);
        Volumes vol = volumes(scan);

        double out_total = 0.0;
        double in_total = 0.0;
        for (int i = 0; i < n; ++i) {
            if (scan.row_ok[i]) out_total += vol.out_volume(i);
            in_total += vol.in_volume(i);
        }
        CHECK(std::abs(out_total - in_total) <= 1e-12 * (1.0 + std::abs(out_total)));
        CHECK(vol.graph_influenceability ==
              doctest::Approx(out_total).epsilon(1e-12));
        CHECK(vol.graph_influenceability >= 0.0);
        CHECK(vol.graph_influenceability <= static_cast<double>(n) * (n - 1));
    }
}

TEST_CASE("scan CSV output marks unreachable entries as inf") {
    InfluenceSystem system = twoCycleSystem();
    Vector s(4);
    s << 0.6, 0.6, 0.5, 0.5;
    ScanMatrices scan = scanAllVertices(system, SusceptibilityProfile(s), 1e-6);
    std::ostringstream u, t, e, stab;
    writeScanCsvs(u, t, e, stab, scan);
    CHECK(t.str().find("inf") != std::string::npos);       // cross-component pair
    CHECK(u.str().find("nan") == std::string::npos);       // every row well-posed
    CHECK(t.str().find("0,1") != std::string::npos);
}

TEST_CASE("threaded scans equal the serial scan bitwise") {
    InfluenceSystem system = karateClubSystem();
    Vector s = Vector::Constant(34, 0.4);
    s(3) = 0.0;
    ScanMatrices serial = scanAllVertices(system, SusceptibilityProfile(s), 1e-6, 1000000, 1);
    ScanMatrices threaded = scanAllVertices(system, SusceptibilityProfile(s), 1e-6, 1000000, 4);
    CHECK(serial.steady_influence.cwiseEqual(threaded.steady_influence).all());
    CHECK(serial.germinated.cwiseEqual(threaded.germinated).all());
    CHECK(serial.kickoff == threaded.kickoff);
    CHECK(serial.stabilization == threaded.stabilization);
    CHECK(serial.row_ok == threaded.row_ok);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "fjlab/dynamics.hpp"
#include "fjlab/errors.hpp"
#include "support/oracles.hpp"

using namespace fjlab;

namespace {

// Path 0 - 1 - 2 with susceptible {0, 1} and boundary node 2 held at 1.
// Closed form: v* = (1/7, 2/7), rho = sqrt(1/8).
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

}  // namespace

TEST_CASE("partition splits by stubbornness and requires a boundary") {
    Vector s(4);
    s << 0.2, 0.0, 1.0, 0.0;
    Partition p = partition(SusceptibilityProfile(s));
    CHECK(p.interior == std::vector<int>{0, 2});
    CHECK(p.boundary == std::vector<int>{1, 3});

    Vector all_susceptible = Vector::Constant(3, 0.5);
    CHECK_THROWS_AS(partition(SusceptibilityProfile(all_susceptible)), Error);
}

TEST_CASE("full-vector construction restricts to the right blocks") {
    InfluenceSystem system = pathSystem();
    DirichletProblem problem = pathProblem(system);
    CHECK(problem.interior() == std::vector<int>{0, 1});
    CHECK(problem.boundary() == std::vector<int>{2});
    CHECK(problem.psi()(0) == 1.0);
    CHECK(problem.phi().size() == 2);
    CHECK(problem.interiorIndexOf(1) == 1);
    CHECK(problem.interiorIndexOf(2) == -1);
    CHECK(problem.boundaryIndexOf(2) == 0);

    // Iteration matrix S_interior W_interior and affine term by hand.
    Matrix a(2, 2);
    a << 0.0, 0.5, 0.25, 0.0;
    CHECK((problem.iterationMatrix() - a).cwiseAbs().maxCoeff() == 0.0);
    CHECK(problem.affineTerm()(0) == 0.0);
    CHECK(problem.affineTerm()(1) == 0.25);
}

TEST_CASE("steady state of the path problem matches the closed form") {
    InfluenceSystem system = pathSystem();
    DirichletProblem problem = pathProblem(system);
    SteadyState state = steadyState(problem);
    CHECK(state.interior(0) == doctest::Approx(1.0 / 7.0).epsilon(1e-14));
    CHECK(state.interior(1) == doctest::Approx(2.0 / 7.0).epsilon(1e-14));
    CHECK(state.rho == doctest::Approx(std::sqrt(0.125)).epsilon(1e-12));
    CHECK(state.residual <= 1e-14);
    CHECK(state.full(2) == 1.0);  // boundary data embedded verbatim

    // Fixed point property: step leaves it unchanged.
    Vector next = step(problem, state.interior);
    CHECK((next - state.interior).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("vanishing susceptibility freezes the interior at phi") {
    InfluenceSystem system = pathSystem();
    Vector s(3), psi(3), phi(3);
    s << 1e-13, 1e-13, 0.0;
    psi << 0.0, 0.0, 1.0;
    phi << 0.3, 0.8, 0.0;
    DirichletProblem problem = DirichletProblem::fromFullVectors(
        system, SusceptibilityProfile(s), psi, phi);
    Vector after = step(problem, problem.phi());
    CHECK((after - problem.phi()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("simulation holds the boundary fixed and converges to the steady state") {
    fjtest::Rng rng(811);
    fjtest::OwnedInstance instance = fjtest::randomInstance(rng, 10, 0.35);
    DirichletProblem problem = instance.problem();
    SteadyState state = steadyState(problem);

    Trajectory trajectory = simulate(problem, 300);
    REQUIRE(trajectory.states.size() == 301);
    for (const Vector& v : trajectory.states) {
        for (std::size_t b = 0; b < problem.boundary().size(); ++b) {
            CHECK(v(problem.boundary()[b]) == problem.psi()(b));
        }
    }
    CHECK((trajectory.states.back() - state.full).cwiseAbs().maxCoeff() <= 1e-10);

    // transient(t) is the interior slice of the trajectory.
    Vector at_40 = transient(problem, 40);
    for (int i = 0; i < problem.interiorSize(); ++i) {
        CHECK(at_40(i) == trajectory.states[40](problem.interior()[i]));
    }
}

TEST_CASE("error recursion is exact in exact arithmetic") {
    fjtest::Rng rng(822);
    for (int trial = 0; trial < 5; ++trial) {
        fjtest::OwnedInstance instance = fjtest::randomInstance(rng, 8, 0.4);
        DirichletProblem problem = instance.problem();
        for (int t : {0, 1, 3, 10, 25}) {
            auto [left, right] = errorRecursionCheck(problem, t);
            CHECK((left - right).cwiseAbs().maxCoeff() <= 1e-13);
        }
    }
}

TEST_CASE("well-posedness: undamped closed interior cycle is the only failure") {
    // 0 <-> 1 with no path to the boundary node 2.
    Matrix w(3, 3);
    w << 0.0, 1.0, 0.0,
         1.0, 0.0, 0.0,
         0.5, 0.5, 0.0;
    InfluenceSystem system = InfluenceSystem::fromWeights(w);
    Vector psi = Vector::Zero(3);
    Vector phi = Vector::Zero(3);

    SUBCASE("damped cycle without boundary access stays well-posed") {
        Vector s(3);
        s << 0.5, 0.5, 0.0;
        DirichletProblem problem = DirichletProblem::fromFullVectors(
            system, SusceptibilityProfile(s), psi, phi);
        WellPosedness report = diagnoseWellPosedness(problem);
        CHECK(report.well_posed);
        CHECK_FALSE(report.boundary_reachable);
        CHECK(report.cycles_damped);
        CHECK(report.witness_cycle.empty());
        CHECK(spectralRadius(problem) < 1.0);
    }

    SUBCASE("undamped closed cycle fails with a witness") {
        Vector s(3);
        s << 1.0, 1.0, 0.0;
        DirichletProblem problem = DirichletProblem::fromFullVectors(
            system, SusceptibilityProfile(s), psi, phi);
        WellPosedness report = diagnoseWellPosedness(problem);
        CHECK_FALSE(report.well_posed);
        CHECK_FALSE(report.boundary_reachable);
        CHECK_FALSE(report.cycles_damped);
        REQUIRE_FALSE(report.witness_cycle.empty());
        for (int v : report.witness_cycle) CHECK((v == 0 || v == 1));
        CHECK(spectralRadius(problem) == doctest::Approx(1.0).epsilon(1e-12));

        try {
            steadyState(problem);
            FAIL("ill-posed problem solved");
        } catch (const NotWellPosedError& e) {
            CHECK(std::string(e.what()).find("cycle") != std::string::npos);
        }
    }

    SUBCASE("undamped cycle that leaks to the boundary is well-posed") {
        Matrix leaky(3, 3);
        leaky << 0.0, 0.5, 0.5,
                 1.0, 0.0, 0.0,
                 0.5, 0.5, 0.0;
        InfluenceSystem leak_system = InfluenceSystem::fromWeights(leaky);
        Vector s(3);
        s << 1.0, 1.0, 0.0;
        DirichletProblem problem = DirichletProblem::fromFullVectors(
            leak_system, SusceptibilityProfile(s), psi, phi);
        WellPosedness report = diagnoseWellPosedness(problem);
        CHECK(report.well_posed);
        CHECK(report.boundary_reachable);
        CHECK_FALSE(report.cycles_damped);  // the cycle is undamped, yet open
        CHECK(spectralRadius(problem) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
        CHECK_NOTHROW(steadyState(problem));
    }
}

TEST_CASE("combinatorial gate agrees with the spectral radius on random cases") {
    fjtest::Rng rng(833);
    int checked = 0;
    while (checked < 400) {
        const int n = rng.uniformInt(2, 5);
        InfluenceSystem system = fjtest::randomSystem(rng, n, rng.uniform(0.2, 0.7));
        Vector s(n);
        bool has_zero = false;
        for (int i = 0; i < n; ++i) {
            const int pick = rng.uniformInt(0, 2);
            s(i) = pick == 0 ? 0.0 : (pick == 1 ? 0.5 : 1.0);
            has_zero = has_zero || s(i) == 0.0;
        }
        if (!has_zero) continue;
        DirichletProblem problem = DirichletProblem::fromFullVectors(
            system, SusceptibilityProfile(s), Vector::Zero(n), Vector::Zero(n));
        const bool combinatorial = diagnoseWellPosedness(problem).well_posed;
        const double rho = fjtest::denseSpectralRadius(problem.iterationMatrix());
        CHECK(combinatorial == (rho < 1.0 - 1e-9));
        ++checked;
    }
}

TEST_CASE("spectral radius routine matches a dense eigensolver") {
    fjtest::Rng rng(844);
    for (int n : {1, 5, 40, 80}) {  // 80 exercises the iterative path
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                m(i, j) = rng.bernoulli(0.2) ? rng.uniform(0.0, 1.0) : 0.0;
            }
        }
        CHECK(spectralRadius(m) ==
              doctest::Approx(fjtest::denseSpectralRadius(m)).epsilon(1e-8));
    }
}

TEST_CASE("Green operator via Neumann series matches the factorization") {
    fjtest::Rng rng(855);
    fjtest::OwnedInstance instance = fjtest::randomInstance(rng, 12, 0.3);
    DirichletProblem problem = instance.problem();
    Matrix direct = greenOperator(problem, GreenMethod::Factorization);
    Matrix series = greenOperator(problem, GreenMethod::Neumann);
    CHECK((direct - series).cwiseAbs().maxCoeff() <= 1e-12);

    NeumannOptions strangled;
    strangled.max_terms = 2;
    strangled.tolerance = 1e-300;
    CHECK_THROWS_AS(greenOperator(problem, GreenMethod::Neumann, strangled), Error);
}

TEST_CASE("rate bound envelopes the observed error") {
    fjtest::Rng rng(866);
    fjtest::OwnedInstance instance = fjtest::randomInstance(rng, 9, 0.4);
    DirichletProblem problem = instance.problem();
    SteadyState state = steadyState(problem);
    RateBound bound = rateBound(problem, 0.05, 400);
    CHECK(bound.c_delta >= 1.0);

    // The iterate converges only to the factorization floor, so once the
    // geometric bound decays past roughly 1e-16 the comparison needs an
    // absolute allowance.
    Vector v = problem.phi();
    for (int t = 0; t < static_cast<int>(bound.bound.size()); ++t) {
        const double error = (v - state.interior).cwiseAbs().maxCoeff();
        CHECK(error <= bound.bound[t] * (1.0 + 1e-12) + 1e-12);
        v = step(problem, v);
    }
}

TEST_CASE("rate bound reports when the Gelfand crossing is out of reach") {
    InfluenceSystem system = pathSystem();
    DirichletProblem problem = pathProblem(system);
    // ||A^1||_inf = 0.5 > rho + 1e-12, so t_max = 1 cannot certify.
    try {
        rateBound(problem, 1e-12, 1);
        FAIL("expected CapReached");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CapReached);
    }
}

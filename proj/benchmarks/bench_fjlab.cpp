#include <benchmark/benchmark.h>

#include "fjlab/broadcasting.hpp"
#include "fjlab/datasets.hpp"
#include "fjlab/influence.hpp"
#include "fjlab/montecarlo.hpp"

namespace {

fjlab::DirichletProblem karateProblem(const fjlab::InfluenceSystem& system) {
    fjlab::Vector s = fjlab::Vector::Constant(34, 0.5);
    s(0) = 0.0;
    fjlab::Vector psi = fjlab::Vector::Zero(34);
    psi(0) = 1.0;
    return fjlab::DirichletProblem::fromFullVectors(
        system, fjlab::SusceptibilityProfile(s), psi, fjlab::Vector::Zero(34));
}

void BM_SteadyStateKarate(benchmark::State& state) {
    const fjlab::InfluenceSystem system = fjlab::karateClubSystem();
    const fjlab::DirichletProblem problem = karateProblem(system);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fjlab::steadyState(problem).interior);
    }
}
BENCHMARK(BM_SteadyStateKarate);

void BM_ScanKarate(benchmark::State& state) {
    const fjlab::InfluenceSystem system = fjlab::karateClubSystem();
    const fjlab::SusceptibilityProfile profile(
        fjlab::Vector::Constant(34, 0.5));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fjlab::scanAllVertices(system, profile, 1e-6).steady_influence);
    }
}
BENCHMARK(BM_ScanKarate);

void BM_BroadcastingCentralitiesKarate(benchmark::State& state) {
    const fjlab::InfluenceSystem system = fjlab::karateClubSystem();
    const fjlab::SusceptibilityProfile profile(
        fjlab::Vector::Constant(34, 0.5));
    const fjlab::ScanMatrices scan =
        fjlab::scanAllVertices(system, profile, 1e-6);
    const fjlab::BroadcastingGraph graph =
        fjlab::broadcastingGraph(system, scan);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fjlab::broadcastingCentralities(graph).betweenness);
    }
}
BENCHMARK(BM_BroadcastingCentralitiesKarate);

void BM_CampaignRun(benchmark::State& state) {
    const fjlab::InfluenceSystem system = fjlab::karateClubSystem();
    fjlab::CampaignConfig config;
    config.runs = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fjlab::runCampaign(system, config).completed_runs);
    }
}
BENCHMARK(BM_CampaignRun);

}  // namespace

BENCHMARK_MAIN();

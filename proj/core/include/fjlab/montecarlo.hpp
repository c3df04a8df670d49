#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fjlab/broadcasting.hpp"
#include "fjlab/dynamics.hpp"
#include "fjlab/graph.hpp"

namespace fjlab {

struct CampaignConfig {
    long long runs = 2000;
    double p0 = 0.15;        ///< probability of a hard zero (stubborn agent)
    double mu = 0.5;         ///< Beta mean; shape parameters are mu*kappa, (1-mu)*kappa
    double kappa = 4.0;      ///< Beta concentration
    double epsilon = 1e-6;   ///< stabilization precision for scans
    double eta = kDefaultEta;
    double alpha = kDefaultAlpha;
    std::uint64_t seed = 42;
    std::string dataset = "karate";
    std::int64_t t_cap = 1000000;
    bool persist_runs = false;

    void validate() const;  ///< InvalidArgument on out-of-range fields
};

/// Strict parse: unknown keys rejected, missing keys take defaults.
CampaignConfig campaignConfigFromJson(const std::string& text);
std::string campaignConfigToJson(const CampaignConfig& config);

/// One zero-inflated Beta draw per node from the (seed, run, node)
/// substream; identical for every thread count and execution order.
SusceptibilityProfile sampleSusceptibility(const CampaignConfig& config,
                                           long long run, int nodes);

struct MeasureStats {
    double pearson;   ///< NaN when a side is constant
    double spearman;  ///< NaN when ranks are constant
    double top5;
};

struct CampaignResult {
    CampaignConfig config;
    int n = 0;
    bool connected = true;
    long long completed_runs = 0;
    long long excluded_runs = 0;       ///< ill-posed scan rows encountered
    long long bound_violation_runs = 0;
    Matrix nodewise_means;             ///< kMeasureCount x n broadcasting means
    CentralitySet classical;           ///< topology-only counterparts
    Matrix centralization_samples;     ///< runs x kMeasureCount; NaN when excluded
    std::array<MeasureStats, kMeasureCount> stats;
    std::vector<Matrix> run_centralities;  ///< persist_runs only; kMeasureCount x n each
};

/// Executes the full campaign: per run draw s, scan all vertices, build the
/// broadcasting graph, evaluate the five centralities and centralizations.
/// Runs whose scan hits an ill-posed source are excluded and counted.
/// Accumulation order is fixed by run index, so equal seeds give byte-equal
/// results for any thread count. Throws AllRunsIllPosed when nothing
/// completes.
CampaignResult runCampaign(const InfluenceSystem& system,
                           const CampaignConfig& config, int threads = 1);

}  // namespace fjlab

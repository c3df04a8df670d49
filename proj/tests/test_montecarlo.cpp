#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fjlab/artifacts.hpp"
#include "fjlab/datasets.hpp"
#include "fjlab/errors.hpp"
#include "fjlab/montecarlo.hpp"
#include "fjlab/stats.hpp"
#include "support/oracles.hpp"

using namespace fjlab;

namespace {

Vector makeVector(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

std::string readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& stem)
        : path(std::filesystem::temp_directory_path() /
               ("fjlab_test_" + stem)) {
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("pearson handles hand values and degenerate input") {
    CHECK(pearson(makeVector({1, 2, 3}), makeVector({1, 3, 2})) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(pearson(makeVector({1, 2, 3}), makeVector({3, 5, 7})) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pearson(makeVector({1, 2, 3}), makeVector({3, 2, 1})) ==
          doctest::Approx(-1.0).epsilon(1e-14));
    try {
        pearson(makeVector({1, 1, 1}), makeVector({1, 2, 3}));
        FAIL("expected ZeroVariance");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroVariance);
    }
    CHECK_THROWS_AS(pearson(makeVector({1, 2}), makeVector({1, 2, 3})), Error);
}

TEST_CASE("ranks average over ties and spearman follows") {
    Vector ranks = averageRanks(makeVector({2, 1, 2}));
    CHECK(ranks(0) == 2.5);
    CHECK(ranks(1) == 1.0);
    CHECK(ranks(2) == 2.5);

    CHECK(spearman(makeVector({1, 5, 9, 20}), makeVector({2, 3, 4, 50})) ==
          doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spearman(makeVector({1, 2, 3, 4}), makeVector({1, 2, 4, 3})) ==
          doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("top-k overlap counts shared leaders") {
    Vector x = makeVector({0.9, 0.5, 0.3, 0.1, 0.0});
    CHECK(topKOverlap(x, x, 3) == 1.0);
    Vector y = makeVector({0.0, 0.1, 0.3, 0.5, 0.9});
    CHECK(topKOverlap(x, y, 2) == 0.0);
    Vector z = makeVector({0.9, 0.0, 0.3, 0.5, 0.1});
    CHECK(topKOverlap(x, z, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("histogram bins conserve counts and handle edge cases") {
    Histogram h = histogram({0.0, 1.0}, 2);
    REQUIRE(h.counts.size() == 2);
    CHECK(h.counts[0] == 1);
    CHECK(h.counts[1] == 1);
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() == 1.0);

    Histogram constant = histogram({0.4, 0.4, 0.4}, 5);
    CHECK(constant.counts[0] == 3);
    long long total = 0;
    for (long long c : constant.counts) total += c;
    CHECK(total == 3);

    try {
        histogram({}, 3);
        FAIL("expected EmptySample");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptySample);
    }
    CHECK_THROWS_AS(histogram({std::nan("")}, 3), Error);
    CHECK_THROWS_AS(histogram({1.0}, 0), Error);
}

TEST_CASE("least squares recovers an exact line") {
    Vector x = makeVector({0, 1, 2, 3});
    Vector y = makeVector({1, 3, 5, 7});
    LeastSquares fit = leastSquaresFit(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(leastSquaresFit(makeVector({2, 2, 2}), y), Error);
}

TEST_CASE("susceptibility sampling is a pure function of seed, run, node") {
    CampaignConfig config;
    SusceptibilityProfile a = sampleSusceptibility(config, 7, 34);
    SusceptibilityProfile b = sampleSusceptibility(config, 7, 34);
    CHECK(a.values().cwiseEqual(b.values()).all());

    SusceptibilityProfile c = sampleSusceptibility(config, 8, 34);
    CHECK_FALSE(a.values().cwiseEqual(c.values()).all());

    CampaignConfig other = config;
    other.seed = 43;
    SusceptibilityProfile d = sampleSusceptibility(other, 7, 34);
    CHECK_FALSE(a.values().cwiseEqual(d.values()).all());
}

TEST_CASE("sampling marginals match the zero-inflated Beta law") {
    CampaignConfig config;
    config.p0 = 0.15;
    config.mu = 0.5;
    config.kappa = 4.0;

    long long zeros = 0;
    KahanAccumulator mean;
    const long long runs = 2000;
    const int nodes = 34;
    const double draws = static_cast<double>(runs) * nodes;
    for (long long r = 0; r < runs; ++r) {
        SusceptibilityProfile s = sampleSusceptibility(config, r, nodes);
        for (int i = 0; i < nodes; ++i) {
            const double v = s.values()(i);
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
            if (v == 0.0) ++zeros;
            mean.add(v);
        }
    }
    // Binomial and CLT three-sigma envelopes around the exact moments.
    const double zero_rate = static_cast<double>(zeros) / draws;
    const double zero_sigma = std::sqrt(0.15 * 0.85 / draws);
    CHECK(std::abs(zero_rate - 0.15) <= 3.0 * zero_sigma);

    // Var of one draw: (1-p0)(Var_beta + mu^2) - ((1-p0) mu)^2.
    const double beta_var = 0.25 / 5.0;
    const double second_moment = 0.85 * (beta_var + 0.25);
    const double expected_mean = 0.85 * 0.5;
    const double var = second_moment - expected_mean * expected_mean;
    const double mean_sigma = std::sqrt(var / draws);
    CHECK(std::abs(mean.value() / draws - expected_mean) <= 3.0 * mean_sigma);

    // Degenerate parameters collapse the law.
    CampaignConfig all_zero = config;
    all_zero.p0 = 1.0;
    SusceptibilityProfile z = sampleSusceptibility(all_zero, 3, 10);
    CHECK(z.values().cwiseAbs().maxCoeff() == 0.0);

    CampaignConfig spiked = config;
    spiked.p0 = 0.0;
    spiked.kappa = 1e8;
    SusceptibilityProfile concentrated = sampleSusceptibility(spiked, 5, 200);
    for (int i = 0; i < 200; ++i) {
        CHECK(std::abs(concentrated.values()(i) - 0.5) <= 0.005);
    }
}

TEST_CASE("campaign config round-trips through JSON and rejects unknowns") {
    CampaignConfig config;
    config.runs = 123;
    config.p0 = 0.2;
    config.mu = 0.4;
    config.kappa = 3.5;
    config.epsilon = 1e-5;
    config.eta = 2e-8;
    config.alpha = 0.9;
    config.seed = 777;
    config.dataset = "karate";
    const std::string text = campaignConfigToJson(config);
    CampaignConfig parsed = campaignConfigFromJson(text);
    CHECK(parsed.runs == config.runs);
    CHECK(parsed.p0 == config.p0);
    CHECK(parsed.mu == config.mu);
    CHECK(parsed.kappa == config.kappa);
    CHECK(parsed.epsilon == config.epsilon);
    CHECK(parsed.eta == config.eta);
    CHECK(parsed.alpha == config.alpha);
    CHECK(parsed.seed == config.seed);
    CHECK(parsed.dataset == config.dataset);

    CHECK(campaignConfigFromJson("{}").runs == 2000);  // defaults apply

    try {
        campaignConfigFromJson("{\"runz\": 5}");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
    CHECK_THROWS_AS(campaignConfigFromJson("{\"p0\": 1.5}"), Error);
}

TEST_CASE("a single-run campaign equals the direct evaluation") {
    InfluenceSystem system = karateClubSystem();
    CampaignConfig config;
    config.runs = 1;
    config.persist_runs = true;
    CampaignResult result = runCampaign(system, config);
    REQUIRE(result.completed_runs == 1);
    CHECK(result.excluded_runs == 0);
    REQUIRE(result.run_centralities.size() == 1);

    SusceptibilityProfile s = sampleSusceptibility(config, 0, 34);
    ScanMatrices scan = scanAllVertices(system, s, config.epsilon, config.t_cap);
    BroadcastingGraph graph = broadcastingGraph(system, scan);
    CentralitySet direct = broadcastingCentralities(graph, config.eta, config.alpha);

    const Matrix& run = result.run_centralities[0];
    CHECK(run.row(0).transpose().cwiseEqual(direct.degree).all());
    CHECK(run.row(1).transpose().cwiseEqual(direct.closeness).all());
    CHECK(run.row(2).transpose().cwiseEqual(direct.betweenness).all());
    CHECK(run.row(3).transpose().cwiseEqual(direct.eigenvector).all());
    CHECK(run.row(4).transpose().cwiseEqual(direct.pagerank).all());

    // Means over one run are the run itself.
    CHECK(result.nodewise_means.cwiseEqual(run).all());
    CHECK(result.centralization_samples(0, 0) ==
          centralization(direct.degree));
}

TEST_CASE("equal seeds give equal campaigns, different seeds do not") {
    InfluenceSystem system = karateClubSystem();
    CampaignConfig config;
    config.runs = 12;
    CampaignResult first = runCampaign(system, config);
    CampaignResult second = runCampaign(system, config);
    CHECK(first.nodewise_means.cwiseEqual(second.nodewise_means).all());
    CHECK(first.centralization_samples.cwiseEqual(second.centralization_samples).all());

    CampaignConfig reseeded = config;
    reseeded.seed = 99;
    CampaignResult third = runCampaign(system, reseeded);
    CHECK_FALSE(first.nodewise_means.cwiseEqual(third.nodewise_means).all());
}

TEST_CASE("thread count never changes campaign artifacts") {
    InfluenceSystem system = karateClubSystem();
    CampaignConfig config;
    config.runs = 24;
    CampaignResult serial = runCampaign(system, config, 1);
    CampaignResult threaded = runCampaign(system, config, 2);

    TempDir dir_a("artifacts_serial");
    TempDir dir_b("artifacts_threaded");
    const auto files_a = writeCampaignArtifacts(serial, dir_a.path.string());
    const auto files_b = writeCampaignArtifacts(threaded, dir_b.path.string());
    REQUIRE(files_a == files_b);
    for (const std::string& name : files_a) {
        CHECK_MESSAGE(readFile(dir_a.path / name) == readFile(dir_b.path / name),
                      "artifact differs across thread counts: ", name);
    }
}

TEST_CASE("campaign artifacts cover the documented set") {
    InfluenceSystem system = karateClubSystem();
    CampaignConfig config;
    config.runs = 6;
    config.persist_runs = true;
    CampaignResult result = runCampaign(system, config);
    TempDir dir("artifact_names");
    const auto files = writeCampaignArtifacts(result, dir.path.string());

    auto has = [&](const std::string& name) {
        for (const auto& f : files) {
            if (f == name) return true;
        }
        return false;
    };
    CHECK(has("manifest.json"));
    CHECK(has("nodewise_means.csv"));
    CHECK(has("correlations.csv"));
    CHECK(has("centralizations.csv"));
    CHECK(has("runs.csv"));
    int svg = 0;
    int csv = 0;
    for (const auto& f : files) {
        if (f.size() > 4 && f.compare(f.size() - 4, 4, ".svg") == 0) ++svg;
        if (f.size() > 4 && f.compare(f.size() - 4, 4, ".csv") == 0) ++csv;
    }
    CHECK(svg >= 2 * kMeasureCount);  // histogram + scatter per measure
    CHECK(csv >= kMeasureCount + 4);

    // The manifest round-trips to the exact configuration.
    CampaignConfig parsed =
        campaignConfigFromJson(readFile(dir.path / "manifest.json"));
    CHECK(parsed.runs == config.runs);
    CHECK(parsed.seed == config.seed);
    CHECK(parsed.dataset == config.dataset);

    // Without persistence there is no runs.csv.
    CampaignConfig quiet = config;
    quiet.persist_runs = false;
    CampaignResult lean = runCampaign(system, quiet);
    TempDir lean_dir("artifact_lean");
    const auto lean_files = writeCampaignArtifacts(lean, lean_dir.path.string());
    for (const auto& f : lean_files) CHECK(f != "runs.csv");

    // Correlations sheet carries one row per measure.
    const std::string correlations = readFile(dir.path / "correlations.csv");
    for (int m = 0; m < kMeasureCount; ++m) {
        CHECK(correlations.find(kMeasureNames[m]) != std::string::npos);
    }
}

TEST_CASE("campaign statistics stay finite on a healthy configuration") {
    InfluenceSystem system = karateClubSystem();
    CampaignConfig config;
    config.runs = 40;
    CampaignResult result = runCampaign(system, config);
    CHECK(result.completed_runs == 40);
    CHECK(result.excluded_runs == 0);
    CHECK(result.bound_violation_runs == 0);
    CHECK(result.n == 34);
    CHECK(result.connected);

    // Degree correlation against classical degree is strongly positive even
    // in small samples; the remaining stats must at least be well-defined.
    CHECK(result.stats[0].pearson > 0.5);
    for (int m = 0; m < kMeasureCount; ++m) {
        CHECK(result.stats[m].top5 >= 0.0);
        CHECK(result.stats[m].top5 <= 1.0);
        if (!std::isnan(result.stats[m].pearson)) {
            CHECK(std::abs(result.stats[m].pearson) <= 1.0 + 1e-12);
        }
        if (!std::isnan(result.stats[m].spearman)) {
            CHECK(std::abs(result.stats[m].spearman) <= 1.0 + 1e-12);
        }
    }
    for (int m = 0; m < kMeasureCount; ++m) {
        for (int i = 0; i < result.n; ++i) {
            CHECK(std::isfinite(result.nodewise_means(m, i)));
            CHECK(result.nodewise_means(m, i) >= 0.0);
        }
    }
}

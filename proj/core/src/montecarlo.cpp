#include "fjlab/montecarlo.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "fjlab/parallel.hpp"
#include "fjlab/rng.hpp"
#include "fjlab/stats.hpp"
#include "json_support.hpp"

namespace fjlab {

namespace {

// Fixed batch width decouples scheduling from accumulation order.
constexpr long long kRunBatch = 256;
constexpr double kBoundSlack = 1e-12;

double statOrNan(double (*stat)(const Vector&, const Vector&), const Vector& x,
                 const Vector& y) {
    try {
        return stat(x, y);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ZeroVariance) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        throw;
    }
}

const Vector& measureOf(const CentralitySet& set, int m) {
    switch (m) {
        case 0: return set.degree;
        case 1: return set.closeness;
        case 2: return set.betweenness;
        case 3: return set.eigenvector;
        default: return set.pagerank;
    }
}

}  // namespace

void CampaignConfig::validate() const {
    if (runs < 1) throw Error(ErrorCode::InvalidArgument, "runs must be >= 1");
    if (!(p0 >= 0.0 && p0 <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "p0 must lie in [0,1]");
    }
    if (!(mu > 0.0 && mu < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "mu must lie in (0,1)");
    }
    if (!(kappa > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
    }
    if (!(epsilon > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    }
    if (!(eta >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "eta must be nonnegative");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0,1)");
    }
    if (t_cap < 0) {
        throw Error(ErrorCode::InvalidArgument, "t_cap must be >= 0");
    }
    if (dataset.empty()) {
        throw Error(ErrorCode::InvalidArgument, "dataset must be set");
    }
}

CampaignConfig campaignConfigFromJson(const std::string& text) {
    const nlohmann::json j = parseJsonText(text);
    if (!j.is_object()) {
        throw Error(ErrorCode::ParseError, "campaign config must be an object");
    }
    CampaignConfig config;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "runs") {
                config.runs = value.get<long long>();
            } else if (key == "p0") {
                config.p0 = value.get<double>();
            } else if (key == "mu") {
                config.mu = value.get<double>();
            } else if (key == "kappa") {
                config.kappa = value.get<double>();
            } else if (key == "epsilon") {
                config.epsilon = value.get<double>();
            } else if (key == "eta") {
                config.eta = value.get<double>();
            } else if (key == "alpha") {
                config.alpha = value.get<double>();
            } else if (key == "seed") {
                config.seed = value.get<std::uint64_t>();
            } else if (key == "dataset") {
                config.dataset = value.get<std::string>();
            } else if (key == "t_cap") {
                config.t_cap = value.get<std::int64_t>();
            } else if (key == "persist_runs") {
                config.persist_runs = value.get<bool>();
            } else {
                throw Error(ErrorCode::ParseError,
                            "unknown campaign config key: " + key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError,
                    std::string("campaign config: ") + e.what());
    }
    config.validate();
    return config;
}

std::string campaignConfigToJson(const CampaignConfig& config) {
    nlohmann::ordered_json j;
    j["runs"] = config.runs;
    j["p0"] = config.p0;
    j["mu"] = config.mu;
    j["kappa"] = config.kappa;
    j["epsilon"] = config.epsilon;
    j["eta"] = config.eta;
    j["alpha"] = config.alpha;
    j["seed"] = config.seed;
    j["dataset"] = config.dataset;
    j["t_cap"] = config.t_cap;
    j["persist_runs"] = config.persist_runs;
    return j.dump(2) + "\n";
}

SusceptibilityProfile sampleSusceptibility(const CampaignConfig& config,
                                           long long run, int nodes) {
    config.validate();
    if (nodes < 1) {
        throw Error(ErrorCode::InvalidArgument, "nodes must be >= 1");
    }
    const double a = config.mu * config.kappa;
    const double b = (1.0 - config.mu) * config.kappa;
    Vector s(nodes);
    for (int i = 0; i < nodes; ++i) {
        SplitMix64 rng = substream(config.seed, static_cast<std::uint64_t>(run),
                                   static_cast<std::uint64_t>(i));
        const double gate = rng.nextDouble();
        s[i] = gate < config.p0 ? 0.0 : sampleBeta(rng, a, b);
    }
    return SusceptibilityProfile(std::move(s));
}

CampaignResult runCampaign(const InfluenceSystem& system,
                           const CampaignConfig& config, int threads) {
    config.validate();
    const int n = system.size();
    if (n < 2) {
        throw Error(ErrorCode::InvalidArgument,
                    "campaign needs at least 2 nodes");
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();

    CampaignResult result;
    result.config = config;
    result.n = n;
    result.classical = classicalCentralities(system, config.eta, config.alpha,
                                             threads);
    result.centralization_samples =
        Matrix::Constant(static_cast<Eigen::Index>(config.runs), kMeasureCount,
                         nan);
    if (config.persist_runs) {
        result.run_centralities.assign(static_cast<std::size_t>(config.runs),
                                       Matrix());
    }

    // Hop distances in both orientations are draw-independent.
    const DistanceMatrix support_distances = directedDistances(system, threads);
    const DistanceMatrix influence_distances = support_distances.transposed();
    result.connected = true;
    for (int i = 0; i < n && result.connected; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!support_distances.reachable(i, j)) {
                result.connected = false;
                break;
            }
        }
    }

    // Bounds that every run must respect, fixed by the topology.
    Vector degree_cap = Vector::Zero(n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (system.weights()(b, a) > 0.0) degree_cap[a] += 1.0;
        }
    }
    degree_cap /= static_cast<double>(n - 1);
    Vector closeness_cap(n);
    for (int i = 0; i < n; ++i) {
        closeness_cap[i] = outCloseness(influence_distances, i);
    }

    std::vector<std::vector<KahanAccumulator>> sums(
        kMeasureCount, std::vector<KahanAccumulator>(n));

    struct RunOutput {
        CentralitySet set;
        std::array<double, kMeasureCount> centralizations;
        bool ok = false;
        bool bound_violated = false;
    };

    for (long long base = 0; base < config.runs; base += kRunBatch) {
        const long long batch =
            std::min(kRunBatch, config.runs - base);
        std::vector<RunOutput> outputs(static_cast<std::size_t>(batch));
        parallelFor(static_cast<int>(batch), threads, [&](int offset) {
            const long long run = base + offset;
            RunOutput& out = outputs[static_cast<std::size_t>(offset)];
            const SusceptibilityProfile profile =
                sampleSusceptibility(config, run, n);
            const ScanMatrices scan = scanAllVertices(
                system, profile, config.epsilon, config.t_cap, 1);
            for (int i = 0; i < n; ++i) {
                if (!scan.row_ok[i]) return;  // excluded, out.ok stays false
            }
            const BroadcastingGraph graph =
                broadcastingGraph(system, scan, influence_distances);
            out.set = broadcastingCentralities(graph, config.eta, config.alpha, 1);

            for (int i = 0; i < n; ++i) {
                if (out.set.degree[i] > degree_cap[i] + kBoundSlack ||
                    out.set.closeness[i] > closeness_cap[i] + kBoundSlack ||
                    out.set.degree[i] < -kBoundSlack ||
                    out.set.closeness[i] < -kBoundSlack ||
                    out.set.betweenness[i] < -kBoundSlack ||
                    out.set.betweenness[i] > 1.0 + kBoundSlack) {
                    out.bound_violated = true;
                }
            }
            if (std::abs(out.set.eigenvector.sum() - 1.0) > kBoundSlack ||
                std::abs(out.set.pagerank.sum() - 1.0) > kBoundSlack) {
                out.bound_violated = true;
            }

            for (int m = 0; m < kMeasureCount; ++m) {
                out.centralizations[static_cast<std::size_t>(m)] =
                    centralization(measureOf(out.set, m));
            }
            out.ok = true;
        });

        for (long long offset = 0; offset < batch; ++offset) {
            const long long run = base + offset;
            const RunOutput& out = outputs[static_cast<std::size_t>(offset)];
            if (!out.ok) {
                ++result.excluded_runs;
                continue;
            }
            ++result.completed_runs;
            if (out.bound_violated) ++result.bound_violation_runs;
            for (int m = 0; m < kMeasureCount; ++m) {
                const Vector& values = measureOf(out.set, m);
                for (int i = 0; i < n; ++i) {
                    sums[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)]
                        .add(values[i]);
                }
                result.centralization_samples(static_cast<Eigen::Index>(run), m) =
                    out.centralizations[static_cast<std::size_t>(m)];
            }
            if (config.persist_runs) {
                Matrix per_run(kMeasureCount, n);
                for (int m = 0; m < kMeasureCount; ++m) {
                    per_run.row(m) = measureOf(out.set, m).transpose();
                }
                result.run_centralities[static_cast<std::size_t>(run)] =
                    std::move(per_run);
            }
        }
    }

    if (result.completed_runs == 0) {
        throw Error(ErrorCode::AllRunsIllPosed,
                    "every campaign run hit an ill-posed scan");
    }

    result.nodewise_means = Matrix::Zero(kMeasureCount, n);
    for (int m = 0; m < kMeasureCount; ++m) {
        for (int i = 0; i < n; ++i) {
            result.nodewise_means(m, i) =
                sums[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)]
                    .value() /
                static_cast<double>(result.completed_runs);
        }
    }

    const int k = std::min(5, n);
    for (int m = 0; m < kMeasureCount; ++m) {
        const Vector& x = measureOf(result.classical, m);
        const Vector y = result.nodewise_means.row(m).transpose();
        result.stats[static_cast<std::size_t>(m)].pearson =
            statOrNan(pearson, x, y);
        result.stats[static_cast<std::size_t>(m)].spearman =
            statOrNan(spearman, x, y);
        result.stats[static_cast<std::size_t>(m)].top5 = topKOverlap(x, y, k);
    }
    return result;
}

}  // namespace fjlab

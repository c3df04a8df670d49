// fjlab: steady states, diagnostics, all-vertex scans, broadcasting
// centralities, and Monte Carlo campaigns for stubborn-agent opinion
// dynamics, written out as reproducible file artifacts.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fjlab/artifacts.hpp"
#include "fjlab/broadcasting.hpp"
#include "fjlab/datasets.hpp"
#include "fjlab/dynamics.hpp"
#include "fjlab/graph_io.hpp"
#include "fjlab/influence.hpp"
#include "fjlab/montecarlo.hpp"
#include "fjlab/problem_io.hpp"
#include "fjlab/sensitivity.hpp"
#include "fjlab/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

int defaultThreads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string defaultOutDir() {
    const char* env = std::getenv("FJLAB_OUT_DIR");
    return env && *env ? env : ".";
}

std::ofstream openOut(const fs::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw fjlab::Error(fjlab::ErrorCode::IoError,
                           "cannot write " + path.string());
    }
    return out;
}

void writeText(const fs::path& path, const std::string& text) {
    openOut(path) << text;
}

std::string timeToken(std::int64_t t) {
    return t == fjlab::kInfiniteDistance ? "inf" : std::to_string(t);
}

/// Shared graph selection: a builtin dataset name or an edge list file
/// (symmetrized, random-walk weights).
struct GraphChoice {
    std::string dataset;
    std::string edges_path;

    fjlab::InfluenceSystem load() const {
        if (!edges_path.empty()) {
            const fjlab::EdgeList list = fjlab::readEdgeListFile(edges_path);
            return fjlab::InfluenceSystem::randomWalk(
                fjlab::edgeListToAdjacency(list, true));
        }
        return fjlab::loadBuiltinDataset(dataset);
    }
    std::string describe() const {
        return edges_path.empty() ? dataset : edges_path;
    }
    void attach(CLI::App* cmd) {
        auto* d = cmd->add_option("--dataset", dataset,
                                  "builtin dataset name (see `datasets`)");
        auto* e = cmd->add_option("--edges", edges_path,
                                  "edge list file: `i j` per line, 0-based");
        d->excludes(e);
        e->excludes(d);
    }
};

/// Shared susceptibility selection: a constant or a per-node file.
struct ProfileChoice {
    double constant = 0.5;
    std::string file;

    fjlab::SusceptibilityProfile load(int n) const {
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in) {
                throw fjlab::Error(fjlab::ErrorCode::IoError,
                                   "cannot read " + file);
            }
            fjlab::Vector s(n);
            for (int i = 0; i < n; ++i) {
                if (!(in >> s[i])) {
                    throw fjlab::Error(
                        fjlab::ErrorCode::ParseError,
                        file + ": expected " + std::to_string(n) + " values");
                }
            }
            double extra;
            if (in >> extra) {
                throw fjlab::Error(fjlab::ErrorCode::ParseError,
                                   file + ": more values than nodes");
            }
            return fjlab::SusceptibilityProfile(std::move(s));
        }
        return fjlab::SusceptibilityProfile(
            fjlab::Vector::Constant(n, constant));
    }
    std::string describe() const {
        return file.empty() ? fjlab::formatDouble(constant) : file;
    }
    void attach(CLI::App* cmd) {
        auto* c = cmd->add_option("--s", constant,
                                  "uniform susceptibility value");
        auto* f = cmd->add_option("--s-file", file,
                                  "susceptibility file, one value per node");
        f->excludes(c);
    }
};

ordered_json diagnosisJson(const fjlab::WellPosedness& wp) {
    ordered_json j;
    j["well_posed"] = wp.well_posed;
    j["boundary_reachable"] = wp.boundary_reachable;
    j["cycles_damped"] = wp.cycles_damped;
    j["witness_cycle"] = wp.witness_cycle;
    return j;
}

int cmdSolve(const std::string& problem_path, const std::string& out_dir) {
    const fjlab::ProblemSpec spec = fjlab::readProblemFile(problem_path);
    const fjlab::DirichletProblem problem = spec.problem();
    const auto wp = fjlab::diagnoseWellPosedness(problem);
    fs::create_directories(out_dir);

    if (!wp.well_posed) {
        ordered_json j;
        j["problem"] = problem_path;
        j["diagnosis"] = diagnosisJson(wp);
        try {
            fjlab::steadyState(problem);
        } catch (const fjlab::NotWellPosedError& e) {
            if (e.spectral_radius) j["rho"] = *e.spectral_radius;
            writeText(fs::path(out_dir) / "solution.json", j.dump(2) + "\n");
            std::cerr << "fjlab: " << e.what() << '\n';
            return 3;
        }
    }

    const fjlab::SteadyState ss = fjlab::steadyState(problem);
    ordered_json j;
    j["problem"] = problem_path;
    j["rho"] = ss.rho;
    j["residual"] = ss.residual;
    j["refinements"] = ss.refinements;
    j["diagnosis"] = diagnosisJson(wp);
    j["v_star"] = std::vector<double>(ss.full.data(),
                                      ss.full.data() + ss.full.size());
    writeText(fs::path(out_dir) / "solution.json", j.dump(2) + "\n");

    auto csv = openOut(fs::path(out_dir) / "solution.csv");
    csv << "node,value\n";
    for (int i = 0; i < problem.system().size(); ++i) {
        csv << i << ',' << fjlab::formatDouble(ss.full[i]) << '\n';
    }
    std::cout << "solved " << problem_path << ": rho "
              << fjlab::formatDouble(ss.rho) << ", residual "
              << fjlab::formatDouble(ss.residual) << '\n';
    return 0;
}

int cmdDiagnose(const std::string& problem_path, double epsilon,
                std::int64_t t_cap, bool spectrum, int threads,
                const std::string& out_dir) {
    const fjlab::ProblemSpec spec = fjlab::readProblemFile(problem_path);
    const fjlab::DirichletProblem problem = spec.problem();
    const auto wp = fjlab::diagnoseWellPosedness(problem);
    fs::create_directories(out_dir);

    ordered_json j;
    j["problem"] = problem_path;
    j["epsilon"] = epsilon;
    j["diagnosis"] = diagnosisJson(wp);
    if (!wp.well_posed) {
        j["rho"] = fjlab::spectralRadius(problem);
        writeText(fs::path(out_dir) / "wellposed.json", j.dump(2) + "\n");
        std::cerr << "fjlab: problem is not well-posed; witness cycle in "
                     "wellposed.json\n";
        return 3;
    }
    const fjlab::SteadyState ss = fjlab::steadyState(problem);
    j["rho"] = ss.rho;
    writeText(fs::path(out_dir) / "wellposed.json", j.dump(2) + "\n");

    const auto diags = fjlab::nodeDiagnostics(problem, epsilon, t_cap);
    {
        auto csv = openOut(fs::path(out_dir) / "diagnostics.csv");
        csv << "node,kickoff_time,germinated_opinion,stabilization_time,"
               "steady_value\n";
        for (std::size_t i = 0; i < diags.size(); ++i) {
            const auto& d = diags[i];
            csv << i << ',' << timeToken(d.kickoff_time) << ','
                << fjlab::formatDouble(d.germinated_opinion) << ','
                << timeToken(d.stabilization_time) << ','
                << fjlab::formatDouble(d.steady_value) << '\n';
        }
    }
    {
        const auto reports = fjlab::allGradients(problem, threads);
        auto csv = openOut(fs::path(out_dir) / "sensitivity.csv");
        fjlab::writeSensitivityCsv(csv, problem, reports);
    }
    if (spectrum) {
        const auto spec_result =
            fjlab::dirichletSpectrum(spec.system, problem.interior());
        auto csv = openOut(fs::path(out_dir) / "spectrum.csv");
        fjlab::writeSpectrumCsv(csv, spec_result);
    }
    std::cout << "diagnosed " << problem_path << ": rho "
              << fjlab::formatDouble(ss.rho) << ", " << diags.size()
              << " nodes\n";
    return 0;
}

int cmdScan(const GraphChoice& graph, const ProfileChoice& profile_choice,
            double epsilon, std::int64_t t_cap, int threads,
            const std::string& out_dir) {
    const fjlab::InfluenceSystem system = graph.load();
    const auto profile = profile_choice.load(system.size());
    const auto scan =
        fjlab::scanAllVertices(system, profile, epsilon, t_cap, threads);
    fs::create_directories(out_dir);

    auto u = openOut(fs::path(out_dir) / "U_inf.csv");
    auto t = openOut(fs::path(out_dir) / "T.csv");
    auto e = openOut(fs::path(out_dir) / "E.csv");
    auto s = openOut(fs::path(out_dir) / "S_eps.csv");
    fjlab::writeScanCsvs(u, t, e, s, scan);

    ordered_json manifest;
    manifest["command"] = "scan";
    manifest["graph"] = graph.describe();
    manifest["susceptibility"] = profile_choice.describe();
    manifest["epsilon"] = epsilon;
    manifest["t_cap"] = t_cap;
    writeText(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");

    int skipped = 0;
    for (char ok : scan.row_ok) skipped += ok ? 0 : 1;
    std::cout << "scanned " << scan.n << " sources";
    if (skipped) std::cout << " (" << skipped << " ill-posed rows)";
    std::cout << '\n';
    return 0;
}

void writeCentralityCsv(std::ostream& out, int n,
                        const fjlab::CentralitySet& ob,
                        const fjlab::CentralitySet& classical,
                        const fjlab::CentralitySet* reception) {
    out << "node,obdeg,obclose,obbet,obeig,obpr,degree,closeness,betweenness,"
           "eigenvector,pagerank";
    if (reception) out << ",robdeg,robclose,robbet,robeig,robpr";
    out << '\n';
    const auto row = [&](const fjlab::CentralitySet& set, int i) {
        out << ',' << fjlab::formatDouble(set.degree[i]) << ','
            << fjlab::formatDouble(set.closeness[i]) << ','
            << fjlab::formatDouble(set.betweenness[i]) << ','
            << fjlab::formatDouble(set.eigenvector[i]) << ','
            << fjlab::formatDouble(set.pagerank[i]);
    };
    for (int i = 0; i < n; ++i) {
        out << i;
        row(ob, i);
        row(classical, i);
        if (reception) row(*reception, i);
        out << '\n';
    }
}

ordered_json centralizationJson(const fjlab::CentralitySet& set) {
    ordered_json j;
    j["obdeg"] = fjlab::centralization(set.degree);
    j["obclose"] = fjlab::centralization(set.closeness);
    j["obbet"] = fjlab::centralization(set.betweenness);
    j["obeig"] = fjlab::centralization(set.eigenvector);
    j["obpr"] = fjlab::centralization(set.pagerank);
    return j;
}

int cmdCentrality(const GraphChoice& graph,
                  const ProfileChoice& profile_choice, double epsilon,
                  std::int64_t t_cap, double eta, double alpha, bool reception,
                  int threads, const std::string& out_dir) {
    const fjlab::InfluenceSystem system = graph.load();
    const auto profile = profile_choice.load(system.size());
    const auto scan =
        fjlab::scanAllVertices(system, profile, epsilon, t_cap, threads);
    const auto bg = fjlab::broadcastingGraph(system, scan);
    const auto ob = fjlab::broadcastingCentralities(bg, eta, alpha, threads);
    const auto classical =
        fjlab::classicalCentralities(system, eta, alpha, threads);
    fjlab::CentralitySet reception_set;
    if (reception) {
        reception_set = fjlab::broadcastingCentralities(
            fjlab::receptionGraph(bg), eta, alpha, threads);
    }
    fs::create_directories(out_dir);
    {
        auto csv = openOut(fs::path(out_dir) / "centrality.csv");
        writeCentralityCsv(csv, system.size(), ob, classical,
                           reception ? &reception_set : nullptr);
    }
    {
        ordered_json j;
        j["broadcasting"] = centralizationJson(ob);
        ordered_json cj;
        cj["degree"] = fjlab::centralization(classical.degree);
        cj["closeness"] = fjlab::centralization(classical.closeness);
        cj["betweenness"] = fjlab::centralization(classical.betweenness);
        cj["eigenvector"] = fjlab::centralization(classical.eigenvector);
        cj["pagerank"] = fjlab::centralization(classical.pagerank);
        j["classical"] = cj;
        if (reception) j["reception"] = centralizationJson(reception_set);
        writeText(fs::path(out_dir) / "centralizations.json",
                  j.dump(2) + "\n");
    }
    ordered_json manifest;
    manifest["command"] = "centrality";
    manifest["graph"] = graph.describe();
    manifest["susceptibility"] = profile_choice.describe();
    manifest["epsilon"] = epsilon;
    manifest["t_cap"] = t_cap;
    manifest["eta"] = eta;
    manifest["alpha"] = alpha;
    manifest["reception"] = reception;
    writeText(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    std::cout << "centralities for " << system.size() << " nodes written\n";
    return 0;
}

int cmdCampaign(const fjlab::CampaignConfig& config, int threads,
                const std::string& out_dir) {
    const fjlab::InfluenceSystem system =
        fjlab::isBuiltinDataset(config.dataset)
            ? fjlab::loadBuiltinDataset(config.dataset)
            : fjlab::InfluenceSystem::randomWalk(fjlab::edgeListToAdjacency(
                  fjlab::readEdgeListFile(config.dataset), true));
    const auto result = fjlab::runCampaign(system, config, threads);
    if (!result.connected) {
        std::cerr << "fjlab: warning: graph is not strongly connected; "
                     "centrality comparisons may be degenerate\n";
    }
    const auto files = fjlab::writeCampaignArtifacts(result, out_dir);
    std::cout << "campaign " << config.dataset << ": "
              << result.completed_runs << " runs completed, "
              << result.excluded_runs << " excluded, "
              << result.bound_violation_runs << " bound violations\n";
    for (int m = 0; m < fjlab::kMeasureCount; ++m) {
        const auto& s = result.stats[static_cast<std::size_t>(m)];
        std::cout << "  " << fjlab::kMeasureNames[m] << ": pearson "
                  << fjlab::formatDouble(s.pearson) << ", spearman "
                  << fjlab::formatDouble(s.spearman) << ", top5 "
                  << fjlab::formatDouble(s.top5) << '\n';
    }
    std::cout << files.size() << " files in " << out_dir << '\n';
    return 0;
}

int cmdDatasets() {
    for (const auto& info : fjlab::builtinDatasets()) {
        std::cout << info.name << ": " << info.nodes << " nodes, "
                  << info.edges << " edges, " << info.description << '\n';
    }
    return 0;
}

int mapError(const fjlab::Error& e) {
    switch (e.code()) {
        case fjlab::ErrorCode::ParseError:
            return 2;
        case fjlab::ErrorCode::NotWellPosed:
            return 3;
        case fjlab::ErrorCode::CapReached:
            return 4;
        default:
            return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"opinion dynamics with stubborn agents: solvers, scans, "
                 "centralities, campaigns"};
    app.require_subcommand(1);
    int threads = defaultThreads();
    app.add_option("--threads", threads,
                   "worker threads for library parallelism")
        ->check(CLI::PositiveNumber);

    std::string out_dir = defaultOutDir();
    const auto addOut = [&out_dir](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* solve = app.add_subcommand("solve", "steady state of a problem file");
    std::string solve_path;
    solve->add_option("problem", solve_path, "problem JSON file")->required();
    addOut(solve);

    auto* diagnose =
        app.add_subcommand("diagnose", "per-node transient diagnostics, "
                                       "sensitivities, well-posedness");
    std::string diagnose_path;
    double diag_epsilon = 1e-6;
    std::int64_t diag_cap = 1000000;
    bool diag_spectrum = false;
    diagnose->add_option("problem", diagnose_path, "problem JSON file")
        ->required();
    diagnose->add_option("--epsilon", diag_epsilon, "stabilization precision");
    diagnose->add_option("--t-cap", diag_cap, "simulation step cap");
    diagnose->add_flag("--spectrum", diag_spectrum,
                       "also write the interior spectrum (random-walk "
                       "systems only)");
    addOut(diagnose);

    auto* scan = app.add_subcommand(
        "scan", "all-vertex source scan: response, kickoff, germination, "
                "stabilization matrices");
    GraphChoice scan_graph;
    ProfileChoice scan_profile;
    double scan_epsilon = 1e-6;
    std::int64_t scan_cap = 1000000;
    scan_graph.attach(scan);
    scan_profile.attach(scan);
    scan->add_option("--epsilon", scan_epsilon, "stabilization precision");
    scan->add_option("--t-cap", scan_cap, "simulation step cap");
    addOut(scan);

    auto* centrality = app.add_subcommand(
        "centrality", "broadcasting and classical centralities");
    GraphChoice cent_graph;
    ProfileChoice cent_profile;
    double cent_epsilon = 1e-6;
    std::int64_t cent_cap = 1000000;
    double cent_eta = fjlab::kDefaultEta;
    double cent_alpha = fjlab::kDefaultAlpha;
    bool cent_reception = false;
    cent_graph.attach(centrality);
    cent_profile.attach(centrality);
    centrality->add_option("--epsilon", cent_epsilon,
                           "stabilization precision");
    centrality->add_option("--t-cap", cent_cap, "simulation step cap");
    centrality->add_option("--eta", cent_eta, "eigenvector regularization");
    centrality->add_option("--alpha", cent_alpha, "PageRank damping");
    centrality->add_flag("--reception", cent_reception,
                         "also compute reception-side measures");
    addOut(centrality);

    auto* campaign = app.add_subcommand(
        "campaign", "Monte Carlo campaign over susceptibility draws");
    std::string config_path;
    fjlab::CampaignConfig config;
    campaign->add_option("--config", config_path, "campaign config JSON");
    campaign->add_option("--runs", config.runs, "number of runs");
    campaign->add_option("--p0", config.p0, "zero-inflation probability");
    campaign->add_option("--mu", config.mu, "Beta mean");
    campaign->add_option("--kappa", config.kappa, "Beta concentration");
    campaign->add_option("--epsilon", config.epsilon,
                         "stabilization precision");
    campaign->add_option("--eta", config.eta, "eigenvector regularization");
    campaign->add_option("--alpha", config.alpha, "PageRank damping");
    campaign->add_option("--seed", config.seed, "campaign seed");
    campaign->add_option("--dataset", config.dataset,
                         "builtin dataset or edge list file");
    campaign->add_option("--t-cap", config.t_cap, "simulation step cap");
    campaign->add_flag("--persist-runs", config.persist_runs,
                       "persist per-run centrality values");
    addOut(campaign);

    auto* datasets = app.add_subcommand("datasets", "list builtin datasets");
    (void)datasets;

    // Parent options (--threads) may appear after the subcommand name.
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmdSolve(solve_path, out_dir);
        if (diagnose->parsed()) {
            return cmdDiagnose(diagnose_path, diag_epsilon, diag_cap,
                               diag_spectrum, threads, out_dir);
        }
        if (scan->parsed()) {
            return cmdScan(scan_graph, scan_profile, scan_epsilon, scan_cap,
                           threads, out_dir);
        }
        if (centrality->parsed()) {
            return cmdCentrality(cent_graph, cent_profile, cent_epsilon,
                                 cent_cap, cent_eta, cent_alpha,
                                 cent_reception, threads, out_dir);
        }
        if (campaign->parsed()) {
            if (!config_path.empty()) {
                // Flags override file values: re-parse flags after loading.
                std::ifstream in(config_path);
                if (!in) {
                    throw fjlab::Error(fjlab::ErrorCode::IoError,
                                       "cannot read " + config_path);
                }
                std::ostringstream buffer;
                buffer << in.rdbuf();
                fjlab::CampaignConfig from_file =
                    fjlab::campaignConfigFromJson(buffer.str());
                // Only fields the user set on the command line win.
                if (!campaign->count("--runs")) config.runs = from_file.runs;
                if (!campaign->count("--p0")) config.p0 = from_file.p0;
                if (!campaign->count("--mu")) config.mu = from_file.mu;
                if (!campaign->count("--kappa")) config.kappa = from_file.kappa;
                if (!campaign->count("--epsilon")) {
                    config.epsilon = from_file.epsilon;
                }
                if (!campaign->count("--eta")) config.eta = from_file.eta;
                if (!campaign->count("--alpha")) config.alpha = from_file.alpha;
                if (!campaign->count("--seed")) config.seed = from_file.seed;
                if (!campaign->count("--dataset")) {
                    config.dataset = from_file.dataset;
                }
                if (!campaign->count("--t-cap")) config.t_cap = from_file.t_cap;
                if (!campaign->count("--persist-runs")) {
                    config.persist_runs = from_file.persist_runs;
                }
            }
            config.validate();
            return cmdCampaign(config, threads, out_dir);
        }
        return cmdDatasets();
    } catch (const fjlab::Error& e) {
        std::cerr << "fjlab: error: " << e.what() << '\n';
        return mapError(e);
    } catch (const std::exception& e) {
        std::cerr << "fjlab: error: " << e.what() << '\n';
        return 1;
    }
}

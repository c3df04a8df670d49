#include "fjlab/problem_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "json_support.hpp"

namespace fjlab {

namespace {

Matrix matrixFromJson(const nlohmann::json& rows, const std::string& key) {
    if (!rows.is_array() || rows.empty()) {
        throw Error(ErrorCode::ParseError, key + " must be a nonempty array");
    }
    const auto n = rows.size();
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || row.size() != n) {
            throw Error(ErrorCode::ParseError,
                        key + " row " + std::to_string(i) +
                            " must have " + std::to_string(n) + " entries");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!row[j].is_number()) {
                throw Error(ErrorCode::ParseError,
                            key + " entry (" + std::to_string(i) + "," +
                                std::to_string(j) + ") is not a number");
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                row[j].get<double>();
        }
    }
    return m;
}

/// Node-keyed object ("psi"/"phi") into a full-length vector; every listed
/// node must belong to the expected class.
Vector nodeValues(const nlohmann::json& obj, const std::string& key, int n,
                  const Vector& s, bool expect_boundary) {
    Vector values = Vector::Zero(n);
    if (!obj.is_object()) {
        throw Error(ErrorCode::ParseError, key + " must be an object");
    }
    for (const auto& [node_key, value] : obj.items()) {
        int node = -1;
        try {
            std::size_t used = 0;
            node = std::stoi(node_key, &used);
            if (used != node_key.size()) node = -1;
        } catch (...) {
            node = -1;
        }
        if (node < 0 || node >= n) {
            throw Error(ErrorCode::ParseError,
                        key + " key '" + node_key + "' is not a node id");
        }
        if (!value.is_number()) {
            throw Error(ErrorCode::ParseError,
                        key + " value at node " + node_key + " is not a number");
        }
        const bool boundary = s[node] == 0.0;
        if (boundary != expect_boundary) {
            throw Error(ErrorCode::ParseError,
                        key + " lists node " + node_key +
                            (expect_boundary ? " which is susceptible"
                                             : " which is stubborn"));
        }
        values[node] = value.get<double>();
    }
    return values;
}

}  // namespace

DirichletProblem ProblemSpec::problem() const {
    return DirichletProblem::fromFullVectors(system, susceptibility, psi_full,
                                             phi_full);
}

ProblemSpec readProblemJson(const std::string& text) {
    const nlohmann::json j = parseJsonText(text);
    if (!j.is_object()) {
        throw Error(ErrorCode::ParseError, "problem file must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "weights" && key != "adjacency" && key != "labels" &&
            key != "susceptibility" && key != "psi" && key != "phi") {
            throw Error(ErrorCode::ParseError, "unknown problem key: " + key);
        }
    }
    const bool has_weights = j.contains("weights");
    const bool has_adjacency = j.contains("adjacency");
    if (has_weights == has_adjacency) {
        throw Error(ErrorCode::ParseError,
                    "exactly one of weights/adjacency is required");
    }

    std::vector<std::string> labels;
    if (j.contains("labels")) {
        const auto& raw = j.at("labels");
        if (!raw.is_array()) {
            throw Error(ErrorCode::ParseError, "labels must be an array");
        }
        for (const auto& item : raw) {
            if (!item.is_string()) {
                throw Error(ErrorCode::ParseError, "labels must be strings");
            }
            labels.push_back(item.get<std::string>());
        }
    }

    InfluenceSystem system =
        has_weights
            ? InfluenceSystem::fromWeights(matrixFromJson(j.at("weights"),
                                                          "weights"),
                                           labels)
            : InfluenceSystem::randomWalk(matrixFromJson(j.at("adjacency"),
                                                         "adjacency"),
                                          labels);
    const int n = system.size();

    if (!j.contains("susceptibility")) {
        throw Error(ErrorCode::ParseError, "susceptibility is required");
    }
    const auto& s_raw = j.at("susceptibility");
    if (!s_raw.is_array() || s_raw.size() != static_cast<std::size_t>(n)) {
        throw Error(ErrorCode::ParseError,
                    "susceptibility must list " + std::to_string(n) +
                        " values");
    }
    Vector s(n);
    for (int i = 0; i < n; ++i) {
        const auto& item = s_raw[static_cast<std::size_t>(i)];
        if (!item.is_number()) {
            throw Error(ErrorCode::ParseError,
                        "susceptibility entry " + std::to_string(i) +
                            " is not a number");
        }
        s[i] = item.get<double>();
    }
    SusceptibilityProfile profile(s);

    const nlohmann::json empty = nlohmann::json::object();
    Vector psi = nodeValues(j.contains("psi") ? j.at("psi") : empty, "psi", n,
                            s, /*expect_boundary=*/true);
    Vector phi = nodeValues(j.contains("phi") ? j.at("phi") : empty, "phi", n,
                            s, /*expect_boundary=*/false);

    return ProblemSpec{std::move(system), std::move(profile), std::move(psi),
                       std::move(phi)};
}

ProblemSpec readProblemFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot read " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return readProblemJson(buffer.str());
}

}  // namespace fjlab

#pragma once

#include <string>

#include "fjlab/dynamics.hpp"
#include "fjlab/graph.hpp"

namespace fjlab {

/// A problem file bundles the influence system with full-length boundary
/// and initial data. psi_full/phi_full carry one slot per node; entries at
/// nodes of the other class are zero.
struct ProblemSpec {
    InfluenceSystem system;
    SusceptibilityProfile susceptibility;
    Vector psi_full;
    Vector phi_full;

    /// The returned problem references this spec's system; keep the spec
    /// alive while the problem is in use.
    DirichletProblem problem() const;
};

/// JSON schema: {"weights": [[...]]} or {"adjacency": [[0/1...]]} (the
/// latter builds the random-walk system), optional "labels", required
/// "susceptibility" array, optional "psi"/"phi" objects keyed by node id
/// with unlisted nodes defaulting to 0. Unknown keys, type mismatches, and
/// data at nodes of the wrong class are ParseError; malformed JSON reports
/// line and column.
ProblemSpec readProblemJson(const std::string& text);

/// Reads the file (IoError when unreadable) and delegates to
/// readProblemJson.
ProblemSpec readProblemFile(const std::string& path);

}  // namespace fjlab

#ifndef FJLAB_DATASETS_HPP
#define FJLAB_DATASETS_HPP

#include <string>
#include <utility>
#include <vector>

#include "fjlab/graph.hpp"

namespace fjlab {

/// Zachary's karate club: 34 nodes, 78 undirected edges, 0-based ids.
const std::vector<std::pair<int, int>>& karateClubEdges();
Matrix karateClubAdjacency();

/// Random-walk influence system on the karate club graph.
InfluenceSystem karateClubSystem();

struct DatasetInfo {
    std::string name;
    int nodes;
    int edges;
    std::string description;
};

const std::vector<DatasetInfo>& builtinDatasets();
bool isBuiltinDataset(const std::string& name);

/// Loads a builtin dataset by name; throws InvalidArgument for unknown names.
InfluenceSystem loadBuiltinDataset(const std::string& name);

}  // namespace fjlab

#endif

#ifndef FJLAB_GRAPH_IO_HPP
#define FJLAB_GRAPH_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include "fjlab/graph.hpp"

namespace fjlab {

/// Plain-text edge list: one "i j [w]" triple per line, 0-based ids,
/// '#' starts a comment, blank lines allowed. Weight defaults to 1.
struct EdgeList {
    int nodes = 0;  // max id + 1
    std::vector<std::tuple<int, int, double>> edges;
};

EdgeList readEdgeList(std::istream& in);
EdgeList readEdgeListFile(const std::string& path);

/// 0/1 adjacency with every edge mirrored; weights are ignored.
Matrix edgeListToAdjacency(const EdgeList& list, bool symmetrize = true);

/// Dense weight matrix with the listed directed weights; duplicate (i, j)
/// entries raise ParseError.
Matrix edgeListToWeights(const EdgeList& list);

/// Dense comma-separated matrix, one row per line. All rows must agree in
/// length; "inf" / "nan" tokens are accepted.
Matrix readDenseCsv(std::istream& in);
Matrix readDenseCsvFile(const std::string& path);

/// Formats with up to 17 significant digits, enough to round-trip a double.
std::string formatDouble(double value);

void writeMatrixCsv(std::ostream& out, const Matrix& m);

/// Integer distance matrix; kInfiniteDistance prints as "inf".
void writeDistanceCsv(std::ostream& out, const DistanceMatrix& d);

}  // namespace fjlab

#endif

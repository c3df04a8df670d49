#include "fjlab/graph_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace fjlab {

namespace {

[[noreturn]] void parseFail(int line, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line << ": " << what;
    throw Error(ErrorCode::ParseError, msg.str());
}

}  // namespace

EdgeList readEdgeList(std::istream& in) {
    EdgeList list;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream line(raw);
        long long i, j;
        if (!(line >> i)) continue;  // blank or comment-only line
        if (!(line >> j)) parseFail(line_no, "expected two node ids");
        double w = 1.0;
        if (!line.eof()) {
            if (!(line >> w)) parseFail(line_no, "bad edge weight");
        }
        std::string trailing;
        if (line >> trailing) parseFail(line_no, "unexpected trailing token '" + trailing + "'");
        if (i < 0 || j < 0) parseFail(line_no, "node ids must be non-negative");
        if (i > std::numeric_limits<int>::max() || j > std::numeric_limits<int>::max()) {
            parseFail(line_no, "node id out of range");
        }
        list.edges.emplace_back(static_cast<int>(i), static_cast<int>(j), w);
        list.nodes = std::max({list.nodes, static_cast<int>(i) + 1,
                               static_cast<int>(j) + 1});
    }
    if (list.edges.empty()) {
        throw Error(ErrorCode::ParseError, "edge list contains no edges");
    }
    return list;
}

EdgeList readEdgeListFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    return readEdgeList(in);
}

Matrix edgeListToAdjacency(const EdgeList& list, bool symmetrize) {
    Matrix a = Matrix::Zero(list.nodes, list.nodes);
    for (const auto& [i, j, w] : list.edges) {
        (void)w;
        a(i, j) = 1.0;
        if (symmetrize) a(j, i) = 1.0;
    }
    return a;
}

Matrix edgeListToWeights(const EdgeList& list) {
    Matrix w = Matrix::Zero(list.nodes, list.nodes);
    std::map<std::pair<int, int>, int> seen;
    for (const auto& [i, j, v] : list.edges) {
        if (++seen[{i, j}] > 1) {
            std::ostringstream msg;
            msg << "duplicate edge (" << i << ", " << j << ")";
            throw Error(ErrorCode::ParseError, msg.str());
        }
        w(i, j) = v;
    }
    return w;
}

Matrix readDenseCsv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (raw.empty() || raw[0] == '#') continue;
        std::vector<double> row;
        std::istringstream line(raw);
        std::string cell;
        while (std::getline(line, cell, ',')) {
            const auto first = cell.find_first_not_of(" \t\r");
            if (first == std::string::npos) parseFail(line_no, "empty cell");
            const auto last = cell.find_last_not_of(" \t\r");
            cell = cell.substr(first, last - first + 1);
            if (cell == "inf") {
                row.push_back(std::numeric_limits<double>::infinity());
            } else if (cell == "-inf") {
                row.push_back(-std::numeric_limits<double>::infinity());
            } else if (cell == "nan") {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            } else {
                std::size_t used = 0;
                double v = 0.0;
                try {
                    v = std::stod(cell, &used);
                } catch (const std::exception&) {
                    parseFail(line_no, "bad number '" + cell + "'");
                }
                if (used != cell.size()) parseFail(line_no, "bad number '" + cell + "'");
                row.push_back(v);
            }
        }
        if (row.empty()) parseFail(line_no, "empty row");
        if (!rows.empty() && row.size() != rows.front().size()) {
            parseFail(line_no, "row length differs from first row");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::ParseError, "matrix file is empty");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

Matrix readDenseCsvFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    return readDenseCsv(in);
}

std::string formatDouble(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void writeMatrixCsv(std::ostream& out, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << formatDouble(m(i, j));
        }
        out << '\n';
    }
}

void writeDistanceCsv(std::ostream& out, const DistanceMatrix& d) {
    for (int i = 0; i < d.size(); ++i) {
        for (int j = 0; j < d.size(); ++j) {
            if (j) out << ',';
            if (d(i, j) == kInfiniteDistance) {
                out << "inf";
            } else {
                out << d(i, j);
            }
        }
        out << '\n';
    }
}

}  // namespace fjlab

#include "fjlab/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fjlab/graph_io.hpp"

namespace fjlab {

namespace {

const char* const kObNames[kMeasureCount] = {"obdeg", "obclose", "obbet",
                                             "obeig", "obpr"};

std::string fixed(double v, int precision = 4) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", precision, v);
    return buffer;
}

std::string compact(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

std::ofstream openOut(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }
    return out;
}

struct Bounds {
    double lo;
    double hi;

    explicit Bounds(const Vector& v) {
        lo = v.minCoeff();
        hi = v.maxCoeff();
        const double span = hi - lo;
        const double pad = span > 0.0 ? 0.05 * span : 0.5;
        lo -= pad;
        hi += pad;
    }
    double place(double v, double out_lo, double out_hi) const {
        return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
    }
};

}  // namespace

std::string renderHistogramSvg(const Histogram& histogram,
                               const std::string& title) {
    const int bins = static_cast<int>(histogram.counts.size());
    long long peak = 1;
    for (long long c : histogram.counts) peak = std::max(peak, c);

    // Plot area inside a 640x400 canvas.
    const double x0 = 60, x1 = 620, y0 = 350, y1 = 50;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
           "height=\"400\" viewBox=\"0 0 640 400\">\n"
        << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n"
        << "<text x=\"320\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";
    for (int b = 0; b < bins; ++b) {
        const double left = x0 + (x1 - x0) * b / bins;
        const double width = (x1 - x0) / bins;
        const double height =
            (y0 - y1) * static_cast<double>(histogram.counts[b]) /
            static_cast<double>(peak);
        svg << "<rect x=\"" << fixed(left + 1) << "\" y=\""
            << fixed(y0 - height) << "\" width=\"" << fixed(width - 2)
            << "\" height=\"" << fixed(height)
            << "\" fill=\"#4878a8\" stroke=\"none\"/>\n";
    }
    svg << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0) << "\" x2=\""
        << fixed(x1) << "\" y2=\"" << fixed(y0)
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0) << "\" x2=\""
        << fixed(x0) << "\" y2=\"" << fixed(y1) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fixed(x0) << "\" y=\"372\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << compact(histogram.edges.front()) << "</text>\n"
        << "<text x=\"" << fixed(x1) << "\" y=\"372\" text-anchor=\"end\" "
           "font-family=\"sans-serif\" font-size=\"12\">"
        << compact(histogram.edges.back()) << "</text>\n"
        << "<text x=\"" << fixed(x0 - 6) << "\" y=\"" << fixed(y1 + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << peak << "</text>\n"
        << "</svg>\n";
    return svg.str();
}

std::string renderScatterSvg(const Vector& x, const Vector& y,
                             const LeastSquares* fit,
                             const std::string& title) {
    const Bounds bx(x);
    const Bounds by(y);
    const double x0 = 60, x1 = 620, y0 = 350, y1 = 50;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
           "height=\"400\" viewBox=\"0 0 640 400\">\n"
        << "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n"
        << "<text x=\"320\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n"
        << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0) << "\" x2=\""
        << fixed(x1) << "\" y2=\"" << fixed(y0)
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(y0) << "\" x2=\""
        << fixed(x0) << "\" y2=\"" << fixed(y1) << "\" stroke=\"black\"/>\n";
    if (fit) {
        const double ya = fit->slope * bx.lo + fit->intercept;
        const double yb = fit->slope * bx.hi + fit->intercept;
        svg << "<line x1=\"" << fixed(x0) << "\" y1=\""
            << fixed(by.place(ya, y0, y1)) << "\" x2=\"" << fixed(x1)
            << "\" y2=\"" << fixed(by.place(yb, y0, y1))
            << "\" stroke=\"#c04040\" stroke-width=\"1.5\"/>\n";
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        svg << "<circle cx=\"" << fixed(bx.place(x[i], x0, x1)) << "\" cy=\""
            << fixed(by.place(y[i], y0, y1))
            << "\" r=\"3\" fill=\"#305080\"/>\n";
    }
    svg << "<text x=\"" << fixed(x0) << "\" y=\"372\" "
           "font-family=\"sans-serif\" font-size=\"12\">"
        << compact(bx.lo) << "</text>\n"
        << "<text x=\"" << fixed(x1) << "\" y=\"372\" text-anchor=\"end\" "
           "font-family=\"sans-serif\" font-size=\"12\">"
        << compact(bx.hi) << "</text>\n"
        << "<text x=\"320\" y=\"392\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"12\">classical</text>\n"
        << "<text x=\"16\" y=\"200\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 16 200)\">mc mean</text>\n"
        << "</svg>\n";
    return svg.str();
}

std::vector<std::string> writeCampaignArtifacts(const CampaignResult& result,
                                                const std::string& directory) {
    namespace fs = std::filesystem;
    const fs::path dir(directory);
    fs::create_directories(dir);
    std::vector<std::string> files;
    const auto track = [&](const std::string& name) {
        files.push_back(name);
        return openOut(dir / name);
    };

    {
        auto out = track("manifest.json");
        out << campaignConfigToJson(result.config);
    }
    {
        auto out = track("nodewise_means.csv");
        out << "node";
        for (const char* name : kObNames) out << ',' << name;
        for (int m = 0; m < kMeasureCount; ++m) out << ',' << kMeasureNames[m];
        out << '\n';
        for (int i = 0; i < result.n; ++i) {
            out << i;
            for (int m = 0; m < kMeasureCount; ++m) {
                out << ',' << formatDouble(result.nodewise_means(m, i));
            }
            const CentralitySet& c = result.classical;
            const Vector* classical[kMeasureCount] = {
                &c.degree, &c.closeness, &c.betweenness, &c.eigenvector,
                &c.pagerank};
            for (int m = 0; m < kMeasureCount; ++m) {
                out << ',' << formatDouble((*classical[m])[i]);
            }
            out << '\n';
        }
    }
    {
        auto out = track("correlations.csv");
        out << "measure,pearson,spearman,top5_overlap\n";
        for (int m = 0; m < kMeasureCount; ++m) {
            const MeasureStats& s = result.stats[static_cast<std::size_t>(m)];
            out << kMeasureNames[m] << ',' << formatDouble(s.pearson) << ','
                << formatDouble(s.spearman) << ',' << formatDouble(s.top5)
                << '\n';
        }
    }
    {
        auto out = track("centralizations.csv");
        out << "run";
        for (const char* name : kObNames) out << ',' << name;
        out << '\n';
        for (Eigen::Index r = 0; r < result.centralization_samples.rows(); ++r) {
            out << r;
            for (int m = 0; m < kMeasureCount; ++m) {
                out << ',' << formatDouble(result.centralization_samples(r, m));
            }
            out << '\n';
        }
    }

    for (int m = 0; m < kMeasureCount; ++m) {
        std::vector<double> samples;
        for (Eigen::Index r = 0; r < result.centralization_samples.rows(); ++r) {
            const double v = result.centralization_samples(r, m);
            if (std::isfinite(v)) samples.push_back(v);
        }
        const Histogram h = histogram(samples, kHistogramBins);
        {
            auto out = track(std::string("hist_") + kMeasureNames[m] + ".csv");
            out << "bin_lo,bin_hi,count\n";
            for (std::size_t b = 0; b < h.counts.size(); ++b) {
                out << formatDouble(h.edges[b]) << ','
                    << formatDouble(h.edges[b + 1]) << ',' << h.counts[b]
                    << '\n';
            }
        }
        {
            auto out = track(std::string("hist_") + kMeasureNames[m] + ".svg");
            out << renderHistogramSvg(
                h, std::string(kObNames[m]) + " centralization");
        }

        const CentralitySet& c = result.classical;
        const Vector* classical[kMeasureCount] = {&c.degree, &c.closeness,
                                                  &c.betweenness,
                                                  &c.eigenvector, &c.pagerank};
        const Vector& x = *classical[m];
        const Vector y = result.nodewise_means.row(m).transpose();
        LeastSquares fit;
        bool have_fit = true;
        try {
            fit = leastSquaresFit(x, y);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ZeroVariance) throw;
            have_fit = false;
        }
        {
            auto out = track(std::string("scatter_") + kMeasureNames[m] +
                             ".csv");
            if (have_fit) {
                out << "# least_squares slope=" << formatDouble(fit.slope)
                    << " intercept=" << formatDouble(fit.intercept) << '\n';
            } else {
                out << "# least_squares undefined (constant classical values)\n";
            }
            out << "node,classical,mc_mean\n";
            for (int i = 0; i < result.n; ++i) {
                out << i << ',' << formatDouble(x[i]) << ','
                    << formatDouble(y[i]) << '\n';
            }
        }
        {
            auto out = track(std::string("scatter_") + kMeasureNames[m] +
                             ".svg");
            out << renderScatterSvg(x, y, have_fit ? &fit : nullptr,
                                    std::string(kObNames[m]) +
                                        " vs " + kMeasureNames[m]);
        }
    }

    if (result.config.persist_runs) {
        auto out = track("runs.csv");
        out << "run,measure,node,value\n";
        for (std::size_t r = 0; r < result.run_centralities.size(); ++r) {
            const Matrix& values = result.run_centralities[r];
            if (values.size() == 0) continue;  // excluded run
            for (int m = 0; m < kMeasureCount; ++m) {
                for (int i = 0; i < result.n; ++i) {
                    out << r << ',' << kObNames[m] << ',' << i << ','
                        << formatDouble(values(m, i)) << '\n';
                }
            }
        }
    }
    return files;
}

}  // namespace fjlab

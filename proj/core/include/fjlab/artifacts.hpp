#pragma once

#include <string>
#include <vector>

#include "fjlab/montecarlo.hpp"
#include "fjlab/stats.hpp"

namespace fjlab {

inline constexpr int kHistogramBins = 30;

/// Writes the campaign artifact set into directory (created if absent):
/// manifest.json, nodewise_means.csv, correlations.csv, centralizations.csv,
/// per-measure histogram and scatter files (CSV + SVG), and runs.csv when
/// per-run values were persisted. Returns the relative file names written,
/// in write order. All numbers use 17-significant-digit formatting so equal
/// results give byte-equal files.
std::vector<std::string> writeCampaignArtifacts(const CampaignResult& result,
                                                const std::string& directory);

std::string renderHistogramSvg(const Histogram& histogram,
                               const std::string& title);

/// fit may be null when the abscissa is constant; the line is then omitted.
std::string renderScatterSvg(const Vector& x, const Vector& y,
                             const LeastSquares* fit, const std::string& title);

}  // namespace fjlab

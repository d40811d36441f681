#pragma once

#include <string>
#include <vector>

#include "wfpca/metrics.hpp"

namespace wfpca::harness {

inline constexpr const char* kResultHeader = "model,alpha,n,p,replicate,mse_fn,rse_val,is_population";

void write_csv(const std::vector<metrics::ErrorRecord>& rows, const std::string& path);
std::vector<metrics::ErrorRecord> read_csv(const std::string& path);

enum class FigureKind { MseVsN, MseVsP, MeanMseVsP, RseVsP, MeanRseVsP };

FigureKind parse_figure(const std::string& s);
std::string figure_name(FigureKind k);

/// One plotted curve: the x values are n for MseVsN and p otherwise.
struct Series {
  std::string label;
  double alpha = 0.0;
  std::vector<metrics::Point> points;
};

/// Curves of a figure, built from the per-cell means of the matching rows.
/// Throws EmptyTable when nothing matches.
std::vector<Series> figure_series(const std::vector<metrics::ErrorRecord>& rows, FigureKind kind);

/// Exponent of the reference line drawn for a curve with the given alpha.
double reference_slope(FigureKind kind, double alpha);

/// Log-log polyline chart with one dashed reference line per alpha.
void emit_svg(const std::vector<metrics::ErrorRecord>& rows, FigureKind kind, const std::string& path);

}  // namespace wfpca::harness

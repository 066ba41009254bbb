#pragma once

// Static SVG line plots and their CSV tables. Output bytes depend only on
// the input values.

#include <filesystem>
#include <string>
#include <vector>

#include "nlkl/experiment.hpp"
#include "nlkl/lcurve.hpp"
#include "nlkl/wave.hpp"

namespace nlkl {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
};

/// Non-finite points (and nonpositive ones on log axes) are skipped.
std::string line_plot_svg(const PlotSpec& spec, const std::vector<Series>& series);

/// One error-vs-dx SVG and one CSV per (kernel, nsr) group of the report.
/// Returns the written paths; an empty report writes nothing.
std::vector<std::filesystem::path> emit_plots(const RunReport& report,
                                              const std::filesystem::path& outdir);

std::string estimate_overlay_svg(const std::vector<double>& r, const std::vector<double>& estimate,
                                 const std::vector<double>& truth);
std::string lcurve_svg(const LCurve& curve, double chosen_lambda);
std::string dispersion_svg(const DispersionCurve& curve);

}  // namespace nlkl

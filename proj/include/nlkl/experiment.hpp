#pragma once

// Synthetic convergence sweeps over mesh size, noise level, number of pairs
// and replicate, with resumable per-cell results and CSV reports.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nlkl/pipeline.hpp"
#include "nlkl/synthetic.hpp"

#include "json.hpp"

namespace nlkl {

struct ExperimentConfig {
  TrueKernelSpec kernel;
  std::vector<double> dx_ladder{0.2, 0.1, 0.05};
  std::vector<double> nsr_ladder{0.0, 1.0};
  std::size_t replicates = 1;
  int degree = 2;
  std::vector<RegularizerKind> regularizers{RegularizerKind::L2small, RegularizerKind::L2rho,
                                            RegularizerKind::RKHS};
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "sweep_out";

  double half_width = 40.0;
  InputFamily family = InputFamily::SinCos;
  std::vector<std::size_t> pairs_ladder{2};
  std::size_t ladder_size = 8;
  std::size_t lcurve_points = 60;
  double quadrature_tol = 1e-10;
  /// Estimate R on the noiseless data of each mesh; noise on every node
  /// otherwise spreads the thresholded support of f over the whole domain.
  bool noiseless_support = true;
  bool resume = true;
};

/// Throws Config on invalid or unknown values.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);
void validate(const ExperimentConfig& cfg);

struct CellRecord {
  std::string kernel;
  double dx = 0.0;
  double nsr = 0.0;
  std::size_t pairs = 0;
  std::string regularizer;
  std::size_t replicate = 0;
  std::size_t n_star = 0;
  double lambda = 0.0;
  double loss = 0.0;
  double error = 0.0;
  double R = 0.0;
  std::string status = "ok";
};

struct RateRecord {
  std::string kernel;
  double nsr = 0.0;
  std::size_t pairs = 0;
  std::string regularizer;
  double slope_of_mean = 0.0;  ///< log-log slope of the mean error against dx
  double mean_slope = 0.0;     ///< mean of per-replicate slopes
  double std_slope = 0.0;      ///< sample standard deviation of per-replicate slopes
  std::size_t replicates = 0;
};

struct RunReport {
  std::vector<CellRecord> records;
  std::vector<RateRecord> rates;
};

/// Noise seed of one (dx, nsr, pairs, replicate) cell.
std::uint64_t cell_seed(std::uint64_t seed, double dx, double nsr, std::size_t pairs,
                        std::size_t replicate);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs every cell (reusing finished cells under output_dir/cells when
/// resume is set), fits rates, and writes records.csv and rates.csv.
RunReport run_convergence_sweep(const ExperimentConfig& cfg);

/// Rates from the records, grouped by (kernel, nsr, pairs, regularizer).
std::vector<RateRecord> fit_rates(const std::vector<CellRecord>& records);

std::string records_csv(const std::vector<CellRecord>& records);
std::string rates_csv(const std::vector<RateRecord>& rates);
/// Parses records_csv output. Throws Config on malformed input.
std::vector<CellRecord> parse_records_csv(const std::string& text);

void write_report(const RunReport& report, const std::filesystem::path& dir);

}  // namespace nlkl

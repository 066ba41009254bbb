#pragma once

// File formats: dataset and estimate JSON, measure / L-curve / trajectory
// CSV, and a binary bundle of regression data.

#include <filesystem>
#include <string>

#include "nlkl/assembly.hpp"
#include "nlkl/grid.hpp"
#include "nlkl/lcurve.hpp"
#include "nlkl/operator.hpp"
#include "nlkl/solve.hpp"
#include "nlkl/wave.hpp"

#include "json.hpp"

namespace nlkl {

/// %.17g, so every double survives a text round trip.
std::string format_double(double v);

nlohmann::json dataset_to_json(const Dataset& d);
/// Throws Config on missing or malformed fields.
Dataset dataset_from_json(const nlohmann::json& j);

void write_dataset(const Dataset& d, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

nlohmann::json kernel_spec_to_json(const TrueKernelSpec& s);
TrueKernelSpec kernel_spec_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const KernelEstimate& e);
KernelEstimate estimate_from_json(const nlohmann::json& j);

void write_estimate(const KernelEstimate& e, const std::filesystem::path& path);
KernelEstimate read_estimate(const std::filesystem::path& path);

void write_measure_csv(const ExplorationMeasure& rho, const std::filesystem::path& path);
void write_lcurve_csv(const LCurve& curve, const std::filesystem::path& path);
/// One row per snapshot: t, u(x_0), ..., u(x_J).
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

void write_regression_data(const RegressionData& reg, const std::filesystem::path& path);
RegressionData read_regression_data(const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace nlkl

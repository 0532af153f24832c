#pragma once

// Model JSON documents, CSV tables and atomic file output.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpt/fitting.hpp"
#include "mpt/mittag_leffler.hpp"
#include "mpt/oracle.hpp"
#include "mpt/spectral_model.hpp"

namespace mpt {

constexpr int kSchemaVersion = 1;

nlohmann::json model_to_json(const SpectralModel& model);
SpectralModel model_from_json(const nlohmann::json& doc);

/// Canonical text form: two-space indent, trailing newline.
std::string dump_model(const SpectralModel& model);
SpectralModel parse_model(const std::string& text);

void save_model(const SpectralModel& model, const std::filesystem::path& path);
SpectralModel load_model(const std::filesystem::path& path);

nlohmann::json expansion_to_json(const PoleResidueExpansion& e);
nlohmann::json report_to_json(const OracleReport& r);
std::string report_to_text(const OracleReport& r);

/// Writes to a sibling temp file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// %.17g
std::string fmt(double x);

struct SweepTable {
  std::vector<double> nu;
  std::vector<double> omega;
  std::vector<double> f_hz;
  std::vector<Assembly> values;
};

const std::vector<std::string>& sweep_csv_header();
/// time_scale converts nu to omega (nu = omega time_scale).
std::string sweep_csv(double time_scale, const std::vector<double>& nu, const std::vector<Assembly>& values);
SweepTable parse_sweep_csv(const std::string& text);

/// Packs a scalar isotropic response into an Assembly (R = Re m - m0).
Assembly isotropic_assembly(std::complex<double> m, double m0);

std::string tensor_series_csv(const std::string& time_column, const std::vector<double>& t,
                              const std::vector<SymTensor3>& values);
std::string fit_table_csv(const FitTable& table);
std::string fit_residuals_csv(const FitTable& table);

}  // namespace mpt

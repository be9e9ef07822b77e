#pragma once

#include "annulus/field.hpp"
#include "annulus/selection.hpp"
#include "annulus/solvers.hpp"
#include "annulus/synthetic.hpp"
#include "annulus/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace annulus::io {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

struct MeasurementFile {
  int schema_version = kSchemaVersion;
  std::string engine_id = "-";
  std::string extract_id = "-";
  AnnulusGeometry annulus;
  MeasurementGrid grid;
  /// Opaque `meta_*` entries carried through unchanged (e.g. meta_power_setting).
  std::map<std::string, std::string> metadata;
};

struct ModelFile {
  MeasurementFile measurement;
  CoefficientMatrix coefficients;
  int degree = 2;
  std::string lambda_policy = "algorithm1";
  FitReport report;

  SpatialModel spatial_model() const;
};

struct FieldExport {
  HarmonicSet harmonics{1};
  int degree = 2;
  double lambda_used = 0.0;
  double rms_error = 0.0;
  double average_numeric = 0.0;
  double average_weighted = 0.0;
  double average_analytic = 0.0;
  AnnulusGeometry annulus;
  std::size_t n_theta = 0;
  std::size_t n_r = 0;
  struct Node {
    double theta_deg;
    double r;
    double value;
  };
  std::vector<Node> nodes;  ///< theta-major: all radii for theta_0, then theta_1, ...
};

/// Which document a stream holds, from its `format` line.
enum class DocumentKind { Measurement, Model, Field, Profile };
DocumentKind peek_kind(const std::string& text);

MeasurementFile parse_measurement(const std::string& text);
ModelFile parse_model(const std::string& text);
FieldExport parse_field_export(const std::string& text);
SyntheticProfileSpec parse_profile(const std::string& text);

void write_measurement(std::ostream& os, const MeasurementFile& file);
void write_model(std::ostream& os, const ModelFile& file);
void write_field_export(std::ostream& os, const FieldExport& field);
void write_profile(std::ostream& os, const SyntheticProfileSpec& spec);

/// Throws FileError-derived exceptions with line diagnostics. ingest() reads either
/// a measurement file or the measurement section of a model file.
MeasurementFile ingest(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

/// Samples the model on a uniform theta grid over [0, 360) and a uniform radial grid
/// over [r_inner, r_outer]; records all three averages.
/// Throws InvalidArgument unless n_theta >= 8 and n_r >= 2.
FieldExport make_field_export(const SpatialModel& model, const FitReport& report,
                              const MeasurementGrid& grid, std::size_t n_theta, std::size_t n_r);
/// make_field_export followed by a write to `path`. Throws Error on I/O failure.
void export_field(const SpatialModel& model, const FitReport& report, const MeasurementGrid& grid,
                  std::size_t n_theta, std::size_t n_r, const std::filesystem::path& path);

void write_scan_table(std::ostream& os, const ScanResult& result, const ScanConfig& config,
                      const MeasurementGrid& grid);
void write_cv_report(std::ostream& os, const CrossValReport& report);
void write_min_norm(std::ostream& os, const MinNormSolution& solution, double rms_error);
void write_l_curve(std::ostream& os, const LCurve& curve, const HarmonicSet& harmonics);

}  // namespace annulus::io

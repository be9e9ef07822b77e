#include "annulus/io.hpp"

#include "annulus/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace annulus::io {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::optional<double> parse_number(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

struct Entry {
  std::size_t line = 0;
  std::vector<std::string> args;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;
};

/// Line-oriented `key arg...` records; lines that start with a number are rows of
/// the block opened by the preceding key. `#` starts a comment.
class Document {
 public:
  static Document parse(const std::string& text) {
    Document doc;
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    Entry* current = nullptr;
    while (std::getline(in, raw)) {
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream ls(raw);
      std::vector<std::string> tokens{std::istream_iterator<std::string>(ls),
                                      std::istream_iterator<std::string>()};
      if (tokens.empty()) continue;
      if (parse_number(tokens.front())) {
        if (!current) throw ParseError("numeric row before any field", number);
        std::vector<double> row;
        for (const auto& t : tokens) {
          auto v = parse_number(t);
          if (!v) throw ParseError("'" + t + "' is not a number", number, doc.last_key_);
          row.push_back(*v);
        }
        current->rows.push_back(std::move(row));
        current->row_lines.push_back(number);
        continue;
      }
      const std::string key = tokens.front();
      if (doc.entries_.count(key)) {
        throw SchemaError("field '" + key + "' appears twice (first at line " +
                              std::to_string(doc.entries_.at(key).line) + ")",
                          number, key);
      }
      Entry e;
      e.line = number;
      e.args.assign(tokens.begin() + 1, tokens.end());
      doc.order_.push_back(key);
      doc.last_key_ = key;
      current = &doc.entries_.emplace(key, std::move(e)).first->second;
    }
    return doc;
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const Entry& require(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw SchemaError("missing required field", 0, key);
    return it->second;
  }

  std::size_t line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  std::string string_value(const std::string& key) const {
    const auto& e = scalar_entry(key);
    return e.args.front();
  }

  std::string string_or(const std::string& key, std::string fallback) const {
    return has(key) ? string_value(key) : fallback;
  }

  double double_value(const std::string& key) const {
    const auto& e = scalar_entry(key);
    auto v = parse_number(e.args.front());
    if (!v) throw ParseError("'" + e.args.front() + "' is not a number", e.line, key);
    return *v;
  }

  long integer_value(const std::string& key) const {
    const auto& e = scalar_entry(key);
    long v = 0;
    const auto& t = e.args.front();
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
      throw ParseError("'" + t + "' is not an integer", e.line, key);
    }
    return v;
  }

  std::vector<double> doubles(const std::string& key) const {
    const auto& e = require(key);
    no_rows(key);
    if (e.args.empty()) throw SchemaError("field needs at least one value", e.line, key);
    std::vector<double> out;
    for (const auto& t : e.args) {
      auto v = parse_number(t);
      if (!v) throw ParseError("'" + t + "' is not a number", e.line, key);
      out.push_back(*v);
    }
    return out;
  }

  std::vector<int> integers(const std::string& key) const {
    std::vector<int> out;
    const auto& e = require(key);
    for (double v : doubles(key)) {
      if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ParseError("expected integers", e.line, key);
      }
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  /// Block rows as a matrix; row and column counts are checked against expectations.
  Matrix block(const std::string& key, std::size_t rows, std::size_t cols,
               const std::string& rows_reason) const {
    const auto& e = require(key);
    if (!e.args.empty()) {
      throw SchemaError("block header takes no values; rows go on the following lines", e.line,
                        key);
    }
    if (e.rows.size() != rows) {
      throw SchemaError(key + " has " + std::to_string(e.rows.size()) + " rows; expected " +
                            std::to_string(rows) + " (" + rows_reason + ")",
                        e.line, key);
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
      if (e.rows[i].size() != cols) {
        throw SchemaError("row has " + std::to_string(e.rows[i].size()) + " values; expected " +
                              std::to_string(cols),
                          e.row_lines[i], key);
      }
      for (std::size_t j = 0; j < cols; ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e.rows[i][j];
      }
    }
    return m;
  }

  std::size_t row_line(const std::string& key, std::size_t row) const {
    return require(key).row_lines.at(row);
  }

  void no_rows(const std::string& key) const {
    const auto& e = require(key);
    if (!e.rows.empty()) {
      throw SchemaError("unexpected numeric row after '" + key + "'", e.row_lines.front(), key);
    }
  }

  /// Rejects keys outside `allowed` unless they start with one of `prefixes`.
  void restrict_keys(const std::set<std::string>& allowed,
                     const std::vector<std::string>& prefixes) const {
    for (const auto& key : order_) {
      if (allowed.count(key)) continue;
      const bool prefixed = std::any_of(prefixes.begin(), prefixes.end(), [&](const auto& p) {
        return key.rfind(p, 0) == 0;
      });
      if (!prefixed) throw SchemaError("unknown field '" + key + "'", line_of(key), key);
    }
  }

  const std::vector<std::string>& keys() const { return order_; }
  const Entry& entry(const std::string& key) const { return require(key); }

 private:
  const Entry& scalar_entry(const std::string& key) const {
    const auto& e = require(key);
    no_rows(key);
    if (e.args.size() != 1) {
      throw SchemaError("expected exactly one value, got " + std::to_string(e.args.size()), e.line,
                        key);
    }
    return e;
  }

  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
  std::string last_key_;
};

const std::set<std::string> kMeasurementKeys{"format",    "schema_version", "engine_id",
                                             "extract_id", "r_inner_m",     "r_outer_m",
                                             "thetas_deg", "radii_m",       "values_K"};
const std::set<std::string> kModelKeys{"harmonics",   "degree",     "lambda_policy",
                                       "lambda_used", "rms_error_K", "solution_norm",
                                       "cond_plain",  "cond_augmented", "norm_capped",
                                       "ols_singular", "coefficients"};

void require_format(const Document& doc, const std::string& expected) {
  const auto format = doc.string_value("format");
  if (format != expected) {
    throw SchemaError("expected format '" + expected + "', found '" + format + "'",
                      doc.line_of("format"), "format");
  }
  const long version = doc.integer_value("schema_version");
  if (version != kSchemaVersion) {
    throw SchemaError("unsupported schema_version " + std::to_string(version) + " (this build reads " +
                          std::to_string(kSchemaVersion) + ")",
                      doc.line_of("schema_version"), "schema_version");
  }
}

AnnulusGeometry read_annulus(const Document& doc) {
  AnnulusGeometry g{doc.double_value("r_inner_m"), doc.double_value("r_outer_m")};
  try {
    g.validate();
  } catch (const InvalidGeometry& e) {
    throw ValidationError(e.what(), doc.line_of("r_inner_m"), "r_inner_m");
  }
  return g;
}

MeasurementFile read_measurement(const Document& doc) {
  MeasurementFile out{kSchemaVersion, "-", "-", {}, MeasurementGrid({0.0}, {1.0}, Matrix::Zero(1, 1)),
                      {}};
  out.engine_id = doc.string_or("engine_id", "-");
  out.extract_id = doc.string_or("extract_id", "-");
  out.annulus = read_annulus(doc);

  auto thetas = doc.doubles("thetas_deg");
  auto radii = doc.doubles("radii_m");
  Matrix values = doc.block("values_K", thetas.size(), radii.size(),
                            "one per entry of thetas_deg");

  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (!values.row(i).allFinite()) {
      throw ValidationError("non-finite temperature", doc.row_line("values_K", static_cast<std::size_t>(i)),
                            "values_K");
    }
  }
  try {
    require_distinct_angles(thetas);
    for (double t : thetas) {
      if (t < 0.0 || t >= 360.0) {
        throw InvalidGeometry("rake angle " + format_double(t) + " deg outside [0, 360)");
      }
    }
  } catch (const InvalidGeometry& e) {
    throw ValidationError(e.what(), doc.line_of("thetas_deg"), "thetas_deg");
  }
  try {
    require_increasing_radii(radii);
  } catch (const InvalidGeometry& e) {
    throw ValidationError(e.what(), doc.line_of("radii_m"), "radii_m");
  }
  out.grid = MeasurementGrid(std::move(thetas), std::move(radii), std::move(values));

  for (const auto& key : doc.keys()) {
    if (key.rfind("meta_", 0) == 0) {
      std::string joined;
      for (const auto& a : doc.entry(key).args) joined += (joined.empty() ? "" : " ") + a;
      out.metadata[key] = joined;
    }
  }
  return out;
}

void write_token(std::ostream& os, const std::string& key, const std::string& value) {
  if (value.empty() || value.find_first_of(" \t\r\n#") != std::string::npos) {
    throw InvalidArgument(key + " must be a single non-empty token without '#'");
  }
  os << key << ' ' << value << '\n';
}

void write_list(std::ostream& os, const std::string& key, const std::vector<double>& values) {
  os << key;
  for (double v : values) os << ' ' << format_double(v);
  os << '\n';
}

void write_block(std::ostream& os, const std::string& key, const Matrix& m) {
  os << key << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "  ") << format_double(m(i, j));
    os << '\n';
  }
}

void write_measurement_fields(std::ostream& os, const MeasurementFile& f) {
  write_token(os, "engine_id", f.engine_id);
  write_token(os, "extract_id", f.extract_id);
  os << "r_inner_m " << format_double(f.annulus.r_inner) << '\n';
  os << "r_outer_m " << format_double(f.annulus.r_outer) << '\n';
  write_list(os, "thetas_deg", f.grid.thetas());
  write_list(os, "radii_m", f.grid.radii());
  for (const auto& [key, value] : f.metadata) {
    if (key.rfind("meta_", 0) != 0) throw InvalidArgument("metadata keys must start with meta_");
    os << key << ' ' << value << '\n';
  }
  write_block(os, "values_K", f.grid.values());
}

}  // namespace

SpatialModel ModelFile::spatial_model() const {
  return SpatialModel(coefficients, measurement.grid.radii(), degree, measurement.annulus);
}

DocumentKind peek_kind(const std::string& text) {
  const auto doc = Document::parse(text);
  const auto format = doc.string_value("format");
  if (format == "annulus-measurement") return DocumentKind::Measurement;
  if (format == "annulus-model") return DocumentKind::Model;
  if (format == "annulus-field") return DocumentKind::Field;
  if (format == "annulus-profile") return DocumentKind::Profile;
  throw SchemaError("unknown format '" + format + "'", doc.line_of("format"), "format");
}

MeasurementFile parse_measurement(const std::string& text) {
  const auto doc = Document::parse(text);
  require_format(doc, "annulus-measurement");
  doc.restrict_keys(kMeasurementKeys, {"meta_"});
  return read_measurement(doc);
}

ModelFile parse_model(const std::string& text) {
  const auto doc = Document::parse(text);
  require_format(doc, "annulus-model");
  std::set<std::string> allowed = kMeasurementKeys;
  allowed.insert(kModelKeys.begin(), kModelKeys.end());
  doc.restrict_keys(allowed, {"meta_"});

  ModelFile out{read_measurement(doc), CoefficientMatrix{Matrix(), HarmonicSet{1}}, 2, "algorithm1",
                {}};
  try {
    out.coefficients.harmonics = HarmonicSet(doc.integers("harmonics"));
  } catch (const InvalidArgument& e) {
    throw ValidationError(e.what(), doc.line_of("harmonics"), "harmonics");
  }
  const long degree = doc.integer_value("degree");
  if (degree < 0 || degree > 64) {
    throw ValidationError("degree must lie in [0, 64]", doc.line_of("degree"), "degree");
  }
  out.degree = static_cast<int>(degree);
  out.lambda_policy = doc.string_or("lambda_policy", "algorithm1");
  out.report.lambda_used = doc.double_value("lambda_used");
  out.report.rms_error = doc.double_value("rms_error_K");
  out.report.solution_norm = doc.double_value("solution_norm");
  out.report.cond_plain = doc.double_value("cond_plain");
  out.report.cond_augmented = doc.double_value("cond_augmented");
  out.report.norm_capped = doc.integer_value("norm_capped") != 0;
  out.report.ols_singular = doc.has("ols_singular") && doc.integer_value("ols_singular") != 0;
  out.coefficients.matrix =
      doc.block("coefficients", out.coefficients.harmonics.columns(), out.measurement.grid.probes(),
                "2k+1 for harmonics " + out.coefficients.harmonics.to_string());
  if (!out.coefficients.matrix.allFinite()) {
    throw ValidationError("non-finite coefficient", doc.line_of("coefficients"), "coefficients");
  }
  return out;
}

FieldExport parse_field_export(const std::string& text) {
  const auto doc = Document::parse(text);
  require_format(doc, "annulus-field");
  doc.restrict_keys({"format", "schema_version", "harmonics", "degree", "lambda_used",
                     "rms_error_K", "average_numeric_K", "average_weighted_K",
                     "average_analytic_K", "r_inner_m", "r_outer_m", "n_theta", "n_r", "nodes"},
                    {});
  FieldExport out;
  out.harmonics = HarmonicSet(doc.integers("harmonics"));
  out.degree = static_cast<int>(doc.integer_value("degree"));
  out.lambda_used = doc.double_value("lambda_used");
  out.rms_error = doc.double_value("rms_error_K");
  out.average_numeric = doc.double_value("average_numeric_K");
  out.average_weighted = doc.double_value("average_weighted_K");
  out.average_analytic = doc.double_value("average_analytic_K");
  out.annulus = read_annulus(doc);
  const long nt = doc.integer_value("n_theta");
  const long nr = doc.integer_value("n_r");
  if (nt < 1 || nr < 1) throw ValidationError("grid sizes must be positive", doc.line_of("n_theta"));
  out.n_theta = static_cast<std::size_t>(nt);
  out.n_r = static_cast<std::size_t>(nr);
  const Matrix nodes = doc.block("nodes", out.n_theta * out.n_r, 3, "n_theta * n_r");
  for (Eigen::Index i = 0; i < nodes.rows(); ++i) {
    out.nodes.push_back({nodes(i, 0), nodes(i, 1), nodes(i, 2)});
  }
  return out;
}

SyntheticProfileSpec parse_profile(const std::string& text) {
  const auto doc = Document::parse(text);
  require_format(doc, "annulus-profile");
  doc.restrict_keys({"format", "schema_version", "mean_level_K", "r_inner_m", "r_outer_m",
                     "noise_std_K"},
                    {"harmonic_"});
  SyntheticProfileSpec spec;
  spec.mean_level = doc.double_value("mean_level_K");
  spec.annulus = read_annulus(doc);
  spec.noise_std = doc.has("noise_std_K") ? doc.double_value("noise_std_K") : 0.0;
  for (const auto& key : doc.keys()) {
    if (key.rfind("harmonic_", 0) != 0) continue;
    const auto& e = doc.entry(key);
    doc.no_rows(key);
    ProfileHarmonic h;
    const std::string suffix = key.substr(9);
    const auto omega = parse_number(suffix);
    if (!omega || *omega != std::floor(*omega)) {
      throw ParseError("harmonic key must be harmonic_<integer>", e.line, key);
    }
    h.omega = static_cast<int>(*omega);
    std::vector<double>* target = nullptr;
    for (const auto& t : e.args) {
      if (t == "amplitude_K") {
        target = &h.amplitude;
      } else if (t == "phase_rad") {
        target = &h.phase;
      } else {
        auto v = parse_number(t);
        if (!v) throw ParseError("'" + t + "' is not a number", e.line, key);
        if (!target) throw SchemaError("coefficients must follow amplitude_K or phase_rad", e.line, key);
        target->push_back(*v);
      }
    }
    if (h.amplitude.empty()) throw SchemaError("harmonic needs amplitude_K coefficients", e.line, key);
    spec.harmonics.push_back(std::move(h));
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw ValidationError(e.what(), 0);
  }
  return spec;
}

void write_measurement(std::ostream& os, const MeasurementFile& file) {
  os << "# annulus measurement: N rakes x M probes, angles in degrees, radii in metres, values in Kelvin\n";
  os << "format annulus-measurement\n";
  os << "schema_version " << kSchemaVersion << '\n';
  write_measurement_fields(os, file);
}

void write_model(std::ostream& os, const ModelFile& file) {
  os << "# annulus model: Fourier coefficients (rows: 1, sin/cos per harmonic; columns: probes)\n";
  os << "format annulus-model\n";
  os << "schema_version " << kSchemaVersion << '\n';
  os << "harmonics";
  for (int w : file.coefficients.harmonics.values()) os << ' ' << w;
  os << '\n';
  os << "degree " << file.degree << '\n';
  write_token(os, "lambda_policy", file.lambda_policy);
  os << "lambda_used " << format_double(file.report.lambda_used) << '\n';
  os << "rms_error_K " << format_double(file.report.rms_error) << '\n';
  os << "solution_norm " << format_double(file.report.solution_norm) << '\n';
  os << "cond_plain " << format_double(file.report.cond_plain) << '\n';
  os << "cond_augmented " << format_double(file.report.cond_augmented) << '\n';
  os << "norm_capped " << (file.report.norm_capped ? 1 : 0) << '\n';
  os << "ols_singular " << (file.report.ols_singular ? 1 : 0) << '\n';
  write_measurement_fields(os, file.measurement);
  write_block(os, "coefficients", file.coefficients.matrix);
}

void write_field_export(std::ostream& os, const FieldExport& f) {
  os << "# annulus field: nodes are theta_deg r_m T_K, theta-major\n";
  os << "format annulus-field\n";
  os << "schema_version " << kSchemaVersion << '\n';
  os << "harmonics";
  for (int w : f.harmonics.values()) os << ' ' << w;
  os << '\n';
  os << "degree " << f.degree << '\n';
  os << "lambda_used " << format_double(f.lambda_used) << '\n';
  os << "rms_error_K " << format_double(f.rms_error) << '\n';
  os << "average_numeric_K " << format_double(f.average_numeric) << '\n';
  os << "average_weighted_K " << format_double(f.average_weighted) << '\n';
  os << "average_analytic_K " << format_double(f.average_analytic) << '\n';
  os << "r_inner_m " << format_double(f.annulus.r_inner) << '\n';
  os << "r_outer_m " << format_double(f.annulus.r_outer) << '\n';
  os << "n_theta " << f.n_theta << '\n';
  os << "n_r " << f.n_r << '\n';
  os << "nodes\n";
  for (const auto& n : f.nodes) {
    os << "  " << format_double(n.theta_deg) << ' ' << format_double(n.r) << ' '
       << format_double(n.value) << '\n';
  }
}

void write_profile(std::ostream& os, const SyntheticProfileSpec& spec) {
  os << "# synthetic profile: mean + sum amp(s) cos(omega theta - phase(s)), s = normalized span\n";
  os << "format annulus-profile\n";
  os << "schema_version " << kSchemaVersion << '\n';
  os << "mean_level_K " << format_double(spec.mean_level) << '\n';
  os << "r_inner_m " << format_double(spec.annulus.r_inner) << '\n';
  os << "r_outer_m " << format_double(spec.annulus.r_outer) << '\n';
  os << "noise_std_K " << format_double(spec.noise_std) << '\n';
  for (const auto& h : spec.harmonics) {
    os << "harmonic_" << h.omega << " amplitude_K";
    for (double a : h.amplitude) os << ' ' << format_double(a);
    os << " phase_rad";
    for (double p : h.phase) os << ' ' << format_double(p);
    os << '\n';
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MeasurementFile ingest(const std::filesystem::path& path) {
  const auto text = read_text(path);
  if (peek_kind(text) == DocumentKind::Model) return parse_model(text).measurement;
  return parse_measurement(text);
}

FieldExport make_field_export(const SpatialModel& model, const FitReport& report,
                              const MeasurementGrid& grid, std::size_t n_theta, std::size_t n_r) {
  if (n_theta < 8 || n_r < 2) throw InvalidArgument("field export needs n_theta >= 8 and n_r >= 2");
  FieldExport f;
  f.harmonics = model.harmonics();
  f.degree = model.degree();
  f.lambda_used = report.lambda_used;
  f.rms_error = report.rms_error;
  f.annulus = model.annulus();
  f.average_numeric = numeric_average(grid);
  f.average_weighted = area_average_weighted(grid, model.annulus());
  f.average_analytic = area_average_analytic(model);
  f.n_theta = n_theta;
  f.n_r = n_r;
  f.nodes.reserve(n_theta * n_r);
  const auto& g = model.annulus();
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double theta = 360.0 * static_cast<double>(i) / static_cast<double>(n_theta);
    for (std::size_t j = 0; j < n_r; ++j) {
      const double r = j + 1 == n_r ? g.r_outer
                                    : g.r_inner + (g.r_outer - g.r_inner) * static_cast<double>(j) /
                                                      static_cast<double>(n_r - 1);
      f.nodes.push_back({theta, r, model.evaluate(r, theta)});
    }
  }
  return f;
}

void export_field(const SpatialModel& model, const FitReport& report, const MeasurementGrid& grid,
                  std::size_t n_theta, std::size_t n_r, const std::filesystem::path& path) {
  const auto f = make_field_export(model, report, grid, n_theta, n_r);
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_field_export(out, f);
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

void write_scan_table(std::ostream& os, const ScanResult& result, const ScanConfig& config,
                      const MeasurementGrid& grid) {
  os << "# annulus-scan k=" << config.k << " omega_max=" << config.omega_max
     << " beta=" << format_double(config.beta) << " ladder=";
  for (std::size_t i = 0; i < config.lambda_ladder.size(); ++i) {
    os << (i ? "," : "") << format_double(config.lambda_ladder[i]);
  }
  os << " rakes=" << grid.rakes() << " probes=" << grid.probes() << '\n';
  os << "# rank omegas rms_error_K mse_K2 solution_norm lambda_used cond_plain cond_augmented "
        "regularized norm_capped\n";
  std::size_t rank = 1;
  for (const auto& e : result.entries) {
    const auto& r = e.report;
    os << rank++ << ' ' << e.harmonics.to_string() << ' ' << format_double(r.rms_error) << ' '
       << format_double(r.mean_squared_error()) << ' ' << format_double(r.solution_norm) << ' '
       << format_double(r.lambda_used) << ' ' << format_double(r.cond_plain) << ' '
       << format_double(r.cond_augmented) << ' ' << (r.regularized() ? 1 : 0) << ' '
       << (r.norm_capped ? 1 : 0) << '\n';
  }
}

namespace {
std::string join_indices(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}
}  // namespace

void write_cv_report(std::ostream& os, const CrossValReport& report) {
  os << "# annulus-cv trials=" << report.trials.size() << " candidates=";
  for (std::size_t c = 0; c < report.candidates.size(); ++c) {
    os << (c ? ";" : "") << report.candidates[c].to_string();
  }
  os << '\n';
  os << "# trial <index> train <rakes> test <rakes> omegas <set> eps_test2 <K^2> flagged <0|1>\n";
  for (std::size_t t = 0; t < report.trials.size(); ++t) {
    const auto& trial = report.trials[t];
    for (std::size_t c = 0; c < report.candidates.size(); ++c) {
      os << "trial " << t << " train " << join_indices(trial.train) << " test "
         << join_indices(trial.test) << " omegas " << report.candidates[c].to_string()
         << " eps_test2 " << format_double(trial.test_errors_squared[c]) << " flagged "
         << (trial.flagged[c] ? 1 : 0) << '\n';
    }
  }
  for (std::size_t c = 0; c < report.candidates.size(); ++c) {
    os << "mean omegas " << report.candidates[c].to_string() << " eps_test2 "
       << format_double(report.mean_errors_squared[c]) << " eps_test2_unflagged "
       << format_double(report.mean_errors_squared_unflagged[c]) << " stddev "
       << format_double(report.stddev_errors_squared[c]) << '\n';
  }
  os << "best omegas " << report.candidates[report.best()].to_string() << '\n';
}

void write_min_norm(std::ostream& os, const MinNormSolution& s, double rms) {
  os << "format annulus-minnorm\n";
  os << "schema_version " << kSchemaVersion << '\n';
  os << "harmonics";
  for (int w : s.coefficients.harmonics.values()) os << ' ' << w;
  os << '\n';
  os << "numerical_rank " << s.numerical_rank << '\n';
  os << "pivot_order";
  for (auto p : s.pivot_order) os << ' ' << p;
  os << '\n';
  os << "rms_error_K " << format_double(rms) << '\n';
  os << "solution_norm " << format_double(s.coefficients.frobenius_norm()) << '\n';
  write_block(os, "coefficients", s.coefficients.matrix);
}

void write_l_curve(std::ostream& os, const LCurve& curve, const HarmonicSet& harmonics) {
  os << "# annulus-lcurve omegas=" << harmonics.to_string() << " points=" << curve.lambdas.size()
     << '\n';
  os << "# index lambda residual_norm solution_norm\n";
  for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
    os << i << ' ' << format_double(curve.lambdas[i]) << ' ' << format_double(curve.residual_norms[i])
       << ' ' << format_double(curve.solution_norms[i]) << '\n';
  }
  os << "knee " << curve.knee_index << ' ' << format_double(curve.knee_lambda()) << '\n';
}

}  // namespace annulus::io

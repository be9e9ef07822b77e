#include "annulus/cli.hpp"

#include "annulus/design.hpp"
#include "annulus/errors.hpp"
#include "annulus/field.hpp"
#include "annulus/io.hpp"
#include "annulus/log.hpp"
#include "annulus/selection.hpp"
#include "annulus/solvers.hpp"
#include "annulus/synthetic.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace annulus::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double to_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw InvalidArgument(what + ": '" + text + "' is not a number");
  }
  return v;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_double(p, what));
  if (out.empty()) throw InvalidArgument(what + " must not be empty");
  return out;
}

HarmonicSet parse_harmonics(const std::string& text) {
  std::vector<int> omegas;
  for (const auto& p : split(text, ',')) {
    const double v = to_double(p, "harmonic");
    if (v != static_cast<int>(v)) throw InvalidArgument("harmonics must be integers: '" + p + "'");
    omegas.push_back(static_cast<int>(v));
  }
  return HarmonicSet(std::move(omegas));
}

/// "lo:hi:count", log spaced.
std::vector<double> parse_lambda_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InvalidArgument("--lambda-grid expects lo:hi:count");
  const double count = to_double(parts[2], "--lambda-grid count");
  if (count < 4 || count != static_cast<double>(static_cast<std::size_t>(count))) {
    throw InvalidArgument("--lambda-grid needs an integer count >= 4");
  }
  return log_spaced_grid(to_double(parts[0], "--lambda-grid lo"), to_double(parts[1], "--lambda-grid hi"),
                         static_cast<std::size_t>(count));
}

std::string read_input(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  return io::read_text(path);
}

/// Writes to -o when given, else to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("cannot write '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

struct ConfigFlags {
  double beta = 1e5;
  std::string ladder;
  void apply(ScanConfig& config) const {
    config.beta = beta;
    if (!ladder.empty()) config.lambda_ladder = parse_doubles(ladder, "--ladder");
  }
};

io::MeasurementFile measurement_from_text(const std::string& text) {
  if (io::peek_kind(text) == io::DocumentKind::Model) return io::parse_model(text).measurement;
  return io::parse_measurement(text);
}


/// Model from a model document, or fitted on the fly from a measurement document.
io::ModelFile model_from_text(const std::string& text, const std::string& omega, int degree,
                              const ScanConfig& config) {
  if (io::peek_kind(text) == io::DocumentKind::Model) return io::parse_model(text);
  if (omega.empty()) {
    throw InvalidArgument("input is a measurement file; pass --omega to fit a model first");
  }
  auto measurement = io::parse_measurement(text);
  auto fit = algorithm1_fit(measurement.grid, parse_harmonics(omega), config);
  return io::ModelFile{std::move(measurement), std::move(fit.coefficients), degree, "algorithm1",
                       fit.report};
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Annular field reconstruction from rake measurements", "annulus"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads for scan/cv (0 = ANNULUS_THREADS or all cores)");

  // synth
  auto* synth = app.add_subcommand("synth", "Sample a synthetic profile onto a rake layout");
  bool canonical = false;
  std::string spec_path, rake_case, engine, thetas_text, synth_out;
  std::size_t probes = 7;
  std::uint64_t seed = 0;
  double noise = -1.0;
  std::string write_spec;
  auto* canon_opt = synth->add_flag("--canonical", canonical, "Use the built-in four-harmonic profile");
  synth->add_option("--spec", spec_path, "Profile file (format annulus-profile)")->excludes(canon_opt);
  auto* case_opt = synth->add_option("--case", rake_case, "Virtual rake layout I, II, III or IV");
  auto* engine_opt = synth->add_option("--engine", engine, "Engine rake layout A-E")->excludes(case_opt);
  synth->add_option("--thetas", thetas_text, "Explicit rake angles, comma separated [deg]")
      ->excludes(case_opt)
      ->excludes(engine_opt);
  synth->add_option("--probes", probes, "Probes per rake, equally spaced in span")->check(CLI::PositiveNumber);
  synth->add_option("--noise", noise, "Override the profile noise standard deviation [K]");
  synth->add_option("--seed", seed, "Noise seed");
  synth->add_option("--write-spec", write_spec, "Also write the profile spec to this path");
  synth->add_option("-o,--output", synth_out, "Output path (default stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit Fourier coefficients for one harmonic set");
  std::string fit_in = "-", fit_out, fit_omega, lambda_policy = "algorithm1", lambda_grid;
  int degree = 2;
  ConfigFlags fit_flags;
  fit->add_option("input", fit_in, "Measurement file (default stdin)");
  fit->add_option("--omega", fit_omega, "Harmonics, e.g. 1,4")->required();
  fit->add_option("--lambda", lambda_policy, "algorithm1, lcurve, or a fixed value");
  fit->add_option("--lambda-grid", lambda_grid, "L-curve grid lo:hi:count (default 1e-10:1:50)");
  fit->add_option("--beta", fit_flags.beta, "Norm cap for algorithm1");
  fit->add_option("--ladder", fit_flags.ladder, "Regularization ladder, comma separated");
  fit->add_option("--degree", degree, "Radial polynomial degree")->check(CLI::NonNegativeNumber);
  fit->add_option("-o,--output", fit_out, "Output path (default stdout)");

  // scan
  auto* scan = app.add_subcommand("scan", "Rank every harmonic set by RMS error");
  std::string scan_in = "-", scan_out;
  std::size_t scan_k = 2;
  int omega_max = 10;
  double tie_tolerance = ScanConfig{}.tie_tolerance;
  ConfigFlags scan_flags;
  scan->add_option("input", scan_in, "Measurement file (default stdin)");
  scan->add_option("--k", scan_k, "Harmonics per set")->check(CLI::PositiveNumber);
  scan->add_option("--omega-max", omega_max, "Largest frequency");
  scan->add_option("--beta", scan_flags.beta, "Norm cap");
  scan->add_option("--ladder", scan_flags.ladder, "Regularization ladder, comma separated");
  scan->add_option("--tie-tolerance", tie_tolerance, "Relative RMS tie tolerance");
  scan->add_option("-o,--output", scan_out, "Output path (default stdout)");

  // cv
  auto* cv = app.add_subcommand("cv", "Leave-P-out cross-validation over rake subsets");
  std::string cv_in = "-", cv_out, candidates_text;
  std::size_t n_train = 6;
  ConfigFlags cv_flags;
  cv->add_option("input", cv_in, "Measurement file (default stdin)");
  cv->add_option("--candidates", candidates_text, "Harmonic sets, e.g. \"1,4;1,6;4,9;6,9\"");
  cv->add_option("--n-train", n_train, "Training rakes per trial");
  cv->add_option("--beta", cv_flags.beta, "Norm cap");
  cv->add_option("--ladder", cv_flags.ladder, "Regularization ladder, comma separated");
  cv->add_option("-o,--output", cv_out, "Output path (default stdout)");

  // average
  auto* average = app.add_subcommand("average", "Area or numeric average in Kelvin");
  std::string avg_in = "-", method = "analytic", avg_omega;
  int avg_degree = 2;
  ConfigFlags avg_flags;
  average->add_option("input", avg_in, "Measurement or model file (default stdin)");
  average->add_option("--method", method, "numeric, weighted or analytic")
      ->check(CLI::IsMember({"numeric", "weighted", "analytic"}));
  average->add_option("--omega", avg_omega, "Harmonics to fit when the input is a measurement file");
  average->add_option("--degree", avg_degree, "Radial polynomial degree")->check(CLI::NonNegativeNumber);
  average->add_option("--beta", avg_flags.beta, "Norm cap");

  // minnorm
  auto* minnorm = app.add_subcommand("minnorm", "Minimum-norm solution via pivoted QR");
  std::string mn_in = "-", mn_out, mn_omega;
  double rank_tol = 1e-8;
  minnorm->add_option("input", mn_in, "Measurement file (default stdin)");
  minnorm->add_option("--omega", mn_omega, "Harmonics, e.g. 1,4,19,49")->required();
  minnorm->add_option("--rank-tol", rank_tol, "Relative pivot tolerance");
  minnorm->add_option("-o,--output", mn_out, "Output path (default stdout)");

  // lcurve
  auto* lcurve = app.add_subcommand("lcurve", "Tikhonov L-curve and its corner");
  std::string lc_in = "-", lc_out, lc_omega, lc_grid;
  lcurve->add_option("input", lc_in, "Measurement file (default stdin)");
  lcurve->add_option("--omega", lc_omega, "Harmonics")->required();
  lcurve->add_option("--lambda-grid", lc_grid, "lo:hi:count (default 1e-10:1:50)");
  lcurve->add_option("-o,--output", lc_out, "Output path (default stdout)");

  // export
  auto* exp = app.add_subcommand("export", "Sample a fitted model on a regular (theta, r) grid");
  std::string ex_in = "-", ex_out, ex_omega;
  std::size_t n_theta = 360, n_r = 50;
  int ex_degree = 2;
  ConfigFlags ex_flags;
  exp->add_option("input", ex_in, "Model file, or measurement file with --omega (default stdin)");
  exp->add_option("--n-theta", n_theta, "Circumferential nodes");
  exp->add_option("--n-r", n_r, "Radial nodes");
  exp->add_option("--omega", ex_omega, "Harmonics when the input is a measurement file");
  exp->add_option("--degree", ex_degree, "Radial polynomial degree")->check(CLI::NonNegativeNumber);
  exp->add_option("--beta", ex_flags.beta, "Norm cap");
  exp->add_option("-o,--output", ex_out, "Output path (default stdout)");

  std::vector<std::string> argv_storage{"annulus"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  auto warn_to_err = log::set_warning_handler(
      [&err](std::string_view m) { err << "warning: " << m << '\n'; });
  struct Restore {
    log::WarningHandler h;
    ~Restore() { log::set_warning_handler(std::move(h)); }
  } restore{std::move(warn_to_err)};

  try {
    if (*synth) {
      SyntheticProfileSpec spec;
      if (canonical) {
        spec = canonical_profile();
      } else if (!spec_path.empty()) {
        spec = io::parse_profile(io::read_text(spec_path));
      } else {
        throw InvalidArgument("synth needs --canonical or --spec");
      }
      if (noise >= 0.0) spec.noise_std = noise;
      std::vector<double> thetas;
      std::string extract = "custom";
      if (!rake_case.empty()) {
        thetas = rake_case_angles(parse_rake_case(rake_case));
        extract = "case_" + rake_case;
      } else if (!engine.empty()) {
        if (engine.size() != 1) throw InvalidArgument("--engine expects a single letter A-E");
        thetas = engine_rake_angles(engine.front());
        extract = "engine_" + engine;
      } else if (!thetas_text.empty()) {
        thetas = parse_doubles(thetas_text, "--thetas");
      } else {
        throw InvalidArgument("synth needs --case, --engine or --thetas");
      }
      auto grid = sample_onto_rakes(spec, thetas, equal_span_radii(spec.annulus, probes), seed);
      io::MeasurementFile file{io::kSchemaVersion, "synthetic", extract, spec.annulus, std::move(grid),
                               {}};
      file.metadata["meta_seed"] = std::to_string(seed);
      file.metadata["meta_noise_std_K"] = io::format_double(spec.noise_std);
      Sink sink(synth_out, out);
      io::write_measurement(sink.stream(), file);
      if (!write_spec.empty()) {
        Sink spec_sink(write_spec, out);
        io::write_profile(spec_sink.stream(), spec);
      }
      return kExitOk;
    }

    if (*fit) {
      auto measurement = io::parse_measurement(read_input(fit_in, in));
      const auto harmonics = parse_harmonics(fit_omega);
      ScanConfig config;
      fit_flags.apply(config);
      FitResult result = [&] {
        if (lambda_policy == "algorithm1") return algorithm1_fit(measurement.grid, harmonics, config);
        if (lambda_policy == "lcurve") {
          const auto grid = lambda_grid.empty() ? default_lambda_grid() : parse_lambda_grid(lambda_grid);
          return l_curve_fit(measurement.grid, harmonics, grid, config);
        }
        return fixed_lambda_fit(measurement.grid, harmonics, to_double(lambda_policy, "--lambda"), config);
      }();
      io::ModelFile model{std::move(measurement), std::move(result.coefficients), degree,
                          lambda_policy, result.report};
      model.spatial_model();  // validates the radial fit before anything is written
      Sink sink(fit_out, out);
      io::write_model(sink.stream(), model);
      return kExitOk;
    }

    if (*scan) {
      const auto measurement = measurement_from_text(read_input(scan_in, in));
      ScanConfig config;
      config.k = scan_k;
      config.omega_max = omega_max;
      config.tie_tolerance = tie_tolerance;
      config.threads = threads;
      scan_flags.apply(config);
      const auto result = scan_frequencies(measurement.grid, config);
      Sink sink(scan_out, out);
      io::write_scan_table(sink.stream(), result, config, measurement.grid);
      return kExitOk;
    }

    if (*cv) {
      const auto measurement = measurement_from_text(read_input(cv_in, in));
      std::vector<HarmonicSet> candidates;
      if (candidates_text.empty()) {
        candidates = default_cv_candidates();
      } else {
        for (const auto& c : split(candidates_text, ';')) candidates.push_back(parse_harmonics(c));
      }
      ScanConfig config;
      config.threads = threads;
      cv_flags.apply(config);
      const auto report = leave_p_out_cv(measurement.grid, candidates, n_train, config);
      Sink sink(cv_out, out);
      io::write_cv_report(sink.stream(), report);
      return kExitOk;
    }

    if (*average) {
      const auto text = read_input(avg_in, in);
      double value = 0.0;
      if (method == "analytic") {
        ScanConfig config;
        avg_flags.apply(config);
        const auto model = model_from_text(text, avg_omega, avg_degree, config);
        value = area_average_analytic(model.spatial_model());
      } else {
        const auto measurement = measurement_from_text(text);
        value = method == "numeric" ? numeric_average(measurement.grid)
                                    : area_average_weighted(measurement.grid, measurement.annulus);
      }
      out << "method " << method << '\n' << "average_K " << io::format_double(value) << '\n';
      return kExitOk;
    }

    if (*minnorm) {
      const auto measurement = measurement_from_text(read_input(mn_in, in));
      const auto design = build_fourier_design(measurement.grid.thetas(), parse_harmonics(mn_omega));
      const auto solution = min_norm_solve(design, measurement.grid.values(), rank_tol);
      Sink sink(mn_out, out);
      io::write_min_norm(sink.stream(), solution,
                         rms_error(design, solution.coefficients, measurement.grid.values()));
      return kExitOk;
    }

    if (*lcurve) {
      const auto measurement = measurement_from_text(read_input(lc_in, in));
      const auto harmonics = parse_harmonics(lc_omega);
      const auto design = build_fourier_design(measurement.grid.thetas(), harmonics);
      const auto grid = lc_grid.empty() ? default_lambda_grid() : parse_lambda_grid(lc_grid);
      const auto curve = l_curve(design, measurement.grid.values(), grid);
      Sink sink(lc_out, out);
      io::write_l_curve(sink.stream(), curve, harmonics);
      return kExitOk;
    }

    if (*exp) {
      ScanConfig config;
      ex_flags.apply(config);
      const auto model = model_from_text(read_input(ex_in, in), ex_omega, ex_degree, config);
      const auto field = io::make_field_export(model.spatial_model(), model.report,
                                               model.measurement.grid, n_theta, n_r);
      Sink sink(ex_out, out);
      io::write_field_export(sink.stream(), field);
      return kExitOk;
    }
  } catch (const SingularSystem& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  err << app.help();
  return kExitValidation;
}

}  // namespace annulus::cli

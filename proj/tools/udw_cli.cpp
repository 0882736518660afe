// udw: command-line front end for the detector-response library.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "udw/errors.hpp"
#include "udw/experiments.hpp"
#include "udw/kernels.hpp"
#include "udw/response.hpp"
#include "udw/validation.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitDomain = 4;
constexpr int kExitIo = 5;

constexpr const char* kExitCodeHelp =
    "Exit codes: 0 success, 1 failed validation check or failed sweep point,\n"
    "2 usage error, 3 numerical non-convergence, 4 domain error, 5 I/O failure.\n"
    "All quantities are in units of the packet width sigma (sigma = 1).";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PointOptions {
  double m = 10.0;
  double omega = 0.0;
  double lambda = 1.0;
  double tau_i = 0.0;
  std::optional<double> tau_f;
  std::optional<double> delta_tau;
  double x0 = 0.0;
  double k0 = 0.0;
  std::vector<std::string> quantities{"p_v", "p_m", "p_p"};
  std::string format = "text";
};

struct QuadOptions {
  udw::QuadratureSpec spec;
};

void add_quadrature_flags(CLI::App* cmd, QuadOptions& q) {
  cmd->add_option("--rel-tol", q.spec.rel_tol, "Relative quadrature tolerance")->capture_default_str();
  cmd->add_option("--abs-tol", q.spec.abs_tol, "Absolute quadrature tolerance")->capture_default_str();
  cmd->add_option("--max-subdivisions", q.spec.max_subdivisions, "Adaptive subdivision budget")
      ->capture_default_str();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

int run_point(const PointOptions& o, const QuadOptions& q) {
  if (o.delta_tau && *o.delta_tau < 0.0)
    throw UsageError("--delta-tau must be >= 0: tau_f >= tau_i (interaction duration is negative)");
  if (o.tau_f && *o.tau_f < o.tau_i)
    throw UsageError("--tau-f must be >= --tau-i: tau_f >= tau_i (interaction duration is negative)");
  for (const auto& name : o.quantities) {
    if (name != "p_v" && name != "p_m" && name != "p_p" && name != "p_avg")
      throw UsageError("unknown quantity '" + name + "' (expected p_v, p_m, p_p, p_avg)");
  }
  q.spec.validate();

  const udw::ParticleState state{o.m, o.x0, o.k0, 1.0};
  udw::DetectorConfig det;
  det.omega = o.omega;
  det.lambda = o.lambda;
  det.tau_i = o.tau_i;
  det.tau_f = o.tau_f ? *o.tau_f : o.tau_i + o.delta_tau.value_or(0.0);
  state.validate();
  det.validate();
  for (const auto& w : state.validity_warnings()) std::cerr << "warning: " << w << '\n';

  const udw::ResponseResult r = udw::p_total(state, det, q.spec);
  std::optional<udw::Estimate> avg;
  bool converged = r.converged;
  for (const auto& name : o.quantities) {
    if (name == "p_avg") {
      avg = udw::p_avg(state, det, q.spec);
      converged = converged && avg->converged;
    }
  }

  std::vector<std::string> flags;
  if (r.resonance_flag) flags.push_back("resonance");
  if (r.perturbativity_flag) flags.push_back("nonperturbative");
  if (!state.nonrelativistic()) flags.push_back("relativistic");
  if (!converged) flags.push_back("unconverged");
  std::string flag_text;
  for (const auto& f : flags) flag_text += (flag_text.empty() ? "" : "|") + f;
  if (flag_text.empty()) flag_text = "none";

  auto value_of = [&](const std::string& name) -> std::pair<double, double> {
    if (name == "p_v") return {r.p_v, r.p_v_error};
    if (name == "p_m") return {r.p_m, r.p_m_error};
    if (name == "p_p") return {r.p_p, r.error_estimate};
    return {avg->value, avg->error_estimate};
  };

  if (o.format == "csv") {
    std::string header, row;
    for (const auto& name : o.quantities) {
      header += name + ',' + name + "_err,";
      const auto [v, e] = value_of(name);
      row += format_double(v) + ',' + format_double(e) + ',';
    }
    std::cout << header << "method,flags\n" << row << udw::to_string(r.method) << ',' << flag_text << '\n';
  } else {
    for (const auto& name : o.quantities) {
      const auto [v, e] = value_of(name);
      std::cout << name << '=' << format_double(v) << " ±" << format_double(e) << '\n';
    }
    std::cout << "method=" << udw::to_string(r.method) << '\n' << "flags=" << flag_text << '\n';
  }
  if (r.perturbativity_flag)
    std::cerr << "warning: P_p exceeds " << udw::kPerturbativityThreshold
              << "; first-order perturbation theory is not reliable here\n";
  if (!converged) {
    std::cerr << "error: quadrature did not reach the requested tolerance\n";
    return kExitConvergence;
  }
  return 0;
}

int finish_sweep(const udw::Dataset& data, const std::filesystem::path& path) {
  try {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    udw::write_csv_file(data, path);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
  std::cerr << "wrote " << data.rows.size() << " rows to " << path.string() << '\n';
  int failed = 0;
  for (const auto& r : data.rows) failed += r.error.empty() ? 0 : 1;
  if (failed > 0) {
    std::cerr << "error: " << failed << " grid point(s) failed; see the error column\n";
    return 1;
  }
  if (!data.all_converged()) {
    std::cerr << "error: some grid points did not converge; see the flags column\n";
    return kExitConvergence;
  }
  return 0;
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("UDW_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detector response to a massive single-particle state", "udw"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(UDW_VERSION));

  PointOptions point;
  QuadOptions point_quad;
  auto* cmd_point = app.add_subcommand("point", "Evaluate the response at one parameter point");
  cmd_point->add_option("--m", point.m, "Field mass m/sigma")->capture_default_str();
  cmd_point->add_option("--omega", point.omega, "Energy gap Omega/sigma")->capture_default_str();
  cmd_point->add_option("--lambda", point.lambda, "Coupling lambda/sigma")->capture_default_str();
  cmd_point->add_option("--tau-i", point.tau_i, "Switch-on time tau_i*sigma")->capture_default_str();
  auto* opt_tau_f = cmd_point->add_option("--tau-f", point.tau_f, "Switch-off time tau_f*sigma");
  auto* opt_delta = cmd_point->add_option("--delta-tau", point.delta_tau, "Duration (tau_f - tau_i)*sigma");
  opt_tau_f->excludes(opt_delta);
  opt_delta->excludes(opt_tau_f);
  cmd_point->add_option("--x0", point.x0, "Initial packet position x0*sigma")->capture_default_str();
  cmd_point->add_option("--k0", point.k0, "Packet momentum k0/sigma")->capture_default_str();
  cmd_point->add_option("--quantities", point.quantities, "Any of p_v, p_m, p_p, p_avg")->delimiter(',');
  cmd_point->add_option("--format", point.format, "Output format")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  add_quadrature_flags(cmd_point, point_quad);

  std::string sweep_config;
  std::string sweep_out;
  int jobs = 1;
  auto* cmd_sweep = app.add_subcommand("sweep", "Run a parameter sweep from a JSON config");
  cmd_sweep->add_option("--config", sweep_config, "Sweep config file")->required();
  cmd_sweep->add_option("--out", sweep_out, "Output CSV (default: output_path from the config)");
  cmd_sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  std::string fig_id;
  std::string fig_out;
  int fig_jobs = 1;
  auto* cmd_figure = app.add_subcommand("figure", "Write the dataset behind one figure");
  cmd_figure->add_option("--id", fig_id, "fig1 .. fig5")->required();
  cmd_figure->add_option("--out", fig_out, "Output directory (default: $UDW_OUTPUT_DIR or .)");
  cmd_figure->add_option("--jobs", fig_jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  std::string report_path;
  auto* cmd_validate = app.add_subcommand("validate", "Run the cross-validation suite");
  cmd_validate->add_option("--report", report_path, "Write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*cmd_point) return run_point(point, point_quad);

    if (*cmd_sweep) {
      udw::SweepSpec spec;
      try {
        spec = udw::load_sweep_config(sweep_config);
      } catch (const udw::DomainError& e) {
        throw UsageError(e.what());
      } catch (const std::runtime_error& e) {
        throw IoError(e.what());
      }
      const std::filesystem::path path = sweep_out.empty() ? std::filesystem::path(spec.output_path) : std::filesystem::path(sweep_out);
      return finish_sweep(udw::run_sweep(spec, jobs), path);
    }

    if (*cmd_figure) {
      udw::SweepSpec spec;
      try {
        spec = udw::figure_dataset(fig_id);
      } catch (const udw::DomainError& e) {
        throw UsageError(e.what());
      }
      const std::filesystem::path dir = fig_out.empty() ? default_output_dir() : std::filesystem::path(fig_out);
      return finish_sweep(udw::run_sweep(spec, fig_jobs), dir / (fig_id + ".csv"));
    }

    if (*cmd_validate) {
      const udw::ValidationReport report = udw::run_validation();
      for (const auto& c : report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << c.measured
                  << " tolerance=" << c.tolerance << '\n';
      }
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        out << report.to_json() << '\n';
        if (!out) throw IoError("cannot write report to '" + report_path + "'");
      }
      return report.passed() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const udw::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

#pragma once

// Parameter sweeps over the detector-response quantities and their CSV form.
//
// CSV layout: '#'-prefixed key=value header lines (version, sweep id, every
// fixed parameter, axes, quadrature settings, notes), one header row, then
// one data row per grid point in row-major axis order. Columns: swept axes,
// requested outputs, <output>_err for each output, method, flags, error.
// Floats are written in scientific notation with 17 significant digits.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "udw/quadrature.hpp"
#include "udw/response.hpp"

namespace udw {

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int steps = 2;

  /// Grid value i; the endpoints are reproduced exactly.
  double value(int i) const;
};

struct SweepSpec {
  std::string sweep_id;
  std::map<std::string, double> fixed;
  std::vector<Axis> axes;
  std::vector<std::string> outputs;
  QuadratureSpec quadrature;
  std::string output_path;
  std::vector<std::string> notes;  // free-form, echoed into the CSV header

  /// Throws DomainError on any violated sweep invariant.
  void validate() const;

  std::size_t size() const;
};

inline constexpr std::string_view kParameterNames[] = {"m", "omega", "lambda", "tau_i", "tau_f", "delta_tau", "x0", "k0"};
inline constexpr std::string_view kOutputNames[] = {"p_v", "p_m", "p_p", "p_avg", "ratio_normalized"};

/// Reads a sweep from its JSON form. Throws DomainError on schema errors.
SweepSpec sweep_from_json(std::string_view text);
SweepSpec load_sweep_config(const std::filesystem::path& path);

struct SweepRow {
  std::vector<double> coordinates;
  std::vector<double> values;
  std::vector<double> errors;
  std::string method;
  std::vector<std::string> flags;
  std::string error;  // empty when the point succeeded
  bool converged = true;
};

struct Dataset {
  SweepSpec spec;
  std::vector<SweepRow> rows;

  bool all_ok() const;
  bool all_converged() const;
  /// Column of output `name`, in row order.
  std::vector<double> column(std::string_view name) const;
  /// Column of swept axis `name`, in row order.
  std::vector<double> axis_column(std::string_view name) const;
};

/// Evaluates every grid point. Points run on up to `jobs` threads; rows are
/// stored by grid index so the result does not depend on scheduling.
Dataset run_sweep(const SweepSpec& spec, int jobs = 1);

void write_csv(const Dataset& data, std::ostream& out);

/// Writes to `<path>.tmp` and renames on success. Throws std::runtime_error
/// on I/O failure.
void write_csv_file(const Dataset& data, const std::filesystem::path& path);

/// Built-in sweeps behind the five figures ("fig1" .. "fig5").
SweepSpec figure_dataset(std::string_view fig_id);

}  // namespace udw

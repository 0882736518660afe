#include "udw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "udw/errors.hpp"

namespace udw {
namespace {

bool known_parameter(std::string_view name) {
  return std::find(std::begin(kParameterNames), std::end(kParameterNames), name) != std::end(kParameterNames);
}

bool known_output(std::string_view name) {
  return std::find(std::begin(kOutputNames), std::end(kOutputNames), name) != std::end(kOutputNames);
}

// Shortest text that reads back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string scientific(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string csv_safe(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

// Parameter values of one grid point: fixed values overlaid with the axes.
struct PointParams {
  std::map<std::string, double, std::less<>> values;

  double get(std::string_view name, double fallback) const {
    const auto it = values.find(name);
    return it == values.end() ? fallback : it->second;
  }
  bool has(std::string_view name) const { return values.find(name) != values.end(); }
};

struct PointResult {
  std::vector<double> values;
  std::vector<double> errors;
  std::string method;
  std::vector<std::string> flags;
  std::string error;
  bool converged = true;
  // P_avg / P_m before normalization, when ratio_normalized is requested.
  std::optional<double> raw_ratio;
  double raw_ratio_rel_error = 0.0;
};

PointResult evaluate_point(const SweepSpec& spec, const PointParams& p) {
  PointResult out;
  const std::size_t n = spec.outputs.size();
  out.values.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.errors.assign(n, std::numeric_limits<double>::quiet_NaN());
  try {
    const ParticleState state{p.get("m", 0.0), p.get("x0", 0.0), p.get("k0", 0.0), 1.0};
    DetectorConfig det;
    det.omega = p.get("omega", 0.0);
    det.lambda = p.get("lambda", 1.0);
    det.tau_i = p.get("tau_i", 0.0);
    if (p.has("delta_tau")) {
      const double dtau = p.get("delta_tau", 0.0);
      if (dtau < 0.0) throw DomainError("delta_tau must be >= 0 (tau_f >= tau_i)");
      det.tau_f = det.tau_i + dtau;
    } else {
      det.tau_f = p.get("tau_f", 0.0);
    }
    state.validate();
    det.validate();
    if (!state.nonrelativistic()) out.flags.push_back("relativistic");

    auto wants = [&](std::string_view name) {
      return std::find(spec.outputs.begin(), spec.outputs.end(), name) != spec.outputs.end();
    };
    std::optional<ResponseResult> total;
    std::optional<Estimate> vacuum_only;
    if (wants("p_m") || wants("p_p")) {
      total = p_total(state, det, spec.quadrature);
      out.method = std::string(to_string(total->method));
      if (total->resonance_flag) out.flags.push_back("resonance");
      if (total->perturbativity_flag) out.flags.push_back("nonperturbative");
      out.converged = out.converged && total->converged;
    } else if (wants("p_v")) {
      vacuum_only = p_vacuum(state.mass, det, spec.quadrature);
      out.method = std::string(to_string(vacuum_only->method));
      out.converged = out.converged && vacuum_only->converged;
    }
    std::optional<Estimate> avg;
    if (wants("p_avg") || wants("ratio_normalized")) {
      avg = p_avg(state, det, spec.quadrature);
      out.converged = out.converged && avg->converged;
      if (out.method.empty()) out.method = std::string(to_string(avg->method));
    }
    if (wants("ratio_normalized")) {
      const Estimate pm = p_matter_quad(state, det, spec.quadrature);
      out.converged = out.converged && pm.converged;
      if (pm.value > std::numeric_limits<double>::min() && avg->value > 0.0) {
        out.raw_ratio = avg->value / pm.value;
        out.raw_ratio_rel_error = avg->error_estimate / avg->value + pm.error_estimate / pm.value;
      }
    }

    for (std::size_t k = 0; k < n; ++k) {
      const std::string& name = spec.outputs[k];
      if (name == "p_v") {
        out.values[k] = total ? total->p_v : vacuum_only->value;
        out.errors[k] = total ? total->p_v_error : vacuum_only->error_estimate;
      } else if (name == "p_m") {
        out.values[k] = total->p_m;
        out.errors[k] = total->p_m_error;
      } else if (name == "p_p") {
        out.values[k] = total->p_p;
        out.errors[k] = total->error_estimate;
      } else if (name == "p_avg") {
        out.values[k] = avg->value;
        out.errors[k] = avg->error_estimate;
      }
      // ratio_normalized is filled in once the reference rows are known.
    }
    if (!out.converged) out.flags.push_back("unconverged");
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

void check_finite(double v, const std::string& what) {
  if (!std::isfinite(v)) throw DomainError("sweep: " + what + " must be finite");
}

}  // namespace

double Axis::value(int i) const {
  if (i <= 0) return min;
  if (i >= steps - 1) return max;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

std::size_t SweepSpec::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(std::max(a.steps, 0));
  return n;
}

void SweepSpec::validate() const {
  if (axes.empty() || axes.size() > 2) throw DomainError("sweep: one or two swept axes are required");
  std::set<std::string> seen;
  for (const auto& a : axes) {
    if (!known_parameter(a.name)) throw DomainError("sweep: unknown axis parameter '" + a.name + "'");
    if (a.steps < 2) throw DomainError("sweep: axis '" + a.name + "' needs steps >= 2");
    check_finite(a.min, "axis " + a.name + " min");
    check_finite(a.max, "axis " + a.name + " max");
    if (!seen.insert(a.name).second) throw DomainError("sweep: axis '" + a.name + "' listed twice");
  }
  for (const auto& [name, value] : fixed) {
    if (!known_parameter(name)) throw DomainError("sweep: unknown fixed parameter '" + name + "'");
    check_finite(value, "fixed " + name);
    if (seen.count(name)) throw DomainError("sweep: parameter '" + name + "' is both fixed and swept");
  }
  auto present = [&](const std::string& name) { return seen.count(name) > 0 || fixed.count(name) > 0; };
  if (present("tau_f") == present("delta_tau"))
    throw DomainError("sweep: exactly one of tau_f / delta_tau must be specified");
  if (!present("m")) throw DomainError("sweep: mass 'm' must be specified");
  if (!present("omega")) throw DomainError("sweep: energy gap 'omega' must be specified");
  if (outputs.empty()) throw DomainError("sweep: at least one output is required");
  std::set<std::string> out_seen;
  for (const auto& o : outputs) {
    if (!known_output(o)) throw DomainError("sweep: unknown output '" + o + "'");
    if (!out_seen.insert(o).second) throw DomainError("sweep: output '" + o + "' listed twice");
  }
  if (out_seen.count("ratio_normalized")) {
    for (const char* name : {"x0", "k0"}) {
      if (const auto it = fixed.find(name); it != fixed.end() && it->second != 0.0)
        throw DomainError(std::string("sweep: ratio_normalized needs ") + name + " = 0 on the grid");
      for (const auto& a : axes) {
        if (a.name != name) continue;
        bool has_zero = false;
        for (int i = 0; i < a.steps; ++i) has_zero = has_zero || a.value(i) == 0.0;
        if (!has_zero) throw DomainError(std::string("sweep: ratio_normalized needs ") + name + " = 0 on the grid");
      }
    }
  }
  quadrature.validate();
}

SweepSpec sweep_from_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw DomainError(std::string("sweep config: ") + e.what());
  }
  if (!doc.is_object()) throw DomainError("sweep config: top level must be an object");

  static const std::set<std::string> top_keys = {"sweep_id", "fixed", "axes", "outputs", "quadrature", "output_path", "notes"};
  for (const auto& [key, _] : doc.items())
    if (!top_keys.count(key)) throw DomainError("sweep config: unknown key '" + key + "'");

  SweepSpec spec;
  try {
    spec.sweep_id = doc.value("sweep_id", std::string("sweep"));
    spec.output_path = doc.value("output_path", spec.sweep_id + ".csv");
    if (doc.contains("fixed")) {
      for (const auto& [key, value] : doc.at("fixed").items()) spec.fixed[key] = value.get<double>();
    }
    for (const auto& a : doc.at("axes")) {
      spec.axes.push_back({a.at("name").get<std::string>(), a.at("min").get<double>(), a.at("max").get<double>(),
                           a.at("steps").get<int>()});
    }
    spec.outputs = doc.at("outputs").get<std::vector<std::string>>();
    if (doc.contains("notes")) spec.notes = doc.at("notes").get<std::vector<std::string>>();
    if (doc.contains("quadrature")) {
      const auto& q = doc.at("quadrature");
      static const std::set<std::string> quad_keys = {"rel_tol", "abs_tol", "max_subdivisions",
                                                      "oscillation_panels_per_period", "eps_regulator",
                                                      "eps_extrapolation_levels"};
      for (const auto& [key, _] : q.items())
        if (!quad_keys.count(key)) throw DomainError("sweep config: unknown quadrature key '" + key + "'");
      spec.quadrature.rel_tol = q.value("rel_tol", spec.quadrature.rel_tol);
      spec.quadrature.abs_tol = q.value("abs_tol", spec.quadrature.abs_tol);
      spec.quadrature.max_subdivisions = q.value("max_subdivisions", spec.quadrature.max_subdivisions);
      spec.quadrature.oscillation_panels_per_period =
          q.value("oscillation_panels_per_period", spec.quadrature.oscillation_panels_per_period);
      spec.quadrature.eps_regulator = q.value("eps_regulator", spec.quadrature.eps_regulator);
      spec.quadrature.eps_extrapolation_levels =
          q.value("eps_extrapolation_levels", spec.quadrature.eps_extrapolation_levels);
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("sweep config: ") + e.what());
  }
  spec.validate();
  return spec;
}

SweepSpec load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sweep config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return sweep_from_json(buf.str());
}

bool Dataset::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.error.empty(); });
}

bool Dataset::all_converged() const {
  return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.converged; });
}

std::vector<double> Dataset::column(std::string_view name) const {
  const auto it = std::find(spec.outputs.begin(), spec.outputs.end(), name);
  if (it == spec.outputs.end()) throw DomainError("dataset: no output column '" + std::string(name) + "'");
  const auto k = static_cast<std::size_t>(it - spec.outputs.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.values[k]);
  return out;
}

std::vector<double> Dataset::axis_column(std::string_view name) const {
  for (std::size_t k = 0; k < spec.axes.size(); ++k) {
    if (spec.axes[k].name != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.coordinates[k]);
    return out;
  }
  throw DomainError("dataset: no axis '" + std::string(name) + "'");
}

Dataset run_sweep(const SweepSpec& spec, int jobs) {
  spec.validate();
  const std::size_t total = spec.size();
  std::vector<SweepRow> rows(total);
  std::vector<PointResult> results(total);

  auto coordinates = [&](std::size_t index) {
    std::vector<double> c(spec.axes.size());
    std::size_t rem = index;
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto steps = static_cast<std::size_t>(spec.axes[k].steps);
      c[k] = spec.axes[k].value(static_cast<int>(rem % steps));
      rem /= steps;
    }
    return c;
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
      PointParams p;
      for (const auto& [name, value] : spec.fixed) p.values[name] = value;
      const std::vector<double> c = coordinates(i);
      for (std::size_t k = 0; k < c.size(); ++k) p.values[spec.axes[k].name] = c[k];
      rows[i].coordinates = c;
      results[i] = evaluate_point(spec, p);
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Normalize ratio_normalized against the x0 = k0 = 0 row that shares the
  // remaining coordinates.
  const auto ratio_it = std::find(spec.outputs.begin(), spec.outputs.end(), "ratio_normalized");
  if (ratio_it != spec.outputs.end()) {
    const auto k = static_cast<std::size_t>(ratio_it - spec.outputs.begin());
    auto group_key = [&](std::size_t i) {
      std::vector<double> key;
      for (std::size_t a = 0; a < spec.axes.size(); ++a)
        if (spec.axes[a].name != "x0" && spec.axes[a].name != "k0") key.push_back(rows[i].coordinates[a]);
      return key;
    };
    auto is_reference = [&](std::size_t i) {
      for (std::size_t a = 0; a < spec.axes.size(); ++a)
        if ((spec.axes[a].name == "x0" || spec.axes[a].name == "k0") && rows[i].coordinates[a] != 0.0) return false;
      return true;
    };
    std::map<std::vector<double>, std::size_t> reference;
    for (std::size_t i = 0; i < total; ++i)
      if (is_reference(i)) reference.emplace(group_key(i), i);
    for (std::size_t i = 0; i < total; ++i) {
      auto& r = results[i];
      if (!r.error.empty()) continue;
      const auto ref = reference.find(group_key(i));
      const PointResult* base = ref == reference.end() ? nullptr : &results[ref->second];
      if (!base || !base->raw_ratio) {
        r.error = "ratio_normalized: reference point (x0 = 0, k0 = 0) unavailable";
      } else if (!r.raw_ratio) {
        r.error = "ratio_normalized: P_m underflows";
      } else {
        r.values[k] = *r.raw_ratio / *base->raw_ratio;
        r.errors[k] = r.values[k] * (r.raw_ratio_rel_error + base->raw_ratio_rel_error);
      }
    }
  }

  for (std::size_t i = 0; i < total; ++i) {
    auto& r = results[i];
    rows[i].values = std::move(r.values);
    rows[i].errors = std::move(r.errors);
    rows[i].method = r.method.empty() ? "none" : r.method;
    rows[i].flags = std::move(r.flags);
    rows[i].error = std::move(r.error);
    rows[i].converged = r.converged;
  }
  return Dataset{spec, std::move(rows)};
}

void write_csv(const Dataset& data, std::ostream& out) {
  const SweepSpec& spec = data.spec;
  out << "# udw_response_version=" << UDW_VERSION << '\n';
  out << "# sweep_id=" << spec.sweep_id << '\n';
  for (const auto& [name, value] : spec.fixed) out << "# " << name << '=' << shortest(value) << '\n';
  for (const auto& a : spec.axes)
    out << "# axis." << a.name << '=' << shortest(a.min) << ':' << shortest(a.max) << ':' << a.steps << '\n';
  out << "# sigma=1\n";
  out << "# quadrature.rel_tol=" << shortest(spec.quadrature.rel_tol) << '\n';
  out << "# quadrature.abs_tol=" << shortest(spec.quadrature.abs_tol) << '\n';
  out << "# quadrature.max_subdivisions=" << spec.quadrature.max_subdivisions << '\n';
  out << "# quadrature.oscillation_panels_per_period=" << spec.quadrature.oscillation_panels_per_period << '\n';
  for (const auto& note : spec.notes) out << "# note=" << note << '\n';

  bool first = true;
  auto cell = [&](const std::string& s) {
    if (!first) out << ',';
    out << s;
    first = false;
  };
  for (const auto& a : spec.axes) cell(a.name);
  for (const auto& o : spec.outputs) cell(o);
  for (const auto& o : spec.outputs) cell(o + "_err");
  cell("method");
  cell("flags");
  cell("error");
  out << '\n';

  for (const auto& r : data.rows) {
    first = true;
    for (double c : r.coordinates) cell(scientific(c));
    for (double v : r.values) cell(scientific(v));
    for (double e : r.errors) cell(scientific(e));
    cell(r.method);
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : "|") + f;
    cell(flags.empty() ? "none" : flags);
    cell(csv_safe(r.error));
    out << '\n';
  }
}

void write_csv_file(const Dataset& data, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    write_csv(data, out);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move dataset into '" + path.string() + "'");
  }
}

SweepSpec figure_dataset(std::string_view fig_id) {
  constexpr double mass = 10.0;
  SweepSpec spec;
  spec.sweep_id = std::string(fig_id);
  spec.output_path = std::string(fig_id) + ".csv";
  spec.fixed = {{"m", mass}, {"lambda", 1.0}};

  if (fig_id == "fig1") {
    // (m - omega) = pi gives a period of 2 in delta_tau.
    spec.fixed["omega"] = mass - kPi;
    spec.fixed["x0"] = 0.0;
    spec.fixed["k0"] = 0.0;
    spec.axes = {{"tau_i", 0.0, 2.0, 2}, {"delta_tau", 0.0, 20.0, 201}};
    spec.outputs = {"p_m", "p_v"};
    spec.notes = {"omega = m - pi so that 2 pi / (m - omega) = 2",
                  "m and omega are plausible defaults; unstated for the original plot"};
  } else if (fig_id == "fig2") {
    spec.fixed["delta_tau"] = 4.0;
    spec.fixed["x0"] = 0.0;
    spec.fixed["k0"] = 0.0;
    spec.axes = {{"tau_i", 0.0, 2.0, 2}, {"omega", -25.0, 25.0, 201}};
    spec.outputs = {"p_m"};
    spec.notes = {"m and delta_tau are plausible defaults; unstated for the original plot"};
  } else if (fig_id == "fig3") {
    spec.fixed["delta_tau"] = 4.0;
    spec.fixed["tau_i"] = 0.0;
    spec.fixed["x0"] = 0.0;
    spec.fixed["k0"] = 0.0;
    spec.axes = {{"omega", -25.0, 25.0, 201}};
    spec.outputs = {"p_m", "p_v"};
    spec.notes = {"m and delta_tau are plausible defaults; unstated for the original plot"};
  } else if (fig_id == "fig4") {
    spec.fixed["omega"] = mass;
    spec.fixed["tau_i"] = 0.0;
    spec.fixed["delta_tau"] = 4.0;
    spec.axes = {{"k0", -2.0, 2.0, 101}, {"x0", -4.0, 4.0, 101}};
    spec.outputs = {"p_m", "p_v"};
    spec.notes = {"resonant gap omega = m; delta_tau = 4",
                  "m, omega and delta_tau are plausible defaults; unstated for the original plot"};
  } else if (fig_id == "fig5") {
    spec.fixed["omega"] = mass;
    spec.fixed["tau_i"] = 0.0;
    spec.fixed["delta_tau"] = 4.0;
    spec.axes = {{"k0", 0.0, 1.0, 3}, {"x0", 0.0, 4.0, 201}};
    spec.outputs = {"ratio_normalized", "p_avg", "p_m"};
    spec.notes = {"ratio normalized to 1 at x0 = 0, k0 = 0",
                  "resonant gap omega = m; delta_tau = 4",
                  "m, omega and delta_tau are plausible defaults; unstated for the original plot"};
  } else {
    throw DomainError("unknown figure id '" + std::string(fig_id) + "' (expected fig1..fig5)");
  }
  spec.validate();
  return spec;
}

}  // namespace udw

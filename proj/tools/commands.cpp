#include "commands.hpp"

#include "csv.hpp"
#include "dicke/core.hpp"
#include "dicke/errors.hpp"
#include "dicke/oracle.hpp"
#include "dicke/separable.hpp"
#include "dicke/thermal.hpp"
#include "dicke/witness.hpp"
#include "dicke/zerotemp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

namespace dicke::cli {

namespace {

struct GridAxis {
  std::vector<double> values;
  bool swept = false;
};

struct Settings {
  double omega = 1.0;
  double omega0 = 1.0;
  std::vector<int> n_atoms;
  GridAxis lambda;
  GridAxis temperature;  // empty when the command has no T axis
  Cutoffs cutoffs;
  int max_cutoff = 600;
  QuadratureSpec quad;
  int threads = 1;
  int precision = 12;
};

GridAxis read_axis(const Config& c, const std::string& prefix, const std::string& name) {
  const std::string kmin = prefix + name + "_min", kmax = prefix + name + "_max", ksteps = prefix + name + "_steps";
  const double lo = c.get_double(kmin), hi = c.get_double(kmax);
  const int steps = c.get_int(ksteps);
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw Error(ErrorKind::Config, kmin + "/" + kmax + " must be finite", kmin);
  if (hi < lo) throw Error(ErrorKind::Config, c.origin(kmax) + ": " + kmax + " is below " + kmin, kmax);
  if (steps < 1) throw Error(ErrorKind::Config, c.origin(ksteps) + ": " + ksteps + " must be >= 1", ksteps);
  GridAxis axis;
  if (lo == hi) {
    if (steps != 1)
      throw Error(ErrorKind::Config, c.origin(ksteps) + ": " + ksteps + " must be 1 when " + kmin + " == " + kmax, ksteps);
    axis.values = {lo};
    return axis;
  }
  if (steps < 2)
    throw Error(ErrorKind::Config, c.origin(ksteps) + ": " + ksteps + " must be >= 2 for a swept axis", ksteps);
  axis.swept = true;
  for (int i = 0; i < steps; ++i) axis.values.push_back(i + 1 == steps ? hi : lo + i * (hi - lo) / (steps - 1));
  return axis;
}

Settings read_settings(const Config& c, bool with_temperature, int threads_flag) {
  Settings s;
  s.omega = c.get_double("model.omega");
  s.omega0 = c.get_double("model.omega0");
  if (!(s.omega > 0.0)) throw Error(ErrorKind::Config, c.origin("model.omega") + ": model.omega must be > 0", "model.omega");
  if (!(s.omega0 > 0.0))
    throw Error(ErrorKind::Config, c.origin("model.omega0") + ": model.omega0 must be > 0", "model.omega0");
  s.n_atoms = c.get_ints("model.n_atoms");
  for (int n : s.n_atoms)
    if (n < 1) throw Error(ErrorKind::Config, c.origin("model.n_atoms") + ": model.n_atoms entries must be >= 1", "model.n_atoms");
  s.lambda = read_axis(c, "grid.", "lambda");
  for (double l : s.lambda.values)
    if (l < 0.0) throw Error(ErrorKind::Config, c.origin("grid.lambda_min") + ": lambda must be >= 0", "grid.lambda_min");
  if (with_temperature) {
    if (c.has("grid.beta_list")) {
      for (double b : c.get_doubles("grid.beta_list")) {
        if (!(b > 0.0)) throw Error(ErrorKind::Config, c.origin("grid.beta_list") + ": beta values must be > 0", "grid.beta_list");
        s.temperature.values.push_back(1.0 / b);
      }
      s.temperature.swept = s.temperature.values.size() > 1;
    } else {
      s.temperature = read_axis(c, "grid.", "t");
      for (double t : s.temperature.values)
        if (!(t > 0.0)) throw Error(ErrorKind::Config, c.origin("grid.t_min") + ": temperatures must be > 0", "grid.t_min");
    }
  }
  const bool any_swept = s.lambda.swept || s.temperature.swept || s.n_atoms.size() > 1;
  if (!any_swept) throw Error(ErrorKind::Config, "grid is empty: no axis is swept (all steps are 1)", "grid.lambda_steps");

  s.cutoffs = {c.get_int("numerics.cutoff_photon"), c.get_int("numerics.cutoff_atom")};
  if (s.cutoffs.photon < 8 || s.cutoffs.atom < 8)
    throw Error(ErrorKind::Config, "numerics.cutoff_photon and numerics.cutoff_atom must be >= 8", "numerics.cutoff_photon");
  s.max_cutoff = c.get_int("numerics.max_cutoff");
  s.quad.rel_tol = c.get_double("numerics.rel_tol");
  s.quad.max_nodes = c.get_int("numerics.max_nodes");
  s.quad.window_halfwidth_sigmas = c.get_double("numerics.window_sigmas");
  try {
    s.quad.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, std::string(e.what()), "numerics." + e.field());
  }
  int threads = threads_flag > 0 ? threads_flag : c.get_int("numerics.threads");
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  s.threads = threads;
  s.precision = c.get_int("output.precision");
  if (s.precision < 1 || s.precision > 17)
    throw Error(ErrorKind::Config, c.origin("output.precision") + ": output.precision must lie in [1, 17]", "output.precision");
  return s;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the failure with the lowest index.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min(threads, n));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ModelParams params_for(const Settings& s, double lambda, int n) { return {s.omega, s.omega0, lambda, n}; }

bool at_critical(const Settings& s, double lambda) {
  const double lc = critical_coupling(s.omega, s.omega0);
  return std::abs(lambda - lc) <= 1e-9 * lc;
}

std::string mode_of(const Config& c, const std::string& key, const std::vector<std::string>& allowed) {
  const std::string m = c.get_string(key);
  if (std::find(allowed.begin(), allowed.end(), m) == allowed.end()) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
    throw Error(ErrorKind::Config, c.origin(key) + ": " + key + " must be one of " + list, key);
  }
  return m;
}

std::optional<double> optional_tc(const std::optional<double>& v) { return v; }

// ---------------------------------------------------------------------------

CommandOutput sweep_zero_t(const Config& c, int threads_flag) {
  const Settings s = read_settings(c, false, threads_flag);
  const int nl = static_cast<int>(s.lambda.values.size());
  std::vector<std::optional<TwoModeState>> states(nl);
  const ZeroTempOptions opts{s.cutoffs, true, s.max_cutoff};
  parallel_for(nl, s.threads, [&](int i) {
    const double l = s.lambda.values[i];
    if (at_critical(s, l)) return;
    states[i] = solve_ground_state(params_for(s, l, s.n_atoms.front()), opts);
  });

  CsvTable t({"n_atoms", "lambda", "temperature", "phase", "status", "delta", "jz_per_atom", "jz_state", "a", "purity",
              "ground_energy", "closed_form_delta", "cutoff_photon", "cutoff_atom"},
             s.precision);
  const bool unit = s.omega == 1.0 && s.omega0 == 1.0;
  for (int n : s.n_atoms) {
    for (int i = 0; i < nl; ++i) {
      const double l = s.lambda.values[i];
      const ModelParams p = params_for(s, l, n);
      auto row = t.row();
      row.add(n).add(l).add(0.0).add(std::string(to_string(classify_phase(p, 0.0))));
      if (!states[i]) {
        row.add("critical_point").add(std::nullopt).add(order_parameter_zero_t(p)).add(std::nullopt)
            .add(0.5 + order_parameter_zero_t(p)).add(std::nullopt).add(std::nullopt)
            .add(unit && l < 0.5 ? std::optional<double>(closed_form_overlap_normal(l)) : std::nullopt)
            .add(std::nullopt).add(std::nullopt);
      } else {
        const ZeroTempPoint z = evaluate_zero_t(p, *states[i]);
        row.add("ok").add(z.delta).add(z.jz_mean_field).add(z.jz_state).add(z.a).add(z.purity).add(z.ground_energy)
            .add(unit && l < 0.5 ? std::optional<double>(closed_form_overlap_normal(l)) : std::nullopt)
            .add(z.cutoffs_used.photon).add(z.cutoffs_used.atom);
      }
      t.append(std::move(row));
    }
  }
  std::ostringstream rep;
  rep << "sweep-zero-t: " << t.size() << " rows, lambda_c = " << format_double(critical_coupling(s.omega, s.omega0), 12)
      << "\n";
  return {t.str(), rep.str()};
}

// ---------------------------------------------------------------------------

CommandOutput sweep_finite_t(const Config& c, int threads_flag) {
  const Settings s = read_settings(c, true, threads_flag);
  struct Task {
    int n;
    double lambda, temperature;
  };
  std::vector<Task> tasks;
  for (int n : s.n_atoms)
    for (double l : s.lambda.values)
      for (double T : s.temperature.values) tasks.push_back({n, l, T});
  std::vector<FiniteTPoint> out(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), s.threads, [&](int i) {
    const auto& task = tasks[i];
    out[i] = evaluate_finite_t({params_for(s, task.lambda, task.n), 1.0 / task.temperature}, s.quad);
  });

  CsvTable t({"n_atoms", "lambda", "temperature", "beta", "phase", "delta", "delta_printed", "a", "jz_per_atom",
              "log_z", "tc_printed", "tc_reduced", "tc_standard", "low_temperature_warning"},
             s.precision);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& r = out[i];
    const ModelParams& p = r.point.params;
    auto row = t.row();
    row.add(p.n_atoms).add(p.lambda).add(tasks[i].temperature).add(r.point.beta)
        .add(std::string(to_string(r.phase))).add(r.delta).add(r.delta_printed).add(r.a).add(r.jz).add(r.log_z)
        .add(optional_tc(critical_temperature(p))).add(critical_temperature_reduced(p))
        .add(optional_tc(critical_temperature_standard(p))).add_bool(r.low_temperature);
    t.append(std::move(row));
  }
  std::ostringstream rep;
  rep << "sweep-finite-t: " << t.size() << " rows\n";
  return {t.str(), rep.str()};
}

// ---------------------------------------------------------------------------

std::vector<std::string> witness_columns() {
  std::vector<std::string> cols;
  for (const auto& e : evaluate(MomentSet{1, {0, 0, -0.5}, {0.25, 0.25, 0.25}}).entries) {
    std::string label = e.label();
    std::replace(label.begin(), label.end(), ':', '_');
    std::replace(label.begin(), label.end(), '-', '_');
    cols.push_back(label);
  }
  return cols;
}

CommandOutput witness(const Config& c, int threads_flag) {
  const std::string mode = mode_of(c, "witness.mode", {"zero_t", "finite_t"});
  const std::string form = mode_of(c, "witness.form", {"large_n", "finite_n"});
  const std::string branch = mode_of(c, "witness.branch", {"broken", "symmetric"});
  const bool finite = mode == "finite_t";
  const Settings s = read_settings(c, finite, threads_flag);
  struct Task {
    int n;
    double lambda, temperature;
  };
  std::vector<Task> tasks;
  for (int n : s.n_atoms)
    for (double l : s.lambda.values) {
      if (finite)
        for (double T : s.temperature.values) tasks.push_back({n, l, T});
      else
        tasks.push_back({n, l, 0.0});
    }
  std::vector<std::optional<MomentSet>> moments(tasks.size());
  const ZeroTempOptions opts{s.cutoffs, true, s.max_cutoff};
  const auto convention = branch == "broken" ? BranchConvention::SymmetryBroken : BranchConvention::ParitySymmetric;
  parallel_for(static_cast<int>(tasks.size()), s.threads, [&](int i) {
    const auto& task = tasks[i];
    const ModelParams p = params_for(s, task.lambda, task.n);
    if (finite) {
      moments[i] = thermal_moments({p, 1.0 / task.temperature}, s.quad);
    } else if (!at_critical(s, task.lambda)) {
      moments[i] = collective_moments_zero_t(solve_ground_state(p, opts), p, convention);
    }
  });

  std::vector<std::string> header = {"n_atoms", "lambda", "temperature", "phase", "status", "jx", "jz",
                                     "second_x", "second_y", "second_z", "total_spin_lhs"};
  const auto wcols = witness_columns();
  header.insert(header.end(), wcols.begin(), wcols.end());
  header.push_back("violations");
  header.push_back("any_violation");
  header.push_back("low_temperature_warning");
  CsvTable t(header, s.precision);
  int total_violations = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& task = tasks[i];
    const ModelParams p = params_for(s, task.lambda, task.n);
    auto row = t.row();
    row.add(task.n).add(task.lambda).add(task.temperature)
        .add(std::string(to_string(classify_phase(p, task.temperature))));
    const bool low_t = finite && task.temperature < kLowTemperatureLimit;
    if (!moments[i]) {
      row.add("critical_point");
      for (std::size_t k = 0; k < 6 + wcols.size(); ++k) row.add(std::nullopt);
      row.add(0).add_bool(false).add_bool(low_t);
    } else {
      const auto& m = *moments[i];
      const WitnessReport r = form == "large_n" ? evaluate(m) : evaluate_finite_n(m);
      row.add("ok").add(m.first[0]).add(m.first[2]).add(m.second[0]).add(m.second[1]).add(m.second[2])
          .add(r.total_spin_lhs);
      int violations = 0;
      for (const auto& e : r.entries) {
        row.add(e.lhs);
        violations += e.violated ? 1 : 0;
      }
      total_violations += violations;
      row.add(violations).add_bool(r.any_violation).add_bool(low_t);
    }
    t.append(std::move(row));
  }
  std::ostringstream rep;
  rep << "witness (" << mode << ", " << form << "): " << t.size() << " rows, " << total_violations
      << " violated entries\n";
  return {t.str(), rep.str()};
}

// ---------------------------------------------------------------------------

int auto_oracle_cutoff(const ModelParams& p) {
  const double lc = critical_coupling(p);
  double photons = 0.0;
  if (p.lambda > lc) {
    const double mu = lc * lc / (p.lambda * p.lambda);
    photons = p.lambda * p.lambda * p.n_atoms * (1.0 - mu * mu) / (p.omega * p.omega);
  }
  return std::max(30, static_cast<int>(std::ceil(photons + 6.0 * std::sqrt(photons + 1.0) + 24.0)));
}

void add_moment_errors(CsvTable::Row& row, const std::optional<MomentSet>& a, const MomentSet& b) {
  for (int k = 0; k < 3; ++k) row.add(a ? std::optional<double>(std::abs(a->first[k] - b.first[k])) : std::nullopt);
  for (int k = 0; k < 3; ++k) row.add(a ? std::optional<double>(std::abs(a->second[k] - b.second[k])) : std::nullopt);
}

CommandOutput oracle_compare(const Config& c, int threads_flag) {
  const std::string mode = mode_of(c, "oracle.mode", {"ground", "thermal"});
  const bool thermal = mode == "thermal";
  const Settings s = read_settings(c, thermal, threads_flag);
  const std::string cutoff_text = c.get_string("oracle.cutoff");
  const bool auto_cutoff = cutoff_text == "auto";
  const int fixed_cutoff = auto_cutoff ? 0 : c.get_int("oracle.cutoff");
  if (!auto_cutoff && fixed_cutoff < 2)
    throw Error(ErrorKind::Config, c.origin("oracle.cutoff") + ": oracle.cutoff must be >= 2 or auto", "oracle.cutoff");

  // Capacity is checked before any work starts.
  for (int n : s.n_atoms) {
    for (double l : s.lambda.values) {
      const ModelParams p = params_for(s, l, n);
      oracle::DickeBasis b{thermal ? oracle::BasisKind::FullProduct : oracle::BasisKind::SymmetricSector, n,
                           auto_cutoff ? auto_oracle_cutoff(p) : fixed_cutoff};
      b.validate();
    }
  }

  const std::vector<std::string> moment_cols = {"err_first_x", "err_first_y", "err_first_z",
                                                "err_second_x", "err_second_y", "err_second_z"};
  if (!thermal) {
    struct Task {
      int n;
      double lambda;
    };
    std::vector<Task> tasks;
    for (int n : s.n_atoms)
      for (double l : s.lambda.values) tasks.push_back({n, l});
    struct Result {
      int cutoff;
      ZeroTempPoint eff;
      std::optional<MomentSet> eff_moments;
      double delta_oracle, jz_oracle;
      MomentSet oracle_moments;
    };
    std::vector<std::optional<Result>> out(tasks.size());
    const ZeroTempOptions opts{s.cutoffs, true, s.max_cutoff};
    parallel_for(static_cast<int>(tasks.size()), s.threads, [&](int i) {
      const ModelParams p = params_for(s, tasks[i].lambda, tasks[i].n);
      if (at_critical(s, tasks[i].lambda)) return;
      Result r;
      r.cutoff = auto_cutoff ? auto_oracle_cutoff(p) : fixed_cutoff;
      const TwoModeState st = solve_ground_state(p, opts);
      r.eff = evaluate_zero_t(p, st);
      try {
        r.eff_moments = collective_moments_zero_t(st, p, BranchConvention::ParitySymmetric);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Cutoff) throw;
      }
      const auto ed = oracle::exact_ground_state(p, r.cutoff);
      r.oracle_moments = oracle::exact_moments(ed);
      r.jz_oracle = r.oracle_moments.first[2];
      r.delta_oracle = oracle::exact_overlap(ed, SeparableState::from_jz(r.eff.jz_mean_field, p.n_atoms)).via_diagonal;
      out[i] = r;
    });
    std::vector<std::string> header = {"n_atoms", "lambda", "status", "oracle_cutoff", "delta_effective",
                                       "delta_oracle", "delta_abs_err", "delta_rel_err", "jz_effective",
                                       "jz_oracle", "jz_abs_err"};
    header.insert(header.end(), moment_cols.begin(), moment_cols.end());
    CsvTable t(header, s.precision);
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      auto row = t.row();
      row.add(tasks[i].n).add(tasks[i].lambda);
      if (!out[i]) {
        row.add("critical_point");
        for (std::size_t k = 0; k < header.size() - 3; ++k) row.add(std::nullopt);
      } else {
        const auto& r = *out[i];
        const double err = std::abs(r.eff.delta - r.delta_oracle);
        row.add("ok").add(r.cutoff).add(r.eff.delta).add(r.delta_oracle).add(err).add(err / r.delta_oracle)
            .add(r.eff.jz_state).add(r.jz_oracle).add(std::abs(r.eff.jz_state - r.jz_oracle));
        add_moment_errors(row, r.eff_moments, r.oracle_moments);
      }
      t.append(std::move(row));
    }
    return {t.str(), "oracle-compare (ground): " + std::to_string(t.size()) + " rows\n"};
  }

  struct Task {
    int n;
    double lambda, temperature;
  };
  std::vector<Task> tasks;
  for (int n : s.n_atoms)
    for (double l : s.lambda.values)
      for (double T : s.temperature.values) tasks.push_back({n, l, T});
  struct Result {
    int cutoff;
    FiniteTPoint quad;
    MomentSet quad_moments;
    double a_oracle, delta_oracle, jz_oracle, log_z_split, log_z_exact;
    MomentSet oracle_moments;
  };
  std::vector<Result> out(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), s.threads, [&](int i) {
    const ModelParams p = params_for(s, tasks[i].lambda, tasks[i].n);
    const double beta = 1.0 / tasks[i].temperature;
    Result r;
    r.cutoff = auto_cutoff ? 40 : fixed_cutoff;
    r.quad = evaluate_finite_t({p, beta}, s.quad);
    r.quad_moments = thermal_moments({p, beta}, s.quad);
    const auto th = oracle::exact_thermal_state(p, r.cutoff, beta);
    r.oracle_moments = oracle::exact_moments(th);
    r.jz_oracle = r.oracle_moments.first[2];
    r.a_oracle = std::clamp(0.5 + r.jz_oracle, 0.0, 1.0);
    r.delta_oracle = oracle::exact_overlap(th, SeparableState::from_probability(r.a_oracle, p.n_atoms)).via_diagonal;
    r.log_z_split = oracle::split_log_partition(p, r.cutoff, beta);
    r.log_z_exact = th.log_z;
    out[i] = r;
  });
  std::vector<std::string> header = {"n_atoms", "lambda", "beta", "temperature", "oracle_cutoff", "a_quadrature",
                                     "a_oracle", "delta_quadrature", "delta_oracle", "delta_abs_err",
                                     "delta_rel_err", "jz_quadrature", "jz_oracle", "jz_abs_err"};
  header.insert(header.end(), moment_cols.begin(), moment_cols.end());
  for (const char* h : {"log_z_quadrature", "log_z_split_oracle", "log_z_exact_oracle", "low_temperature_warning"})
    header.push_back(h);
  CsvTable t(header, s.precision);
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& r = out[i];
    const double err = std::abs(r.quad.delta - r.delta_oracle);
    auto row = t.row();
    row.add(tasks[i].n).add(tasks[i].lambda).add(r.quad.point.beta).add(tasks[i].temperature).add(r.cutoff)
        .add(r.quad.a).add(r.a_oracle).add(r.quad.delta).add(r.delta_oracle).add(err).add(err / r.delta_oracle)
        .add(r.quad.jz).add(r.jz_oracle).add(std::abs(r.quad.jz - r.jz_oracle));
    add_moment_errors(row, r.quad_moments, r.oracle_moments);
    row.add(r.quad.log_z).add(r.log_z_split).add(r.log_z_exact).add_bool(r.quad.low_temperature);
    t.append(std::move(row));
  }
  return {t.str(), "oracle-compare (thermal): " + std::to_string(t.size()) + " rows\n"};
}

// ---------------------------------------------------------------------------

CommandOutput scaling(const Config& c, int threads_flag) {
  const std::string source = mode_of(c, "fit.source", {"closed_form", "numerical", "synthetic"});
  const std::string spacing = mode_of(c, "fit.spacing", {"log", "linear"});
  const double omega = c.get_double("model.omega"), omega0 = c.get_double("model.omega0");
  if (!(omega > 0.0 && omega0 > 0.0)) throw Error(ErrorKind::Config, "model.omega and model.omega0 must be > 0", "model.omega");
  const double lc = critical_coupling(omega, omega0);
  const double lo = c.get_double("fit.lambda_min"), hi = c.get_double("fit.lambda_max");
  const int points = c.get_int("fit.points");
  const int order = c.get_int("fit.correction_order");
  if (!(lo >= 0.0 && lo < hi && hi < lc))
    throw Error(ErrorKind::Config, c.origin("fit.lambda_max") + ": need 0 <= fit.lambda_min < fit.lambda_max < lambda_c",
                "fit.lambda_max");
  if (points < 4) throw Error(ErrorKind::InsufficientData, c.origin("fit.points") + ": fit.points must be >= 4", "fit.points");
  if (order < 0) throw Error(ErrorKind::Config, "fit.correction_order must be >= 0", "fit.correction_order");
  if (source == "closed_form" && !(omega == 1.0 && omega0 == 1.0))
    throw Error(ErrorKind::Config, "the closed form assumes model.omega = model.omega0 = 1", "fit.source");
  const int precision = c.get_int("output.precision");
  int threads = threads_flag > 0 ? threads_flag : c.get_int("numerics.threads");
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  std::vector<double> lambdas(points);
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / (points - 1);
    if (spacing == "linear") {
      lambdas[i] = lo + f * (hi - lo);
    } else {
      // log-spaced in the distance 1 - lambda/lambda_c
      const double t0 = std::log(1.0 - lo / lc), t1 = std::log(1.0 - hi / lc);
      lambdas[i] = lc * (1.0 - std::exp(t0 + f * (t1 - t0)));
    }
  }
  std::vector<double> deltas(points);
  const int n = c.get_ints("model.n_atoms").front();
  const ZeroTempOptions opts{{c.get_int("numerics.cutoff_photon"), c.get_int("numerics.cutoff_atom")}, true,
                             c.get_int("numerics.max_cutoff")};
  parallel_for(points, threads, [&](int i) {
    const double l = lambdas[i];
    if (source == "closed_form") deltas[i] = closed_form_overlap_normal(l);
    else if (source == "synthetic") deltas[i] = std::pow(1.0 - l / lc, 0.25);
    else deltas[i] = evaluate_zero_t({omega, omega0, l, n}, opts).delta;
  });
  const ScalingFit fit = scaling_fit(lambdas, deltas, lc, order);

  CsvTable t({"lambda", "distance", "log_distance", "neg_log_delta", "delta", "plain_fit_residual",
              "corrected_fit_residual"},
             precision);
  for (int i = 0; i < points; ++i) {
    const double dist = 1.0 - lambdas[i] / lc;
    auto row = t.row();
    row.add(lambdas[i]).add(dist).add(-std::log(dist)).add(-std::log(deltas[i])).add(deltas[i])
        .add(fit.residuals[i]).add(fit.corrected_residuals[i]);
    t.append(std::move(row));
  }
  std::ostringstream rep;
  rep << "source = " << source << "\n"
      << "points = " << points << " (" << spacing << " spacing on [" << format_double(lo, 6) << ", "
      << format_double(hi, 6) << "])\n"
      << "exponent = " << format_double(fit.exponent, precision) << "\n"
      << "exponent_stderr = " << format_double(fit.exponent_stderr, precision) << "\n"
      << "correction_order = " << fit.correction_order << "\n"
      << "plain_slope = " << format_double(fit.slope, precision) << "\n"
      << "plain_slope_stderr = " << format_double(fit.slope_stderr, precision) << "\n";
  double rms = 0.0, rms_plain = 0.0;
  for (int i = 0; i < points; ++i) {
    rms += fit.corrected_residuals[i] * fit.corrected_residuals[i];
    rms_plain += fit.residuals[i] * fit.residuals[i];
  }
  rep << "corrected_residual_rms = " << format_double(std::sqrt(rms / points), 6) << "\n"
      << "plain_residual_rms = " << format_double(std::sqrt(rms_plain / points), 6) << "\n";
  return {t.str(), rep.str()};
}

// ---------------------------------------------------------------------------

CommandOutput critical(const Config& c, int threads_flag) {
  Config relaxed = c;
  const Settings s = read_settings(relaxed, false, threads_flag);
  const double lc = critical_coupling(s.omega, s.omega0);
  CsvTable t({"lambda", "lambda_c", "phase_zero_t", "order_parameter", "tc_printed", "tc_reduced", "tc_standard"},
             s.precision);
  for (double l : s.lambda.values) {
    const ModelParams p = params_for(s, l, s.n_atoms.front());
    auto row = t.row();
    row.add(l).add(lc).add(std::string(to_string(classify_phase(p, 0.0)))).add(order_parameter_zero_t(p))
        .add(optional_tc(critical_temperature(p))).add(critical_temperature_reduced(p))
        .add(optional_tc(critical_temperature_standard(p)));
    t.append(std::move(row));
  }
  return {t.str(), "lambda_c = " + format_double(lc, s.precision) + "\n"};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"sweep-zero-t", "sweep-finite-t", "witness",
                                                 "oracle-compare", "scaling-fit", "critical"};
  return names;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "model.omega", "model.omega0", "model.n_atoms",
      "grid.lambda_min", "grid.lambda_max", "grid.lambda_steps", "grid.t_min", "grid.t_max", "grid.t_steps",
      "grid.beta_list",
      "numerics.cutoff_photon", "numerics.cutoff_atom", "numerics.max_cutoff", "numerics.rel_tol",
      "numerics.max_nodes", "numerics.window_sigmas", "numerics.threads",
      "output.csv", "output.precision",
      "witness.mode", "witness.form", "witness.branch",
      "oracle.mode", "oracle.cutoff",
      "fit.source", "fit.lambda_min", "fit.lambda_max", "fit.points", "fit.spacing", "fit.correction_order"};
  return keys;
}

Config default_config(const std::string& command, const Config& user) {
  Config d;
  auto put = [&](const std::string& k, const std::string& v) { d.set(k, v, "default"); };
  put("model.omega", "1");
  put("model.omega0", "1");
  put("model.n_atoms", "100");
  put("grid.lambda_min", "0");
  put("grid.lambda_max", "1.5");
  put("grid.lambda_steps", "61");
  put("grid.t_min", "0.2");
  put("grid.t_max", "3");
  put("grid.t_steps", "29");
  put("numerics.cutoff_photon", "60");
  put("numerics.cutoff_atom", "60");
  put("numerics.max_cutoff", "600");
  put("numerics.rel_tol", "1e-10");
  put("numerics.max_nodes", "20000");
  put("numerics.window_sigmas", "8");
  put("numerics.threads", "0");
  put("output.precision", "12");
  put("witness.mode", "zero_t");
  put("witness.form", "large_n");
  put("witness.branch", "broken");
  put("oracle.mode", "ground");
  put("oracle.cutoff", "auto");
  put("fit.source", "closed_form");
  put("fit.lambda_min", "0.45");
  put("fit.lambda_max", "0.4999");
  put("fit.points", "16");
  put("fit.spacing", "log");
  put("fit.correction_order", "3");

  if (command == "sweep-zero-t") {
    put("model.n_atoms", "8,16,32");
  } else if (command == "sweep-finite-t") {
    put("grid.lambda_steps", "31");
  } else if (command == "witness") {
    const bool finite = user.has("witness.mode") && user.get_string("witness.mode") == "finite_t";
    if (finite) {
      put("grid.t_min", "0.5");
      put("grid.t_steps", "26");
      put("grid.lambda_steps", "31");
    } else {
      put("grid.lambda_min", "0.4");
      put("grid.lambda_steps", "45");
    }
  } else if (command == "oracle-compare") {
    put("numerics.cutoff_photon", "30");
    put("numerics.cutoff_atom", "30");
    const bool thermal = user.has("oracle.mode") && user.get_string("oracle.mode") == "thermal";
    if (thermal) {
      put("model.n_atoms", "4");
      put("grid.lambda_min", "0.5");
      put("grid.lambda_max", "1");
      put("grid.lambda_steps", "2");
      put("grid.beta_list", "0.1,0.2,0.4");
    } else {
      put("model.n_atoms", "40");
      put("grid.lambda_min", "0.2");
      put("grid.lambda_max", "1");
      put("grid.lambda_steps", "5");
    }
  } else if (command == "scaling-fit") {
    put("numerics.cutoff_photon", "30");
    put("numerics.cutoff_atom", "30");
  }
  return d;
}

CommandOutput run_command(const std::string& command, const Config& user, int threads) {
  user.reject_unknown(known_keys());
  Config c = default_config(command, user);
  c.merge(user);
  if (command == "sweep-zero-t") return sweep_zero_t(c, threads);
  if (command == "sweep-finite-t") return sweep_finite_t(c, threads);
  if (command == "witness") return witness(c, threads);
  if (command == "oracle-compare") return oracle_compare(c, threads);
  if (command == "scaling-fit") return scaling(c, threads);
  if (command == "critical") return critical(c, threads);
  throw Error(ErrorKind::Config, "unknown command '" + command + "'", "command");
}

}  // namespace dicke::cli

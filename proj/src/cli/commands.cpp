#include "willis/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "willis/errors.hpp"
#include "willis/monodromy.hpp"
#include "willis/parallel.hpp"
#include "willis/pwe_elastic.hpp"
#include "willis/pwe_scalar.hpp"
#include "willis/spectrum.hpp"

namespace willis::cli {

namespace {

const char* kVoigtNames[6] = {"11", "22", "33", "23", "13", "12"};

std::string rule_name(FactorizationRule r) {
  switch (r) {
    case FactorizationRule::automatic: return "automatic";
    case FactorizationRule::laurent: return "laurent";
    case FactorizationRule::inverse: return "inverse";
  }
  return "?";
}

std::string hash_hex(const std::string& text) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016zx", std::hash<std::string>{}(text));
  return buf;
}

ResultTable start_table(const JobConfig& cfg, const std::string& command) {
  ResultTable t;
  t.set_meta("tool", kToolVersion);
  t.set_meta("command", command);
  t.set_meta("config_hash", hash_hex(cfg.text));
  t.set_meta("model", cfg.model == WaveModel::scalar ? "scalar" : "elastic");
  t.set_meta("truncation", std::to_string(cfg.truncation));
  t.set_meta("rule", rule_name(cfg.rule));
  t.set_meta("tolerance", format_real(cfg.tolerance));
  return t;
}

int k_components(const JobConfig& cfg) { return cfg.model == WaveModel::elastic ? 3 : cfg.dimension(); }

void add_k_columns(ResultTable& t, int n) {
  if (n == 1) {
    t.add_column("k");
    return;
  }
  for (int i = 1; i <= n; ++i) t.add_column("k_" + std::to_string(i));
}

void push_k(std::vector<Cell>& row, const Eigen::VectorXd& k) {
  for (Eigen::Index i = 0; i < k.size(); ++i) row.emplace_back(k(i));
}

Cell real_or_empty(double v) { return std::isfinite(v) ? Cell(v) : Cell(); }

std::vector<int> requested_branches(const JobConfig& cfg) {
  if (!cfg.branch_list.empty()) return cfg.branch_list;
  std::vector<int> out;
  for (int b = 1; b <= cfg.branches; ++b) out.push_back(b);
  return out;
}

TraceOptions trace_options(const JobConfig& cfg, const RunOptions& run) {
  TraceOptions o;
  o.threads = run.threads;
  o.polish = cfg.polish;
  o.threshold = cfg.tolerance;
  return o;
}

void add_scalar_param_columns(ResultTable& t, int d, const std::string& suffix = "") {
  for (int j = 1; j <= d; ++j)
    for (int l = 1; l <= d; ++l) t.add_column(d == 1 ? "mu" + suffix : "mu_" + std::to_string(j) + std::to_string(l) + suffix, ColumnType::complex);
  t.add_column("rho" + suffix);
  for (int j = 1; j <= d; ++j) t.add_column(d == 1 ? "S" + suffix : "S_" + std::to_string(j) + suffix, ColumnType::complex);
}

void push_scalar_params(std::vector<Cell>& row, int d, const EffectiveParamsScalar* p) {
  for (int j = 0; j < d; ++j)
    for (int l = 0; l < d; ++l) row.push_back(p ? Cell(p->mu(j, l)) : Cell());
  row.push_back(p ? Cell(p->rho) : Cell());
  for (int j = 0; j < d; ++j) row.push_back(p ? Cell(p->s(j)) : Cell());
}

std::string status_of(const EffectiveParamsScalar& p) {
  return p.status == ParamStatus::near_exceptional ? "near-exceptional" : "regular";
}

ResultTable homogenize_scalar(const JobConfig& cfg, const RunOptions& run) {
  const int d = cfg.dimension();
  const ScalarModel model(cfg.scalar(), cfg.truncation, cfg.rule);
  ResultTable t = start_table(cfg, "homogenize");
  t.add_column("omega");
  add_k_columns(t, d);
  t.add_column("status", ColumnType::text);
  t.add_column("rcond");
  add_scalar_param_columns(t, d);
  t.add_column("Z_eff", ColumnType::complex);

  std::vector<std::vector<Cell>> rows(cfg.points_omega.size());
  parallel_for(rows.size(), run.threads, [&](std::size_t i) {
    const double w = cfg.points_omega[i];
    const Eigen::VectorXd& k = cfg.points_k[i];
    auto& row = rows[i];
    row.emplace_back(w);
    push_k(row, k);
    const ImpedanceSystem sys = assemble_impedance(assemble_operators(model, w, k));
    try {
      const RestrictedGreen green = restricted_green(sys, cfg.tolerance);
      const EffectiveParamsScalar p = effective_params(sys, green);
      row.emplace_back(status_of(p));
      row.emplace_back(p.rcond);
      push_scalar_params(row, d, &p);
      row.emplace_back(effective_impedance(p));
    } catch (const ExceptionalPointError& e) {
      row.emplace_back(std::string("exceptional"));
      row.emplace_back(e.rcond());
      push_scalar_params(row, d, nullptr);
      row.emplace_back();
    }
  });
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

ResultTable homogenize_elastic(const JobConfig& cfg, const RunOptions& run) {
  const ElasticModel model(cfg.elastic(), cfg.truncation);
  ResultTable t = start_table(cfg, "homogenize");
  t.add_column("omega");
  add_k_columns(t, 3);
  t.add_column("status", ColumnType::text);
  t.add_column("rcond");
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) t.add_column(std::string("C_") + kVoigtNames[a] + "_" + kVoigtNames[b], ColumnType::complex);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) t.add_column("rho_" + std::to_string(i) + std::to_string(j), ColumnType::complex);
  for (int a = 0; a < 6; ++a)
    for (int k = 1; k <= 3; ++k) t.add_column(std::string("S_") + kVoigtNames[a] + "_" + std::to_string(k), ColumnType::complex);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) t.add_column("Z_" + std::to_string(i) + std::to_string(j), ColumnType::complex);
  const std::size_t values = 36 + 9 + 18 + 9;

  std::vector<std::vector<Cell>> rows(cfg.points_omega.size());
  parallel_for(rows.size(), run.threads, [&](std::size_t i) {
    const double w = cfg.points_omega[i];
    const Eigen::Vector3d k = cfg.points_k[i];
    auto& row = rows[i];
    row.emplace_back(w);
    push_k(row, k);
    const ElasticImpedance sys = assemble_elastic(model, w, k);
    try {
      const RestrictedGreen green = restricted_green(sys, cfg.tolerance);
      const EffectiveParamsElastic p = effective_tensors(sys, green);
      row.emplace_back(std::string(p.status == ParamStatus::near_exceptional ? "near-exceptional" : "regular"));
      row.emplace_back(p.rcond);
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) row.emplace_back(p.C(a, b));
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) row.emplace_back(p.rho(a, b));
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 3; ++b) row.emplace_back(p.S(a, b));
      const Eigen::Matrix3cd z = effective_impedance_matrix(p);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) row.emplace_back(z(a, b));
    } catch (const ExceptionalPointError& e) {
      row.emplace_back(std::string("exceptional"));
      row.emplace_back(e.rcond());
      row.resize(row.size() + values);
    }
  });
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

double cell_period(const ScalarProfile& p) { return p.lattice().translations()(0, 0); }

}  // namespace

ResultTable cmd_bands(const JobConfig& cfg, const RunOptions& run) {
  const auto grid = k_line(cfg.k_start, cfg.k_stop, cfg.k_count, cfg.direction);
  BlochBranchSet set;
  if (cfg.model == WaveModel::scalar) {
    set = trace_branches(ScalarModel(cfg.scalar(), cfg.truncation, cfg.rule), grid, cfg.branches,
                         trace_options(cfg, run));
  } else {
    set = trace_branches(ElasticModel(cfg.elastic(), cfg.truncation), grid, cfg.branches, trace_options(cfg, run));
  }
  ResultTable t = start_table(cfg, "bands");
  add_k_columns(t, k_components(cfg));
  for (int n = 1; n <= cfg.branches; ++n) t.add_column("omega_" + std::to_string(n));
  for (int n = 1; n <= cfg.branches; ++n) t.add_column("status_" + std::to_string(n), ColumnType::text);
  for (std::size_t i = 0; i < set.samples(); ++i) {
    std::vector<Cell> row;
    push_k(row, set.k[i]);
    for (int n = 0; n < cfg.branches; ++n) row.push_back(real_or_empty(set.omega[n][i]));
    for (int n = 0; n < cfg.branches; ++n)
      row.push_back(std::isfinite(set.omega[n][i]) ? Cell(to_string(set.status[n][i])) : Cell(std::string("none")));
    t.add_row(std::move(row));
  }
  return t;
}

ResultTable cmd_homogenize(const JobConfig& cfg, const RunOptions& run) {
  if (cfg.points_omega.empty()) throw ConfigError("homogenize needs [job] points");
  return cfg.model == WaveModel::scalar ? homogenize_scalar(cfg, run) : homogenize_elastic(cfg, run);
}

ResultTable cmd_branch_params(const JobConfig& cfg, const RunOptions& run) {
  if (cfg.model != WaveModel::scalar) throw ConfigError("branch-params supports the scalar model only");
  const int d = cfg.dimension();
  const ScalarModel model(cfg.scalar(), cfg.truncation, cfg.rule);
  const auto set = trace_branches(model, k_line(cfg.k_start, cfg.k_stop, cfg.k_count, cfg.direction), cfg.branches,
                                  trace_options(cfg, run));
  ResultTable t = start_table(cfg, "branch-params");
  t.add_column("branch");
  add_k_columns(t, d);
  t.add_column("omega");
  t.add_column("status", ColumnType::text);
  t.add_column("rcond");
  add_scalar_param_columns(t, d);
  for (int b : requested_branches(cfg)) {
    const auto samples = params_on_branch(model, set, b - 1, run.threads);
    for (const auto& s : samples) {
      std::vector<Cell> row;
      row.emplace_back(static_cast<double>(b));
      push_k(row, s.k);
      row.push_back(real_or_empty(s.omega));
      if (s.params) {
        row.emplace_back(status_of(*s.params));
        row.emplace_back(s.params->rcond);
      } else {
        row.emplace_back(std::isfinite(s.omega) ? to_string(s.status) : std::string("none"));
        row.emplace_back();
      }
      push_scalar_params(row, d, s.params ? &*s.params : nullptr);
      t.add_row(std::move(row));
    }
  }
  return t;
}

ResultTable cmd_compare_mm(const JobConfig& cfg, const RunOptions& run) {
  if (cfg.model != WaveModel::scalar || cfg.dimension() != 1)
    throw ConfigError("compare-mm needs a 1D scalar profile");
  const ScalarProfile& profile = cfg.scalar();
  if (!std::holds_alternative<LayerStack>(profile.geometry()) || !profile.classical())
    throw ConfigError("compare-mm needs classical layers");
  const double period = cell_period(profile);
  const ScalarModel model(profile, cfg.truncation, cfg.rule);
  const auto set = trace_branches(model, k_line(cfg.k_start, cfg.k_stop, cfg.k_count, cfg.direction), cfg.branches,
                                  trace_options(cfg, run));

  ResultTable t = start_table(cfg, "compare-mm");
  std::string y0_list;
  for (std::size_t j = 0; j < cfg.y0.size(); ++j) y0_list += (j ? " " : "") + format_real(cfg.y0[j]);
  t.set_meta("y0", y0_list);
  t.set_meta("log_branch", std::to_string(cfg.log_branch));
  t.add_column("branch");
  t.add_column("k");
  t.add_column("omega_pwe");
  t.add_column("omega_mm");
  t.add_column("dispersion_residual");
  t.add_column("status_pwe", ColumnType::text);
  add_scalar_param_columns(t, 1, "_pwe");
  for (std::size_t j = 0; j < cfg.y0.size(); ++j) {
    const std::string tag = "_mm_y" + std::to_string(j + 1);
    t.add_column("status" + tag, ColumnType::text);
    t.add_column("mu" + tag, ColumnType::complex);
    t.add_column("rho" + tag, ColumnType::complex);
    t.add_column("S" + tag, ColumnType::complex);
  }

  for (int b : requested_branches(cfg)) {
    const auto samples = params_on_branch(model, set, b - 1, run.threads);
    std::vector<std::vector<Cell>> rows(samples.size());
    parallel_for(samples.size(), run.threads, [&](std::size_t i) {
      const auto& s = samples[i];
      const double k = s.k(0);
      auto& row = rows[i];
      row.emplace_back(static_cast<double>(b));
      row.emplace_back(k);
      row.push_back(real_or_empty(s.omega));
      const double w_mm = mm_branch_frequency(profile, k, b - 1);
      row.emplace_back(w_mm);
      row.push_back(std::isfinite(s.omega) ? Cell(std::abs(std::cos(k * period) - mm_dispersion(profile, s.omega)))
                                           : Cell());
      row.emplace_back(s.params ? status_of(*s.params)
                                : (std::isfinite(s.omega) ? to_string(s.status) : std::string("none")));
      push_scalar_params(row, 1, s.params ? &*s.params : nullptr);
      for (double y0 : cfg.y0) {
        try {
          if (!(w_mm > 0.0)) throw InvalidArgument("static point");
          const auto mm = mm_effective_params(profile, w_mm, k, y0, cfg.log_branch);
          row.emplace_back(std::string("regular"));
          row.emplace_back(mm.mu);
          row.emplace_back(mm.rho);
          row.emplace_back(mm.s);
        } catch (const NonDiagonalizable&) {
          row.emplace_back(std::string("band-edge"));
          row.resize(row.size() + 3);
        } catch (const NoRealWavenumber&) {
          row.emplace_back(std::string("stopband"));
          row.resize(row.size() + 3);
        } catch (const InvalidArgument&) {
          row.emplace_back(std::string("static"));
          row.resize(row.size() + 3);
        }
      }
    });
    for (auto& r : rows) t.add_row(std::move(r));
  }
  return t;
}

namespace {

void write_plot_stub(const std::string& path, const std::string& data, const ResultTable& t) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write plot script '" + path + "'");
  const auto names = t.header();
  out << "set datafile separator ','\n";
  out << "set key autotitle columnhead\n";
  out << "set xlabel '" << names.front() << "'\n";
  out << "plot";
  bool first = true;
  for (std::size_t i = 1; i < names.size(); ++i) {
    if (names[i].rfind("status", 0) == 0 || names[i] == "branch") continue;
    out << (first ? " " : ", \\\n     ") << "'" << data << "' using 1:" << i + 1 << " with points pt 7 ps 0.3";
    first = false;
  }
  out << '\n';
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Willis effective parameters of periodic media by plane-wave expansion", "willis-pwe"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  std::string plot_path;
  std::optional<int> truncation;
  std::optional<int> threads;
  std::optional<double> tolerance;
  app.add_option("--config", config_path, "job configuration file")->required();
  app.add_option("--out", out_path, "CSV output path (stdout when omitted)");
  app.add_option("--truncation", truncation, "plane-wave box half-width N");
  app.add_option("--threads", threads, "worker threads (fallback: WILLIS_PWE_THREADS)");
  app.add_option("--tolerance", tolerance, "exceptional-point rcond threshold");
  app.add_option("--plot", plot_path, "also write a gnuplot script for the CSV");
  app.set_version_flag("--version", kToolVersion);
  auto* bands = app.add_subcommand("bands", "Bloch branches along the k line");
  auto* homogenize = app.add_subcommand("homogenize", "effective parameters at the listed (omega, k) points");
  auto* branch_params = app.add_subcommand("branch-params", "effective parameters along traced branches");
  auto* compare_mm = app.add_subcommand("compare-mm", "PWE against the monodromy-matrix homogenizer");
  // Global flags may follow the subcommand name.
  for (auto* sub : {bands, homogenize, branch_params, compare_mm}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    JobConfig cfg = load_config(config_path);
    if (truncation) {
      if (*truncation < 1) throw ConfigError("--truncation must be >= 1");
      cfg.truncation = *truncation;
    }
    if (tolerance) {
      if (!(*tolerance > 0.0) || *tolerance >= 1.0) throw ConfigError("--tolerance must lie in (0, 1)");
      cfg.tolerance = *tolerance;
    }
    RunOptions run;
    if (threads) {
      run.threads = *threads;
    } else if (const char* env = std::getenv("WILLIS_PWE_THREADS")) {
      try {
        run.threads = std::stoi(env);
      } catch (const std::exception&) {
        throw ConfigError("WILLIS_PWE_THREADS must be an integer");
      }
    }
    if (run.threads < 1) throw ConfigError("thread count must be >= 1");

    ResultTable table;
    if (bands->parsed()) table = cmd_bands(cfg, run);
    else if (homogenize->parsed()) table = cmd_homogenize(cfg, run);
    else if (branch_params->parsed()) table = cmd_branch_params(cfg, run);
    else if (compare_mm->parsed()) table = cmd_compare_mm(cfg, run);

    // Single writer, after all computation is done.
    std::ostringstream csv;
    table.write_csv(csv);
    if (out_path.empty()) {
      std::cout << csv.str();
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw ConfigError("cannot write '" + out_path + "'");
      out << csv.str();
    }
    if (!plot_path.empty()) write_plot_stub(plot_path, out_path.empty() ? "-" : out_path, table);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "willis-pwe: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "willis-pwe: numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace willis::cli

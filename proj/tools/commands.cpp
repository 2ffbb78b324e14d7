#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "manifest.hpp"
#include "subflow/analysis.hpp"
#include "subflow/calculus.hpp"
#include "subflow/config.hpp"
#include "subflow/csv.hpp"
#include "subflow/ctrw.hpp"
#include "subflow/error.hpp"
#include "subflow/laplace.hpp"
#include "subflow/parallel.hpp"
#include "subflow/semigroup.hpp"

namespace subflow::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  double at(std::size_t i) const {
    if (n == 1) return lo;
    return i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  json to_json() const { return {{"lo", lo}, {"hi", hi}, {"n", n}}; }
};

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::ConfigError, "cannot parse " + what + " '" + s + "'");
  }
}

// "lo:hi:n" with n points, both ends included.
Grid parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(p);
  if (parts.size() != 3) fail(ErrorKind::ConfigError, "grid must be lo:hi:n, got '" + text + "'");
  Grid g{parse_double(parts[0], "grid lo"), parse_double(parts[1], "grid hi"), 0};
  const double n = parse_double(parts[2], "grid n");
  if (!(n >= 1.0) || n != std::floor(n)) fail(ErrorKind::ConfigError, "grid n must be a positive integer");
  g.n = static_cast<std::size_t>(n);
  if (g.n > 1 && !(g.hi > g.lo)) fail(ErrorKind::ConfigError, "grid needs hi > lo");
  return g;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string p;
  while (std::getline(ss, p, ',')) out.push_back(parse_double(p, what));
  if (out.empty()) fail(ErrorKind::ConfigError, what + " list is empty");
  return out;
}

struct LoadedSpec {
  BernsteinSpec spec;
  InversionConfig inversion;
  json doc;
};

LoadedSpec load_spec(const fs::path& path) {
  json doc = load_config(path);
  LoadedSpec out{spec_from_json(doc, path.parent_path()), inversion_from_json(doc), {}};
  out.doc = {{"spec", spec_to_json(out.spec)}, {"inversion", inversion_to_json(out.inversion)}};
  return out;
}

void finish(Manifest& m, const fs::path& out) {
  m.outputs.insert(m.outputs.begin(), out);
  m.write(manifest_path(out));
}

json grid_function_json(const GridFunction& u) {
  return {{"origin", u.origin()}, {"step", u.step()}, {"values", u.values()}};
}

// ---------------------------------------------------------------------------

Command validate_command(CLI::App& app) {
  auto spec_path = std::make_shared<std::string>();
  auto* sub = app.add_subcommand("validate", "Check a Bernstein spec; prints the violations");
  sub->add_option("--spec", *spec_path, "Spec file (TOML or JSON)")->required();
  return {sub, [=] {
            const json doc = load_config(*spec_path);
            const BernsteinSpec spec = spec_from_json(doc, fs::path(*spec_path).parent_path());
            json names = json::array();
            for (auto v : validate(spec)) names.push_back(std::string(to_string(v)));
            std::cout << names.dump() << '\n';
            return names.empty() ? 0 : 1;
          }};
}

Command density_command(CLI::App& app) {
  struct Opts {
    std::string spec, kind, grid, out, path = "inversion";
    double t = kNaN;
    bool no_cross_check = false;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("density", "Evaluate mu_t, l_t, Pr{L(t) > s} or the renewal function");
  sub->add_option("--spec", o->spec)->required();
  sub->add_option("--kind", o->kind, "mu | l | cdf | renewal | renewal-density")
      ->required()
      ->check(CLI::IsMember({"mu", "l", "cdf", "renewal", "renewal-density"}));
  sub->add_option("--t", o->t, "Time (mu, l, cdf)");
  sub->add_option("--grid", o->grid, "lo:hi:n evaluation points")->required();
  sub->add_option("--path", o->path, "l only: inversion | convolution")
      ->check(CLI::IsMember({"inversion", "convolution"}));
  sub->add_flag("--no-cross-check", o->no_cross_check, "Skip the second inversion algorithm");
  sub->add_option("--out", o->out)->required();
  return {sub, [=] {
            LoadedSpec ls = load_spec(o->spec);
            if (o->no_cross_check) ls.inversion.cross_check = false;
            const Grid g = parse_grid(o->grid);
            const bool timed = o->kind == "mu" || o->kind == "l" || o->kind == "cdf";
            if (timed && !(o->t > 0.0)) fail(ErrorKind::ConfigError, "--t > 0 is required for this kind");
            DensityOptions dens;
            dens.inversion = ls.inversion;
            dens.path = o->path == "convolution" ? DensityPath::Convolution : DensityPath::Inversion;

            std::vector<double> values(g.n);
            parallel_for(g.n, [&](std::size_t i) {
              const double x = g.at(i);
              if (o->kind == "mu") {
                values[i] = subordinator_density(ls.spec, o->t, x, ls.inversion);
              } else if (o->kind == "l") {
                values[i] = inverse_density(ls.spec, o->t, x, dens);
              } else if (o->kind == "cdf") {
                values[i] = inverse_tail_cdf(ls.spec, o->t, x, ls.inversion);
              } else {
                const auto mode = o->kind == "renewal" ? RenewalMode::Function : RenewalMode::Density;
                if (x > 0.0) {
                  values[i] = renewal(ls.spec, x, mode, ls.inversion);
                } else {
                  values[i] = mode == RenewalMode::Function ? 0.0 : kNaN;
                }
              }
            });
            const std::string xname = (o->kind == "l" || o->kind == "cdf") ? "s" : "x";
            const std::string vname = o->kind == "cdf" ? "tail_cdf" : o->kind;
            CsvTable table{{xname, vname}, {}};
            for (std::size_t i = 0; i < g.n; ++i) table.rows.push_back({g.at(i), values[i]});
            write_csv(o->out, table);

            Manifest m;
            m.subcommand = "density";
            m.config = ls.doc;
            m.config["kind"] = o->kind;
            m.config["t"] = timed ? json(o->t) : json(nullptr);
            m.config["grid"] = g.to_json();
            m.config["path"] = o->path;
            finish(m, o->out);
            return 0;
          }};
}

Command derivative_command(CLI::App& app) {
  struct Opts {
    std::string spec, input, kind, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("derivative", "Convolution-type derivative of a sampled function");
  sub->add_option("--spec", o->spec)->required();
  sub->add_option("--input", o->input, "CSV x,u on a uniform grid")->required();
  sub->add_option("--kind", o->kind, "caputo | rl | weyl+ | weyl-")
      ->required()
      ->check(CLI::IsMember({"caputo", "rl", "weyl+", "weyl-"}));
  sub->add_option("--out", o->out)->required();
  return {sub, [=] {
            const LoadedSpec ls = load_spec(o->spec);
            const GridFunction u = read_grid_function(o->input);
            GridFunction d;
            if (o->kind == "caputo") {
              d = caputo_derivative(ls.spec, u);
            } else if (o->kind == "rl") {
              d = rl_derivative(ls.spec, u);
            } else {
              d = weyl_derivative(ls.spec, u,
                                  o->kind == "weyl+" ? WeylDirection::Plus : WeylDirection::Minus);
            }
            const bool spatial = o->kind.rfind("weyl", 0) == 0;
            write_csv(o->out, to_table(d, spatial ? "x" : "t", "value"));
            Manifest m;
            m.subcommand = "derivative";
            m.config = ls.doc;
            m.config["kind"] = o->kind;
            m.inputs["u"] = grid_function_json(u);
            m.inputs["u_sha256"] = sha256_file(o->input);
            finish(m, o->out);
            return 0;
          }};
}

Command simulate_command(CLI::App& app) {
  struct Opts {
    std::string spec, times = "1", functional = "mean", process = "hitting", grid = "0:4:41", out;
    double gamma = 1e-4, lambda = 1.0, horizon = kNaN;
    std::size_t paths = 10000;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("simulate", "Monte Carlo CTRW estimates for L(t) or sigma(t)");
  sub->add_option("--spec", o->spec)->required();
  sub->add_option("--gamma", o->gamma, "Jump truncation level");
  sub->add_option("--paths", o->paths)->check(CLI::PositiveNumber);
  sub->add_option("--seed", o->seed);
  sub->add_option("--t", o->times, "Comma-separated times");
  sub->add_option("--process", o->process, "hitting | subordinator")
      ->check(CLI::IsMember({"hitting", "subordinator"}));
  sub->add_option("--functional", o->functional, "mean | laplace | cdf | survival")
      ->check(CLI::IsMember({"mean", "laplace", "cdf", "survival"}));
  sub->add_option("--lambda", o->lambda, "Laplace variable");
  sub->add_option("--grid", o->grid, "lo:hi:n points for cdf");
  sub->add_option("--horizon", o->horizon, "Operational time simulated (default: max t)");
  sub->add_option("--out", o->out)->required();
  return {sub, [=] {
            const LoadedSpec ls = load_spec(o->spec);
            const auto times = parse_list(o->times, "time");
            CtrwConfig cfg{ls.spec, o->gamma, 0.0, o->paths, o->seed};
            cfg.horizon = std::isnan(o->horizon) ? *std::max_element(times.begin(), times.end())
                                                 : o->horizon;
            if (!(cfg.horizon > 0.0)) cfg.horizon = 1.0;
            Functional fn;
            if (o->functional == "laplace") {
              fn = Functional::laplace(o->lambda);
            } else if (o->functional == "cdf") {
              const Grid g = parse_grid(o->grid);
              std::vector<double> pts(g.n);
              for (std::size_t i = 0; i < g.n; ++i) pts[i] = g.at(i);
              fn = Functional::cdf(pts);
            } else if (o->functional == "survival") {
              fn = Functional::survival();
            }
            const Process process = o->process == "hitting" ? Process::Hitting : Process::Subordinator;
            const auto rows = ensemble_stats(cfg, process, times, fn);
            CsvTable table{{"t", "x", "estimate", "std_error"}, {}};
            for (const auto& r : rows) table.rows.push_back({r.t, r.x, r.estimate, r.std_error});
            write_csv(o->out, table);

            Manifest m;
            m.subcommand = "simulate";
            m.config = ls.doc;
            m.config["gamma"] = cfg.gamma;
            m.config["horizon"] = cfg.horizon;
            m.config["paths"] = cfg.n_paths;
            m.config["seed"] = cfg.seed;
            m.config["times"] = times;
            m.config["process"] = o->process;
            m.config["functional"] = o->functional;
            m.config["lambda"] = o->lambda;
            m.config["grid"] = o->grid;
            finish(m, o->out);
            return 0;
          }};
}

Command solve_command(CLI::App& app) {
  struct Opts {
    std::string spec, semigroup, u0, tgrid, out, residuals;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("solve", "Solve the generalized Cauchy problem by time change");
  sub->add_option("--spec", o->spec)->required();
  sub->add_option("--semigroup", o->semigroup)->required();
  sub->add_option("--u0", o->u0, "CSV whose last column is the initial state")->required();
  sub->add_option("--tgrid", o->tgrid, "0:T:n time grid")->required();
  sub->add_option("--out", o->out)->required();
  sub->add_option("--residuals", o->residuals);
  return {sub, [=] {
            const LoadedSpec ls = load_spec(o->spec);
            const SemigroupSpec sg = semigroup_from_json(load_config(o->semigroup));
            const CsvTable u0_table = read_csv(o->u0);
            StateVector u0(static_cast<Eigen::Index>(u0_table.rows.size()));
            for (std::size_t i = 0; i < u0_table.rows.size(); ++i) {
              if (u0_table.rows[i].empty()) fail(ErrorKind::ConfigError, "empty row in u0");
              u0[static_cast<Eigen::Index>(i)] = u0_table.rows[i].back();
            }
            if (static_cast<std::size_t>(u0.size()) != state_size(sg)) {
              fail(ErrorKind::ConfigError, "u0 has " + std::to_string(u0.size()) +
                                               " entries; the semigroup state has " +
                                               std::to_string(state_size(sg)));
            }
            const Grid g = parse_grid(o->tgrid);
            if (g.lo != 0.0) fail(ErrorKind::ConfigError, "the time grid must start at 0");
            const CauchySolution sol = solve_cauchy(sg, ls.spec, u0, g.hi, g.n);

            CsvTable traj{{"t"}, {}};
            for (Eigen::Index c = 0; c < u0.size(); ++c) traj.header.push_back("q" + std::to_string(c));
            for (std::size_t k = 0; k < sol.times.size(); ++k) {
              std::vector<double> row{sol.times[k]};
              for (Eigen::Index c = 0; c < u0.size(); ++c) row.push_back(sol.trajectory[k][c]);
              traj.rows.push_back(std::move(row));
            }
            write_csv(o->out, traj);

            Manifest m;
            m.subcommand = "solve";
            m.config = ls.doc;
            m.config["semigroup"] = semigroup_to_json(sg);
            m.config["tgrid"] = g.to_json();
            m.inputs["u0"] = std::vector<double>(u0.data(), u0.data() + u0.size());
            json refinement = json::array();
            for (const auto& r : sol.refinement) {
              refinement.push_back({{"step", r.step}, {"max_residual", r.residual}});
              std::cout << "step " << format_number(r.step) << "  max residual "
                        << format_number(r.residual) << '\n';
            }
            m.report = {{"max_residual", sol.max_residual}, {"refinement", refinement}};
            if (!o->residuals.empty()) {
              CsvTable res{{"t", "residual"}, {}};
              for (std::size_t k = 0; k < sol.times.size(); ++k) {
                res.rows.push_back({sol.times[k], sol.residuals[k]});
              }
              write_csv(o->residuals, res);
              m.outputs.push_back(o->residuals);
            }
            finish(m, o->out);
            return 0;
          }};
}

Command moments_command(CLI::App& app) {
  struct Opts {
    std::string spec, times, orders, out;
    double lag = kNaN;
    std::size_t steps = 512;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("moments", "Mixed moments and covariance of L");
  sub->add_option("--spec", o->spec)->required();
  sub->add_option("--times", o->times, "Comma-separated times")->required();
  sub->add_option("--orders", o->orders, "Comma-separated orders");
  sub->add_option("--lag", o->lag, "Covariance of L(t) and L(t + lag) for a single time");
  sub->add_option("--steps", o->steps, "Grid steps across the smallest time")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", o->out)->required();
  return {sub, [=] {
            const LoadedSpec ls = load_spec(o->spec);
            const auto times = parse_list(o->times, "time");
            MomentOptions mo;
            mo.steps = o->steps;
            Manifest m;
            m.subcommand = "moments";
            m.config = ls.doc;
            m.config["times"] = times;
            m.config["steps"] = o->steps;
            if (!std::isnan(o->lag)) {
              if (times.size() != 1) fail(ErrorKind::ConfigError, "--lag needs exactly one time");
              const Covariance c = covariance(ls.spec, times[0], o->lag, mo);
              write_csv(o->out, CsvTable{{"t", "s", "second_moment", "covariance"},
                                         {{times[0], o->lag, c.second_moment, c.covariance}}});
              m.config["lag"] = o->lag;
            } else {
              if (o->orders.empty()) fail(ErrorKind::ConfigError, "--orders is required");
              std::vector<int> orders;
              for (double v : parse_list(o->orders, "order")) {
                if (v != std::floor(v)) fail(ErrorKind::ConfigError, "orders must be integers");
                orders.push_back(static_cast<int>(v));
              }
              const double value = mixed_moment(ls.spec, times, orders, mo);
              CsvTable table;
              std::vector<double> row;
              for (std::size_t i = 0; i < times.size(); ++i) {
                table.header.push_back("t" + std::to_string(i + 1));
                row.push_back(times[i]);
              }
              for (std::size_t i = 0; i < orders.size(); ++i) {
                table.header.push_back("m" + std::to_string(i + 1));
                row.push_back(orders[i]);
              }
              table.header.push_back("moment");
              row.push_back(value);
              table.rows.push_back(row);
              write_csv(o->out, table);
              m.config["orders"] = orders;
            }
            finish(m, o->out);
            return 0;
          }};
}

Command check_command(CLI::App& app) {
  struct Opts {
    std::string suite, spec, horizons = "10,100,1000", xs = "0.01,0.1,1,10,100",
                                 pairs = "0.5:0.5,1:1,1:2,2:3,0.1:5", out;
    double t = 1.0, w = 1.0;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("check", "Renewal-theoretic diagnostics; exit 1 on failure");
  sub->add_option("--suite", o->suite, "longrange | bounds | subadditivity")
      ->required()
      ->check(CLI::IsMember({"longrange", "bounds", "subadditivity"}));
  sub->add_option("--spec", o->spec)->required();
  sub->add_option("--t", o->t);
  sub->add_option("--w", o->w);
  sub->add_option("--horizons", o->horizons, "longrange: increasing S values");
  sub->add_option("--xs", o->xs, "bounds: evaluation points");
  sub->add_option("--pairs", o->pairs, "subadditivity: x:y,...");
  sub->add_option("--out", o->out, "JSON report");
  return {sub, [=] {
            const LoadedSpec ls = load_spec(o->spec);
            json report;
            bool ok = true;
            auto line = [&](bool pass, const std::string& name, const std::string& detail) {
              std::cout << (pass ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
              ok = ok && pass;
            };
            if (o->suite == "longrange") {
              const auto hs = parse_list(o->horizons, "horizon");
              const auto rep = long_range_diagnostic(ls.spec, o->t, o->w, hs);
              for (std::size_t i = 0; i < hs.size(); ++i) {
                std::cout << "S=" << format_number(hs[i]) << "  I=" << format_number(rep.integrals[i])
                          << "  integrand=" << format_number(rep.integrand[i]) << '\n';
              }
              line(rep.strictly_increasing, "strictly_increasing", "I(S) increases with S");
              line(rep.increments_non_decreasing, "increments_non_decreasing", "");
              line(rep.slope_holds, "no_flattening", "last slope >= 0.9 x first slope");
              report = {{"horizons", rep.horizons}, {"integrals", rep.integrals},
                        {"integrand", rep.integrand}, {"passed", rep.passed}};
            } else if (o->suite == "bounds") {
              const auto xs = parse_list(o->xs, "x");
              const auto r = renewal_bound_check(ls.spec, xs, ls.inversion);
              line(r.passed, "ratio_bounded",
                   "r(x) in [" + format_number(r.min_ratio) + ", " + format_number(r.max_ratio) + "]");
              report = {{"xs", xs}, {"min_ratio", r.min_ratio}, {"max_ratio", r.max_ratio},
                        {"passed", r.passed}};
            } else {
              std::vector<std::pair<double, double>> pairs;
              std::stringstream ss(o->pairs);
              std::string item;
              while (std::getline(ss, item, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) fail(ErrorKind::ConfigError, "pairs must be x:y");
                pairs.emplace_back(parse_double(item.substr(0, colon), "pair"),
                                   parse_double(item.substr(colon + 1), "pair"));
              }
              const auto bad = subadditivity_check(ls.spec, pairs, ls.inversion);
              line(bad.empty(), "subadditive", std::to_string(bad.size()) + " violating pairs");
              report = {{"pairs", pairs}, {"violations", bad}, {"passed", bad.empty()}};
            }
            if (!o->out.empty()) {
              std::ofstream os(o->out, std::ios::binary);
              os << report.dump(2) << '\n';
              os.close();
              Manifest m;
              m.subcommand = "check";
              m.config = ls.doc;
              m.config["suite"] = o->suite;
              m.report = report;
              finish(m, o->out);
            }
            return ok ? 0 : 1;
          }};
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  return {validate_command(app), density_command(app), derivative_command(app),
          simulate_command(app), solve_command(app),   moments_command(app),
          check_command(app)};
}

}  // namespace subflow::cli

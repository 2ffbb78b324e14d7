#include "subflow/ctrw.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "subflow/error.hpp"
#include "subflow/parallel.hpp"

namespace subflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxJumps = 100'000'000;

// Jumps of one path in order of their epochs, drawn on demand. Epochs are
// E_k / nu(gamma) with E_k the arrival times of a unit-rate Poisson stream.
class PathStream {
 public:
  PathStream(const JumpSampler& sampler, std::uint64_t seed, std::size_t index)
      : sampler_(sampler), clock_(seed, index, 0), marks_(seed, index, 1) {}

  bool active() const { return sampler_.rate() > 0.0; }

  std::pair<double, JumpSize> next() {
    arrival_ += clock_.exponential();
    return {arrival_ / sampler_.rate(), sampler_(marks_)};
  }

 private:
  const JumpSampler& sampler_;
  Rng clock_;
  Rng marks_;
  double arrival_ = 0.0;
};

double neumaier_sum(const std::vector<double>& v) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : v) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

void CtrwConfig::validate() const {
  require_valid(spec);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail(ErrorKind::ConfigError, "gamma must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    fail(ErrorKind::ConfigError, "horizon must be > 0");
  }
  if (n_paths < 1) fail(ErrorKind::ConfigError, "n_paths must be >= 1");
}

JumpSampler::JumpSampler(const BernsteinSpec& spec, double gamma)
    : spec_(spec), gamma_(gamma), rate_(eval_tail(spec, gamma)) {}

JumpSize JumpSampler::operator()(Rng& rng) const {
  const auto* tempered = std::get_if<TemperedStable>(&spec_.family);
  if (tempered == nullptr) return invert(rng.uniform());
  if (!(rate_ > 0.0)) fail(ErrorKind::DegenerateLaw, "nu(gamma) = 0: no jumps above gamma");
  if (rng.uniform() * rate_ <= spec_.a) return JumpSize::inf();
  // Density ratio e^{-theta y} against the truncated stable proposal
  // Pr{Y > y} = (y / gamma)^{-alpha}.
  const double inv_alpha = 1.0 / tempered->alpha;
  while (true) {
    const double y = gamma_ * std::pow(rng.uniform(), -inv_alpha);
    if (rng.uniform() <= std::exp(-tempered->theta * (y - gamma_))) return {y, false};
  }
}

JumpSize JumpSampler::invert(double u) const {
  if (!(rate_ > 0.0)) fail(ErrorKind::DegenerateLaw, "nu(gamma) = 0: no jumps above gamma");
  const double target = u * rate_;
  if (target <= spec_.a) return JumpSize::inf();
  if (const auto* s = std::get_if<Stable>(&spec_.family)) {
    const double y = std::pow((target - spec_.a) * std::tgamma(1.0 - s->alpha), -1.0 / s->alpha);
    return {std::max(y, gamma_), false};
  }
  // nu is non-increasing; find y with nu(y) = target, y >= gamma.
  auto g = [&](double y) { return eval_tail(spec_, y) - target; };
  double lo = gamma_;
  double hi = 2.0 * gamma_;
  while (g(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return JumpSize::inf();
  }
  if (g(lo) <= 0.0) return {lo, false};
  boost::uintmax_t iterations = 200;
  const auto [a, b] =
      boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(40),
                                        iterations);
  return {0.5 * (a + b), false};
}

JumpSize sample_jump(const BernsteinSpec& spec, double gamma, Rng& rng) {
  return JumpSampler(spec, gamma)(rng);
}

double SubordinatorPath::lifetime() const {
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j].infinite) return epochs[j];
  }
  return kInf;
}

ExtendedValue SubordinatorPath::value(double s) const {
  if (s < 0.0 || s > horizon) fail(ErrorKind::DomainError, "path evaluated outside [0, horizon]");
  double v = drift * s;
  for (std::size_t j = 0; j < epochs.size() && epochs[j] <= s; ++j) {
    if (sizes[j].infinite) return ExtendedValue::inf();
    v += sizes[j].value;
  }
  return {v, false};
}

SubordinatorPath simulate_path(const CtrwConfig& cfg, std::size_t index) {
  cfg.validate();
  SubordinatorPath path;
  path.drift = cfg.spec.b;
  path.horizon = cfg.horizon;
  const JumpSampler sampler(cfg.spec, cfg.gamma);
  PathStream stream(sampler, cfg.seed, index);
  if (!stream.active()) return path;
  while (true) {
    auto [epoch, size] = stream.next();
    if (epoch > cfg.horizon) break;
    path.epochs.push_back(epoch);
    path.sizes.push_back(size);
  }
  return path;
}

double hitting_time(const SubordinatorPath& path, double t) {
  if (!(t >= 0.0)) fail(ErrorKind::DomainError, "hitting level must be >= 0");
  const double b = path.drift;
  double jumps = 0.0;
  for (std::size_t j = 0; j < path.epochs.size(); ++j) {
    const double tau = path.epochs[j];
    if (b > 0.0 && b * tau + jumps > t) return (t - jumps) / b;
    if (path.sizes[j].infinite || b * tau + jumps + path.sizes[j].value > t) return tau;
    jumps += path.sizes[j].value;
  }
  if (b > 0.0 && (t - jumps) / b <= path.horizon) return (t - jumps) / b;
  std::ostringstream os;
  os << "level " << t << " not crossed on [0, " << path.horizon << "]; enlarge the horizon";
  fail(ErrorKind::NoCrossing, os.str());
}

double simulate_hitting_time(const CtrwConfig& cfg, std::size_t index, double t) {
  const double b = cfg.spec.b;
  const JumpSampler sampler(cfg.spec, cfg.gamma);
  PathStream stream(sampler, cfg.seed, index);
  if (!stream.active()) {
    if (b > 0.0) return t / b;
    fail(ErrorKind::NoCrossing, "no drift and no jumps above gamma");
  }
  double jumps = 0.0;
  for (std::size_t k = 0; k < kMaxJumps; ++k) {
    auto [tau, size] = stream.next();
    if (b > 0.0 && b * tau + jumps > t) return (t - jumps) / b;
    if (size.infinite || b * tau + jumps + size.value > t) return tau;
    jumps += size.value;
  }
  fail(ErrorKind::NoCrossing, "level not crossed within the jump budget");
}

std::vector<std::vector<double>> simulate_samples(const CtrwConfig& cfg, Process process,
                                                  const std::vector<double>& t_list) {
  cfg.validate();
  for (double t : t_list) {
    if (!(t >= 0.0)) fail(ErrorKind::DomainError, "times must be >= 0");
  }
  std::vector<std::vector<double>> out(t_list.size(), std::vector<double>(cfg.n_paths));
  if (t_list.empty()) return out;
  CtrwConfig path_cfg = cfg;
  path_cfg.horizon = std::max(cfg.horizon, *std::max_element(t_list.begin(), t_list.end()));
  parallel_for(
      cfg.n_paths,
      [&](std::size_t p) {
        if (process == Process::Hitting) {
          for (std::size_t i = 0; i < t_list.size(); ++i) {
            out[i][p] = simulate_hitting_time(cfg, p, t_list[i]);
          }
        } else {
          const SubordinatorPath path = simulate_path(path_cfg, p);
          for (std::size_t i = 0; i < t_list.size(); ++i) {
            out[i][p] = path.value(t_list[i]).as_double();
          }
        }
      },
      64);
  return out;
}

EnsembleRow mean_with_error(const std::vector<double>& values) {
  EnsembleRow row;
  const double n = static_cast<double>(values.size());
  if (values.empty()) return row;
  row.estimate = neumaier_sum(values) / n;
  if (!std::isfinite(row.estimate)) {
    row.std_error = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  if (values.size() < 2) return row;
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(), [&](double x) {
    const double d = x - row.estimate;
    return d * d;
  });
  row.std_error = std::sqrt(neumaier_sum(sq) / (n - 1.0) / n);
  return row;
}

std::vector<EnsembleRow> ensemble_stats(const CtrwConfig& cfg, Process process,
                                        const std::vector<double>& t_list,
                                        const Functional& functional) {
  const auto samples = simulate_samples(cfg, process, t_list);
  std::vector<EnsembleRow> rows;
  std::vector<double> col(cfg.n_paths);
  auto emit = [&](double t, double x, auto&& map) {
    for (std::size_t p = 0; p < col.size(); ++p) col[p] = map(p);
    EnsembleRow row = mean_with_error(col);
    row.t = t;
    row.x = x;
    rows.push_back(row);
  };
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    const auto& s = samples[i];
    const double t = t_list[i];
    switch (functional.kind) {
      case Functional::Kind::Mean:
        emit(t, 0.0, [&](std::size_t p) { return s[p]; });
        break;
      case Functional::Kind::Laplace: {
        const double l = functional.lambda;
        emit(t, l, [&](std::size_t p) { return std::isinf(s[p]) ? 0.0 : std::exp(-l * s[p]); });
        break;
      }
      case Functional::Kind::Cdf:
        for (double x : functional.grid) {
          emit(t, x, [&](std::size_t p) { return s[p] <= x ? 1.0 : 0.0; });
        }
        break;
      case Functional::Kind::Survival:
        emit(t, 0.0, [&](std::size_t p) { return std::isinf(s[p]) ? 0.0 : 1.0; });
        break;
    }
  }
  return rows;
}

}  // namespace subflow

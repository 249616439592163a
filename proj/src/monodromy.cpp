#include "willis/monodromy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "willis/errors.hpp"

namespace willis {

namespace {

constexpr double kPi = std::numbers::pi;

double period_of(const std::vector<ScalarLayer>& layers) {
  double t = 0.0;
  for (const auto& l : layers) t += l.thickness;
  return t;
}

}  // namespace

std::vector<ScalarLayer> layers_of(const ScalarProfile& profile) {
  const auto* stack = std::get_if<LayerStack>(&profile.geometry());
  if (!stack || profile.dimension() != 1)
    throw UnsupportedError("monodromy needs a 1D layered profile");
  if (!profile.classical()) throw UnsupportedError("monodromy needs classical layers (S = 0)");
  std::vector<ScalarLayer> out;
  for (const auto& l : stack->layers) {
    const auto& p = profile.phases()[l.phase];
    out.push_back({p.mu(0, 0).real(), p.rho, l.thickness});
  }
  return out;
}

Eigen::Matrix2cd layer_propagator(double mu, double rho, double h, double omega) {
  Eigen::Matrix2cd p;
  if (omega == 0.0) {
    p << 1.0, h / mu, 0.0, 1.0;
    return p;
  }
  const double q = omega * std::sqrt(rho / mu);
  const double c = std::cos(q * h);
  const double s = std::sin(q * h);
  p << c, s / (mu * q), -mu * q * s, c;
  return p;
}

Monodromy monodromy_matrix(const ScalarProfile& profile, double omega, double y0) {
  const auto layers = layers_of(profile);
  const double period = period_of(layers);
  if (!(y0 >= 0.0) || !(y0 < period)) throw InvalidArgument("y0 must lie in [0, T)");

  // Rotate the cell to start at y0, splitting the layer that contains it.
  std::vector<ScalarLayer> head;
  std::vector<ScalarLayer> tail;
  double x = 0.0;
  for (const auto& l : layers) {
    const double end = x + l.thickness;
    if (end <= y0) {
      tail.push_back(l);
    } else if (x >= y0) {
      head.push_back(l);
    } else {
      head.push_back({l.mu, l.rho, end - y0});
      tail.push_back({l.mu, l.rho, y0 - x});
    }
    x = end;
  }
  Monodromy m;
  m.omega = omega;
  m.y0 = y0;
  m.ordering = head;
  m.ordering.insert(m.ordering.end(), tail.begin(), tail.end());
  m.M = Eigen::Matrix2cd::Identity();
  for (const auto& l : m.ordering) m.M = layer_propagator(l.mu, l.rho, l.thickness, omega) * m.M;
  return m;
}

double mm_dispersion(const ScalarProfile& profile, double omega) {
  return 0.5 * monodromy_matrix(profile, omega, 0.0).M.trace().real();
}

MMEffectiveParams mm_effective_params(const ScalarProfile& profile, double omega, double k, double y0,
                                      int log_branch) {
  if (!(omega > 0.0)) throw InvalidArgument("MM parameters need omega > 0");
  const auto mono = monodromy_matrix(profile, omega, y0);
  const double period = period_of(mono.ordering);
  const Eigen::Matrix2cd& M = mono.M;
  const double c = 0.5 * M.trace().real();
  // tr M / 2 carries rounding of order 1e-15, so a root of cos(kT) = +-1
  // lands within ~1e-13 of the edge and must not be read as a gap.
  constexpr double edge = 1e-12;
  if (std::abs(c) > 1.0 + edge) throw NoRealWavenumber("omega lies in a band gap (|tr M / 2| > 1)");
  if (1.0 - std::abs(c) < edge) throw NonDiagonalizable("monodromy matrix is defective at a band edge");
  const double theta = std::acos(c);
  const cplx lp = std::polar(1.0, theta);
  const cplx lm = std::conj(lp);

  // Requested exponent: first-zone k plus the chosen sheet.
  const double folded = k - 2.0 * kPi / period * std::round(k * period / (2.0 * kPi));
  const double target = (folded + 2.0 * kPi * log_branch / period) * period;
  const cplx bloch = std::polar(1.0, target);
  cplx log_p;
  cplx log_m;
  double exponent = 0.0;
  if (std::abs(bloch - lp) <= std::abs(bloch - lm)) {
    const double m = std::round((target - theta) / (2.0 * kPi));
    log_p = cplx(0.0, theta + 2.0 * kPi * m);
    log_m = -log_p;
    exponent = log_p.imag();
  } else {
    const double m = std::round((target + theta) / (2.0 * kPi));
    log_m = cplx(0.0, -theta + 2.0 * kPi * m);
    log_p = -log_m;
    exponent = log_m.imag();
  }
  const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd log_M = (log_p * (M - lm * I) - log_m * (M - lp * I)) / (lp - lm);

  MMEffectiveParams out;
  out.generator = log_M / period;
  const Eigen::Matrix2cd& B = out.generator;
  const cplx i(0.0, 1.0);
  out.mu = 1.0 / B(0, 1);
  out.s = out.mu * B(0, 0) / (i * omega);
  out.rho = -B(1, 0) / (omega * omega) - std::norm(out.s) / out.mu;
  out.residual = std::abs(B(1, 1) - i * omega * std::conj(out.s) / out.mu);
  out.log_branch = log_branch;
  out.y0 = y0;
  out.omega = omega;
  out.k = k;
  out.kappa = exponent / period;
  return out;
}

double mm_branch_frequency(const ScalarProfile& profile, double k, int branch) {
  if (branch < 0) throw InvalidArgument("branch index must be >= 0");
  const auto layers = layers_of(profile);
  const double period = period_of(layers);
  const double target = std::cos(k * period);
  auto f = [&](double w) { return mm_dispersion(profile, w) - target; };

  // Keep the phase advance per layer below 0.02 rad between scan points.
  double slowness = 0.0;
  for (const auto& l : layers) slowness = std::max(slowness, l.thickness * std::sqrt(l.rho / l.mu));
  const double step = 0.02 / slowness;

  int found = 0;
  double a = 0.0;
  double fa = f(a);
  // At k = 0 (mod 2 pi / T) the static mode is a tangential root at omega = 0.
  if (std::abs(fa) < 1e-14) {
    if (branch == 0) return 0.0;
    ++found;
    a = 0.5 * step;
    fa = f(a);
  }
  double before = a;
  double f_before = fa;
  for (int iter = 0; iter < 50000000; ++iter) {
    const double b = a + step;
    const double fb = f(b);
    if (fb == 0.0 || (fa < 0.0) != (fb < 0.0)) {
      if (found == branch) {
        if (fb == 0.0) return b;
        boost::uintmax_t max_iter = 200;
        const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                                         boost::math::tools::eps_tolerance<double>(52),
                                                         max_iter);
        return 0.5 * (r.first + r.second);
      }
      ++found;
    } else if (before < a && (f_before < 0.0) == (fa < 0.0) && std::abs(fa) <= std::abs(f_before) &&
               std::abs(fa) <= std::abs(fb)) {
      // A closed gap touches zero without a sign change: a double root.
      const auto m = boost::math::tools::brent_find_minima(
          [&](double w) { return std::abs(f(w)); }, before, b, std::numeric_limits<double>::digits);
      if (m.second < 1e-10) {
        if (found == branch || found + 1 == branch) return m.first;
        found += 2;
      }
    }
    before = a;
    f_before = fa;
    a = b;
    fa = fb;
  }
  throw Error("branch frequency search did not terminate");
}

}  // namespace willis

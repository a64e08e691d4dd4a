#include "cara/mirror.hpp"

#include <cmath>
#include <cstdlib>

#include "cara/errors.hpp"
#include "cara/matrix.hpp"

namespace cara::mirror {

double lq_norm(std::span<const double> v, double p) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double lq_omega(std::span<const double> y, double q) {
  if (!(q > 1.0 && q <= 2.0)) throw input_error("lq_omega: q must lie in (1, 2]");
  const double n = lq_norm(y, q);
  if (n > 1.0 + 1e-12) throw input_error("lq_omega: point outside the unit l_q ball");
  return 0.5 * n * n;
}

std::vector<double> lq_omega_gradient(std::span<const double> y, double q) {
  if (!(q > 1.0 && q <= 2.0)) throw input_error("lq_omega_gradient: q must lie in (1, 2]");
  std::vector<double> g(y.size(), 0.0);
  const double n = lq_norm(y, q);
  if (n == 0.0) return g;
  const double scale = std::pow(n, 2.0 - q);
  for (size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) continue;
    g[i] = scale * std::copysign(std::pow(std::abs(y[i]), q - 1.0), y[i]);
  }
  return g;
}

double lq_omega_star(std::span<const double> z, double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw input_error("lq_omega_star: p must be finite, >= 2");
  for (double x : z)
    if (!std::isfinite(x)) throw numeric_error("lq_omega_star: non-finite input");
  const double n = lq_norm(z, p);
  return n <= 1.0 ? 0.5 * n * n : n - 0.5;
}

std::vector<double> lq_dual_gradient(std::span<const double> z, double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw input_error("lq_dual_gradient: p must be finite, >= 2");
  std::vector<double> out(z.size(), 0.0);
  const double n = lq_norm(z, p);
  if (n == 0.0) return out;  // subdifferential selection at z = 0
  const double clip = std::min(1.0, n);
  const double logn = std::log(n);
  for (size_t i = 0; i < z.size(); ++i) {
    const double a = std::abs(z[i]);
    if (a == 0.0) continue;
    // ratio (|z_i|/|z|_p)^{p-1}; exp/log form for large p avoids overflow
    // in the separately powered numerator and denominator.
    const double r = p > 8.0 ? std::exp((p - 1.0) * (std::log(a) - logn))
                             : std::pow(a / n, p - 1.0);
    out[i] = std::copysign(r, z[i]) * clip;
  }
  return out;
}

MirrorMapSpec lq_mirror_map(int dim, double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw input_error("lq_mirror_map: p must be finite, >= 2");
  MirrorMapSpec map;
  map.dim = dim;
  map.sigma = p - 1.0;  // omega is (q-1)-strongly convex, q = p/(p-1)
  map.diameter = 0.5;
  map.dual_gradient = [p](const std::vector<double>& z) { return lq_dual_gradient(z, p); };
  map.grad_norm = [p](std::span<const double> g) { return lq_norm(g, p); };
  return map;
}

double bregman(const std::function<double(std::span<const double>)>& f,
               const std::function<std::vector<double>(std::span<const double>)>& grad,
               std::span<const double> y, std::span<const double> x) {
  const std::vector<double> gx = grad(x);
  double lin = 0.0;
  for (size_t i = 0; i < x.size(); ++i) lin += gx[i] * (y[i] - x[i]);
  return f(y) - f(x) - lin;
}

DescentTrace mirror_descent(const MirrorMapSpec& map, const SubgradFn& subgrad, double rho,
                            long iterations, const StepCallback& on_step) {
  if (iterations < 1) throw input_error("mirror_descent: iteration count must be >= 1");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw input_error("mirror_descent: rho must be positive");
  if (!(map.sigma > 0.0) || !std::isfinite(map.sigma) || !(map.diameter > 0.0) ||
      !std::isfinite(map.diameter) || map.dim < 1)
    throw input_error("mirror_descent: map constants must be positive and finite");

  const double eta =
      std::sqrt(2.0 * map.diameter / (static_cast<double>(iterations) * map.sigma * rho * rho));

  std::vector<double> z(map.dim, 0.0);
  std::vector<double> grad_sum(map.dim, 0.0);

  DescentTrace trace;
  trace.step_size = eta;
  trace.tags.reserve(static_cast<size_t>(iterations));

  long t = 0;
  for (; t < iterations; ++t) {
    const std::vector<double> y = map.dual_gradient(z);
    Subgrad sg = subgrad(y);
    if (static_cast<int>(sg.g.size()) != map.dim)
      throw contract_error("mirror_descent: subgradient dimension mismatch");
    for (double gi : sg.g)
      if (!std::isfinite(gi)) throw numeric_error("mirror_descent: non-finite subgradient");
    const double gn = map.grad_norm ? map.grad_norm(sg.g) : lq_norm(sg.g, 2.0);
    if (gn > rho * (1.0 + 1e-9))
      throw contract_error("mirror_descent: subgradient norm exceeds declared Lipschitz bound");

    trace.tags.push_back(sg.tag);
    for (int i = 0; i < map.dim; ++i) grad_sum[i] += sg.g[i];
    trace.grad_iterate_dot_sum += dot(sg.g, y);
    for (int i = 0; i < map.dim; ++i) z[i] -= eta * sg.g[i];

    if (on_step && on_step(t + 1, sg.tag)) {
      ++t;
      break;
    }
  }

  trace.iterations = t;
  for (int i = 0; i < map.dim; ++i) grad_sum[i] /= static_cast<double>(t);
  trace.averaged_gradient = std::move(grad_sum);
  trace.regret_bound = map.diameter / (eta * static_cast<double>(t)) +
                       0.5 * map.sigma * eta * rho * rho;
  return trace;
}

double averaged_regret_vs(const DescentTrace& trace, std::span<const double> y) {
  double avg_dot = 0.0;
  for (size_t i = 0; i < y.size(); ++i) avg_dot += trace.averaged_gradient[i] * y[i];
  return trace.grad_iterate_dot_sum / static_cast<double>(trace.iterations) - avg_dot;
}

}  // namespace cara::mirror

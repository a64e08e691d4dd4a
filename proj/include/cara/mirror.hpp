#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cara::mirror {

// Mirror map given through its dual side: dual_gradient maps an
// accumulated-gradient vector z back into the domain. sigma is the
// smoothness constant of the dual potential (the primal potential is
// (1/sigma)-strongly convex), diameter bounds the Bregman divergence from
// the start point. grad_norm measures subgradients in the dual norm; it
// is only used to police the declared Lipschitz bound.
struct MirrorMapSpec {
  std::function<std::vector<double>(const std::vector<double>&)> dual_gradient;
  double sigma = 1.0;
  double diameter = 0.5;
  int dim = 0;
  std::function<double(std::span<const double>)> grad_norm;  // default: l2
};

struct Subgrad {
  std::vector<double> g;
  int tag = -1;
};

using SubgradFn = std::function<Subgrad(const std::vector<double>& y)>;

// Called after each step with (t, tag); returning true stops the run early.
using StepCallback = std::function<bool(long t, int tag)>;

struct DescentTrace {
  std::vector<int> tags;                  // chosen subgradient id per iteration
  std::vector<double> averaged_gradient;  // sequential mean of the g_t
  double regret_bound = 0.0;              // D/(eta*T) + sigma*eta*rho^2/2 at the executed T
  long iterations = 0;
  double step_size = 0.0;
  double grad_iterate_dot_sum = 0.0;  // sum_t g_t . y_t, for regret measurement
};

// Runs z_{t+1} = z_t - eta * g_t, y_t = dual_gradient(z_t) from z_0 = 0 with
// eta = sqrt(2*D / (T*sigma*rho^2)). All accumulations are sequential in
// index order.
DescentTrace mirror_descent(const MirrorMapSpec& map, const SubgradFn& subgrad, double rho,
                            long iterations, const StepCallback& on_step = nullptr);

// (1/T) sum_t g_t . (y_t - y), computable for any comparator y from the trace.
double averaged_regret_vs(const DescentTrace& trace, std::span<const double> y);

// l_p norm with max-rescaling (factor out the largest magnitude before
// powering). Valid for any finite p >= 1.
double lq_norm(std::span<const double> v, double p);

// omega(y) = 0.5 * |y|_q^2 on the unit l_q ball, q in (1, 2].
double lq_omega(std::span<const double> y, double q);

// grad omega(y) = |y|_q^{2-q} * pow(y, q-1) elementwise with signs.
std::vector<double> lq_omega_gradient(std::span<const double> y, double q);

// Fenchel dual: 0.5*|z|_p^2 if |z|_p <= 1, else |z|_p - 0.5.  p >= 2.
double lq_omega_star(std::span<const double> z, double p);

// grad omega*(z) = phi(z) * min(1, |z|_p) with
// phi(z)_i = sgn(z_i) |z_i|^{p-1} / |z|_p^{p-1}; zero vector at z = 0.
std::vector<double> lq_dual_gradient(std::span<const double> z, double p);

// Ready-made map for the unit l_q ball, q = p/(p-1): sigma = p-1, D = 1/2.
MirrorMapSpec lq_mirror_map(int dim, double p);

// f(y) - f(x) - grad(x) . (y - x).
double bregman(const std::function<double(std::span<const double>)>& f,
               const std::function<std::vector<double>(std::span<const double>)>& grad,
               std::span<const double> y, std::span<const double> x);

}  // namespace cara::mirror

#include <doctest.h>

#include <cmath>

#include "cara/errors.hpp"
#include "cara/mirror.hpp"
#include "cara/rng.hpp"
#include "helpers.hpp"

using namespace cara;
using namespace cara::mirror;

TEST_CASE("lq_omega values and domain") {
  std::vector<double> zero(3, 0.0);
  CHECK(lq_omega(zero, 1.5) == 0.0);

  std::vector<double> e1 = {1.0, 0.0, 0.0};
  CHECK(lq_omega(e1, 1.5) == doctest::Approx(0.5).epsilon(1e-12));

  std::vector<double> y = {0.3, 0.4};
  CHECK(lq_omega(y, 2.0) == doctest::Approx(0.125).epsilon(1e-12));

  CHECK_THROWS_AS(lq_omega(y, 1.0), input_error);
  CHECK_THROWS_AS(lq_omega(y, 2.5), input_error);
  std::vector<double> outside = {1.0, 1.0};
  CHECK_THROWS_AS(lq_omega(outside, 2.0), input_error);
}

TEST_CASE("lq_omega_star piecewise values") {
  std::vector<double> zero(2, 0.0);
  CHECK(lq_omega_star(zero, 2.0) == 0.0);

  std::vector<double> z1 = {2.0, 0.0};
  CHECK(lq_omega_star(z1, 2.0) == doctest::Approx(1.5).epsilon(1e-12));

  std::vector<double> z2 = {0.6, 0.8};
  CHECK(lq_omega_star(z2, 2.0) == doctest::Approx(0.5).epsilon(1e-12));

  // Cross-check against grid maximization of z.y - 0.5*|y|_2^2 over the
  // unit disc at resolution 1e-3.
  double best = -1e9;
  for (int i = -1000; i <= 1000; ++i)
    for (int j = -1000; j <= 1000; ++j) {
      const double ya = i * 1e-3, yb = j * 1e-3;
      if (ya * ya + yb * yb > 1.0) continue;
      best = std::max(best, 0.6 * ya + 0.8 * yb - 0.5 * (ya * ya + yb * yb));
    }
  CHECK(std::abs(best - 0.5) < 2e-3);
}

TEST_CASE("lq_dual_gradient closed form") {
  for (double p : {2.0, 4.0, 8.0, 16.0}) {
    std::vector<double> e1 = {1.0, 0.0, 0.0};
    const auto g = lq_dual_gradient(e1, p);
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g[1] == 0.0);
  }
  {
    std::vector<double> z = {3.0, 0.0, 0.0};
    const auto g = lq_dual_gradient(z, 4.0);
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);
  }
  {
    std::vector<double> z = {1.0, 1.0};
    const auto g = lq_dual_gradient(z, 2.0);
    CHECK(g[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
  {
    std::vector<double> zero(4, 0.0);
    const auto g = lq_dual_gradient(zero, 3.0);
    for (double x : g) CHECK(x == 0.0);
  }
}

TEST_CASE("bregman divergence basics") {
  auto sqnorm = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return 0.5 * s;
  };
  auto grad = [](std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); };

  std::vector<double> x = {0.2, -0.4}, y = x;
  CHECK(bregman(sqnorm, grad, y, x) == doctest::Approx(0.0));

  std::vector<double> zero(2, 0.0), ones = {1.0, 1.0};
  CHECK(bregman(sqnorm, grad, ones, zero) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("strong convexity of the lq map") {
  Rng rng(42);
  for (double q : {1.1, 1.5, 2.0}) {
    auto f = [q](std::span<const double> v) { return lq_omega(v, q); };
    auto g = [q](std::span<const double> v) { return lq_omega_gradient(v, q); };
    for (int t = 0; t < 10000; ++t) {
      const auto x = testutil::random_in_lq_ball(rng, 5, q);
      const auto y = testutil::random_in_lq_ball(rng, 5, q);
      std::vector<double> diff(5);
      for (int i = 0; i < 5; ++i) diff[i] = y[i] - x[i];
      const double rhs = 0.5 * (q - 1.0) * std::pow(lq_norm(diff, q), 2.0);
      CHECK(bregman(f, g, y, x) >= rhs - 1e-9);
    }
  }
}

TEST_CASE("dual smoothness of the lq map") {
  Rng rng(43);
  for (double p : {2.0, 3.0, 11.0}) {
    const double q = p / (p - 1.0);
    auto f = [p](std::span<const double> v) { return lq_omega_star(v, p); };
    auto g = [p](std::span<const double> v) { return lq_dual_gradient(v, p); };
    for (int t = 0; t < 10000; ++t) {
      const auto z1 = testutil::random_in_lq_ball(rng, 5, p, 3.0);
      const auto z2 = testutil::random_in_lq_ball(rng, 5, p, 3.0);
      std::vector<double> diff(5);
      for (int i = 0; i < 5; ++i) diff[i] = z2[i] - z1[i];
      const double rhs = 0.5 / (q - 1.0) * std::pow(lq_norm(diff, p), 2.0);
      CHECK(bregman(f, g, z2, z1) <= rhs + 1e-9);
    }
  }
}

TEST_CASE("fenchel consistency of phi") {
  Rng rng(44);
  for (double p : {2.0, 4.0, 16.0}) {
    const double q = p / (p - 1.0);
    for (int t = 0; t < 2000; ++t) {
      auto z = testutil::random_in_lq_ball(rng, 6, p, 3.0);
      if (lq_norm(z, p) < 1e-6) continue;
      // phi = dual gradient without the clip: rescale by 1/min(1, |z|_p).
      auto phi = lq_dual_gradient(z, p);
      const double clip = std::min(1.0, lq_norm(z, p));
      for (double& x : phi) x /= clip;
      CHECK(std::abs(lq_norm(phi, q) - 1.0) <= 1e-10);
      double zdot = 0.0;
      for (size_t i = 0; i < z.size(); ++i) zdot += z[i] * phi[i];
      CHECK(std::abs(zdot - lq_norm(z, p)) <= 1e-10);
    }
  }
}

TEST_CASE("dual gradient matches finite differences away from the kink") {
  Rng rng(45);
  for (double p : {2.0, 4.0, 8.0}) {
    int checked = 0;
    for (int t = 0; checked < 500 && t < 5000; ++t) {
      auto z = testutil::random_in_lq_ball(rng, 4, p, 3.0);
      const double norm = lq_norm(z, p);
      if (std::abs(norm - 1.0) < 0.05 || norm < 0.05) continue;
      ++checked;
      const auto g = lq_dual_gradient(z, p);
      for (int i = 0; i < 4; ++i) {
        auto zp = z, zm = z;
        zp[i] += 1e-5;
        zm[i] -= 1e-5;
        const double fd = (lq_omega_star(zp, p) - lq_omega_star(zm, p)) / 2e-5;
        CHECK(std::abs(fd - g[i]) <= 1e-6);
      }
    }
    CHECK(checked == 500);
  }
}

TEST_CASE("mirror descent with a zero subgradient keeps the start point") {
  MirrorMapSpec map = lq_mirror_map(3, 2.0);
  std::vector<std::vector<double>> iterates;
  SubgradFn zero = [&](const std::vector<double>& y) {
    iterates.push_back(y);
    return Subgrad{std::vector<double>(3, 0.0), 0};
  };
  const DescentTrace trace = mirror_descent(map, zero, 1.0, 50);
  CHECK(trace.iterations == 50);
  for (double x : trace.averaged_gradient) CHECK(x == 0.0);
  for (const auto& y : iterates)
    for (double x : y) CHECK(x == 0.0);  // y_t = dual_gradient(0) = 0 throughout
}

TEST_CASE("mirror descent on the Hadamard n=4 dual problem") {
  // f(y) = max_x y.(u - Vx) with V = H_4 / 2, u = e_1 / 2: D = 1/2,
  // sigma = 1, rho = 2, so T = 64 gives averaged-gradient norm <= 0.25.
  const auto h = testutil::make_matrix(
      4, {{0.5, 0.5, 0.5, 0.5}, {0.5, -0.5, 0.5, -0.5}, {0.5, 0.5, -0.5, -0.5},
          {0.5, -0.5, -0.5, 0.5}});
  const std::vector<double> u = {0.5, 0.0, 0.0, 0.0};

  MirrorMapSpec map = lq_mirror_map(4, 2.0);
  SubgradFn subgrad = [&](const std::vector<double>& y) {
    int best = 0;
    double best_score = 1e300;
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) s += h.at(i, j) * y[i];
      if (s < best_score) {
        best_score = s;
        best = j;
      }
    }
    std::vector<double> g(4);
    for (int i = 0; i < 4; ++i) g[i] = u[i] - h.at(i, best);
    return Subgrad{g, best};
  };
  const DescentTrace trace = mirror_descent(map, subgrad, 2.0, 64);
  CHECK(lq_norm(trace.averaged_gradient, 2.0) <= 0.25 + 1e-9);
  CHECK(trace.regret_bound == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("1-d descent beats the grid oracle within the regret bound") {
  // Domain [-1, 1] via the q=2 map in one dimension; f(y) = |y - 0.3|.
  MirrorMapSpec map = lq_mirror_map(1, 2.0);
  SubgradFn subgrad = [](const std::vector<double>& y) {
    const double s = y[0] > 0.3 ? 1.0 : (y[0] < 0.3 ? -1.0 : 0.0);
    return Subgrad{{s}, 0};
  };
  const long iters = 10000;
  const DescentTrace trace = mirror_descent(map, subgrad, 1.0, iters);
  const double bound = std::sqrt(2.0 * 0.5 * 1.0 * 1.0 / iters);

  double worst = -1e300;
  for (int i = -10000; i <= 10000; ++i) {
    const std::vector<double> y = {i * 1e-4};
    worst = std::max(worst, averaged_regret_vs(trace, y));
  }
  CHECK(worst <= bound + 1e-9);
  // The comparator y = 0.3 in particular.
  const std::vector<double> star = {0.3};
  CHECK(averaged_regret_vs(trace, star) <= bound + 1e-9);
}

TEST_CASE("trace average equals the sequential mean of recorded subgradients") {
  MirrorMapSpec map = lq_mirror_map(3, 2.0);
  Rng rng(61);
  std::vector<std::vector<double>> grads;
  SubgradFn subgrad = [&](const std::vector<double>&) {
    std::vector<double> g(3);
    for (double& x : g) x = 0.4 * (2.0 * rng.next_double() - 1.0);
    grads.push_back(g);
    return Subgrad{g, 0};
  };
  const DescentTrace trace = mirror_descent(map, subgrad, 1.0, 37);
  std::vector<double> mean(3, 0.0);
  for (const auto& g : grads)
    for (int i = 0; i < 3; ++i) mean[i] += g[i];
  for (int i = 0; i < 3; ++i) mean[i] /= 37.0;
  CHECK(trace.averaged_gradient == mean);  // bit-identical, same summation order
}

TEST_CASE("mirror descent input contracts") {
  MirrorMapSpec map = lq_mirror_map(2, 2.0);
  SubgradFn nan_grad = [](const std::vector<double>&) {
    return Subgrad{{std::nan(""), 0.0}, 0};
  };
  CHECK_THROWS_AS(mirror_descent(map, nan_grad, 1.0, 4), numeric_error);

  SubgradFn big = [](const std::vector<double>&) { return Subgrad{{10.0, 0.0}, 0}; };
  CHECK_THROWS_AS(mirror_descent(map, big, 1.0, 4), contract_error);

  SubgradFn ok = [](const std::vector<double>&) { return Subgrad{{0.5, 0.0}, 0}; };
  CHECK_THROWS_AS(mirror_descent(map, ok, 1.0, 0), input_error);
  CHECK_THROWS_AS(mirror_descent(map, ok, -1.0, 4), input_error);
}

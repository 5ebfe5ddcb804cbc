#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <tuple>
#include <random>

#include "pdmetric/oracle.hpp"
#include "pdmetric/profile.hpp"
#include "pdmetric/prokhorov.hpp"
#include "pdmetric/wasserstein.hpp"
#include "test_support.hpp"

using namespace pdmetric;
using namespace pdmetric::testing;

namespace {

const ParamFunction kIdentity = ParamFunction::polynomial({0, 1});

std::vector<ParamFunction> metric_functions() {
  return {kIdentity, ParamFunction::polynomial({0, 0, 1}), ParamFunction::polynomial({0, 3, 2}),
          ParamFunction::polynomial({0, 7})};
}

bool same_off_diagonal(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  std::vector<PlanePoint> sa(a.off_diagonal().begin(), a.off_diagonal().end());
  std::vector<PlanePoint> sb(b.off_diagonal().begin(), b.off_diagonal().end());
  auto less = [](const PlanePoint& p, const PlanePoint& q) {
    return std::tie(p.birth, p.death) < std::tie(q.birth, q.death);
  };
  std::sort(sa.begin(), sa.end(), less);
  std::sort(sb.begin(), sb.end(), less);
  return sa == sb;
}

}  // namespace

TEST_CASE("ParamFunction construction and parsing") {
  CHECK(ParamFunction::parse("poly:0,3,2").coefficients() == std::vector<double>{0, 3, 2});
  CHECK(ParamFunction::parse("poly:0,1,0,0").coefficients() == std::vector<double>{0, 1});
  CHECK(ParamFunction::parse("const:4").constant_value() == 4);
  CHECK_FALSE(ParamFunction::parse("const:1").is_metric());
  CHECK(ParamFunction::parse("poly:0,1").is_metric());
  CHECK(ParamFunction::parse("poly:0,3,2").to_string() == "poly:0,3,2");
  for (const char* bad : {"poly:1,2", "poly:0", "poly:0,0", "poly:0,-1", "poly:0,x", "poly:", "poly:0,,1",
                          "const:0", "const:-2", "const:1.5", "const:", "t^2", ""}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(ParamFunction::parse(bad), std::invalid_argument);
  }
  CHECK_THROWS_AS(ParamFunction::power(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ParamFunction::power(1, -1), std::invalid_argument);
  CHECK_THROWS_AS(ParamFunction::polynomial({0, INFINITY}), std::invalid_argument);
}

TEST_CASE("eval_f examples") {
  CHECK(eval_f(ParamFunction::polynomial({0, 3, 2}), 1) == 5.0);
  CHECK(eval_f(kIdentity, 0.7) == 0.7);
  CHECK(eval_f(ParamFunction::constant(1), 99) == 1.0);
  CHECK(eval_f(ParamFunction::power(3, 0.5), 4) == 6.0);
  CHECK_THROWS_AS(eval_f(kIdentity, -1), std::invalid_argument);
}

TEST_CASE("inverse_f examples") {
  CHECK(inverse_f(kIdentity, 1) == 1.0);
  CHECK(inverse_f(ParamFunction::polynomial({0, 4}), 1) == 0.25);
  CHECK(inverse_f(ParamFunction::polynomial({0, 3, 2}), 5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inverse_f(kIdentity, 0) == 0.0);
  CHECK_THROWS_AS(inverse_f(ParamFunction::constant(2), 1), std::invalid_argument);
  CHECK_THROWS_AS(inverse_f(kIdentity, -1), std::invalid_argument);
}

TEST_CASE("inverse_f returns the least double reaching y") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pick(0, 1000);
  const std::vector<ParamFunction> fs = {kIdentity, ParamFunction::polynomial({0, 0, 1}),
                                         ParamFunction::polynomial({0, 3, 2}), ParamFunction::polynomial({0, 0.1, 0, 5}),
                                         ParamFunction::power(3, 1.5), ParamFunction::power(0.5, 0.25)};
  for (const auto& f : fs) {
    for (int k = 0; k < 200; ++k) {
      const double y = k < 20 ? k : pick(rng);
      const double t = inverse_f(f, y);
      CHECK(f(t) >= y);
      if (t > 0) CHECK(f(std::nextafter(t, 0.0)) < y);
    }
  }
}

TEST_CASE("prokhorov_distance examples") {
  CHECK(prokhorov_distance(single_a(), single_b(), kIdentity) == 1.0);
  CHECK(prokhorov_distance(shifted_base(), shifted_by_three(), kIdentity) == 3.0);
  CHECK(prokhorov_distance(shifted_base(), shifted_by_three(), ParamFunction::polynomial({0, 2})) == 2.0);
  CHECK(prokhorov_distance(single_a(), single_a(), kIdentity) == 0.0);
  CHECK(prokhorov_distance({}, {}, kIdentity) == 0.0);
}

TEST_CASE("kth_bottleneck examples") {
  CHECK(kth_bottleneck(stable_rank_fixture(), {}, 1) == 3.0);
  CHECK(kth_bottleneck(stable_rank_fixture(), {}, 2) == 1.0);
  CHECK(kth_bottleneck(stable_rank_fixture(), {}, 3) == 0.0);
  CHECK(kth_bottleneck(shifted_base(), shifted_base(), 1) == 0.0);
  CHECK_THROWS_AS(kth_bottleneck(single_a(), single_b(), 0), std::invalid_argument);
}

TEST_CASE("pi_f is the least candidate passing the predicate") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const auto x = random_diagram(rng, 0, 5);
    const auto y = random_diagram(rng, 0, 5);
    for (const auto& f : metric_functions()) {
      const double pi = prokhorov_distance(x, y, f);
      CHECK(pi == oracle::brute_prokhorov(x, y, f));
      const auto candidates = prokhorov_candidates(x, y, f);
      for (double t : candidates) {
        const auto d = static_cast<double>(profile_value(x, y, t));
        CHECK((d <= f(t)) == (t >= pi));
      }
    }
  }
}

TEST_CASE("symmetry, triangle inequality and definiteness") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const auto x = random_diagram(rng, 0, 8);
    const auto y = random_diagram(rng, 0, 8);
    const auto z = random_diagram(rng, 0, 8);
    for (const auto& f : metric_functions()) {
      const double xy = prokhorov_distance(x, y, f), yz = prokhorov_distance(y, z, f);
      const double xz = prokhorov_distance(x, z, f);
      CHECK(xy == prokhorov_distance(y, x, f));
      CHECK(xz <= (xy + yz) * (1 + 1e-12));
      CHECK((xy > 0) == !same_off_diagonal(x, y));
    }
  }
}

TEST_CASE("definiteness ignores diagonal points and order") {
  PersistenceDiagram x{{0, 4}, {1, 3}, {2, 2}};
  PersistenceDiagram y{{1, 3}, {0, 4}, {7, 7}};
  CHECK(prokhorov_distance(x, y, kIdentity) == 0.0);
  PersistenceDiagram z{{1, 3}, {0, 4.001}};
  CHECK(prokhorov_distance(x, z, kIdentity) > 0.0);
}

TEST_CASE("monotonicity in f") {
  std::mt19937_64 rng(34);
  const std::vector<std::pair<ParamFunction, ParamFunction>> pairs = {
      {kIdentity, ParamFunction::polynomial({0, 2})},
      {ParamFunction::polynomial({0, 0, 1}), ParamFunction::polynomial({0, 1, 1})},
      {ParamFunction::polynomial({0, 3, 2}), ParamFunction::polynomial({0, 7, 2})},
  };
  for (int trial = 0; trial < 60; ++trial) {
    const auto x = random_diagram(rng, 0, 10);
    const auto y = random_diagram(rng, 0, 10);
    for (const auto& [f, g] : pairs) CHECK(prokhorov_distance(x, y, g) <= prokhorov_distance(x, y, f));
    for (long k = 1; k < 5; ++k) CHECK(kth_bottleneck(x, y, k + 1) <= kth_bottleneck(x, y, k));
  }
}

TEST_CASE("bottleneck equivalence") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 60; ++trial) {
    const auto x = random_diagram(rng, 0, 5);
    const auto y = random_diagram(rng, 0, 5);
    const double w_inf = kth_bottleneck(x, y, 1);
    CHECK(w_inf == oracle::brute_prokhorov(x, y, ParamFunction::constant(1)));
    CHECK(w_inf == full_profile(x, y).zero_threshold());
    CHECK(w_inf == bottleneck_distance(x, y));
  }
}

TEST_CASE("noise near the diagonal that no point prefers to its projection leaves pi_f unchanged") {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> unit(0, 1), along(0, 10);
  int exercised = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto x = random_diagram(rng, 1, 8);
    const auto y = random_diagram(rng, 0, 8);
    for (const auto& f : metric_functions()) {
      const double pi = prokhorov_distance(x, y, f);
      if (pi == 0) continue;
      std::vector<PlanePoint> noisy(y.points().begin(), y.points().end());
      std::size_t added = 0;
      for (int attempt = 0; attempt < 100 && added < 5; ++attempt) {
        const double half = pi * unit(rng) * 0.999;  // diagonal distance < pi under L-infinity
        const double mid = along(rng);
        const PlanePoint n{mid - half, mid + half};
        const bool far_from_x = std::all_of(x.off_diagonal().begin(), x.off_diagonal().end(), [&](const PlanePoint& p) {
          return ground_distance(p, n, GroundMetric::infinity()) > diagonal_distance(p, GroundMetric::infinity());
        });
        if (!far_from_x || half == 0) continue;
        noisy.push_back(n);
        ++added;
      }
      if (added == 0) continue;
      const PersistenceDiagram y_noisy(noisy);
      CHECK(prokhorov_distance(x, y_noisy, f) == pi);
      CHECK(wasserstein_distance(x, y_noisy, 1) > wasserstein_distance(x, y, 1));
      ++exercised;
    }
  }
  CHECK(exercised > 100);
}

TEST_CASE("noise close to an off-diagonal point can lower pi_f") {
  // D = 1 on [0, 2) and pi = 2 for f = t/2; the noise point is within 0.5
  // of x while its own diagonal distance 1.5 is below pi.
  const PersistenceDiagram x{{0, 4}};
  const auto f = ParamFunction::polynomial({0, 0.5});
  CHECK(prokhorov_distance(x, {}, f) == 2.0);
  const PersistenceDiagram y_noisy{{0.5, 3.5}};
  CHECK(diagonal_distance({0.5, 3.5}, GroundMetric::infinity()) < 2.0);
  CHECK(prokhorov_distance(x, y_noisy, f) == 0.5);
}

TEST_CASE("sampled continuity in f") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const auto x = random_diagram(rng, 0, 6);
    const auto y = random_diagram(rng, 0, 6);
    for (const auto& f : metric_functions()) {
      const double pi_f = prokhorov_distance(x, y, f);
      for (double eta : {1e-3, 1e-6, 1e-9}) {
        auto coefficients = f.coefficients();
        for (auto& c : coefficients) c *= 1 + eta;
        const double pi_g = prokhorov_distance(x, y, ParamFunction::polynomial(coefficients));
        // g = (1+eta) f moves every f-inverse by a relative amount below eta.
        CHECK(std::abs(pi_f - pi_g) <= 2 * eta * std::max(1.0, pi_f));
      }
    }
  }
}

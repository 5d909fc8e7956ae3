// Copyright 2026 The manifold-dp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "manifold_dp/sphere.hpp"
#include "test_support.hpp"

using namespace manifold_dp;
using manifold_dp::testing::ks_distance;
using manifold_dp::testing::random_rotation;
using manifold_dp::testing::random_sphere_point;

namespace {

constexpr double kPi = std::numbers::pi;

Point north_pole() {
  Eigen::VectorXd v(3);
  v << 0.0, 0.0, 1.0;
  return Point::sphere(v);
}

TangentVector tangent(const Point& p, double x, double y, double z) {
  Eigen::VectorXd v(3);
  v << x, y, z;
  return TangentVector(p, v);
}

}  // namespace

TEST_CASE("exponential map closed forms") {
  const Point p = north_pole();

  const Point still = sphere_exp(p, tangent(p, 0.0, 0.0, 0.0));
  CHECK((still.coords() - p.coords()).norm() == 0.0);

  const Point quarter = sphere_exp(p, tangent(p, kPi / 2.0, 0.0, 0.0));
  Eigen::VectorXd ex(3);
  ex << 1.0, 0.0, 0.0;
  CHECK((quarter.coords() - ex).norm() <= 1e-10);

  const Point antipode = sphere_exp(p, tangent(p, kPi, 0.0, 0.0));
  ex << 0.0, 0.0, -1.0;
  CHECK((antipode.coords() - ex).norm() <= 1e-10);

  // rho(p, exp_p(v)) = |v| for |v| <= pi.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> len(0.0, kPi - 0.1);
  for (int i = 0; i < 100; ++i) {
    const Point base = random_sphere_point(2, rng);
    TangentVector dir = draw_tangent_proposal(base, 1.0, rng);
    dir = dir.scaled(len(rng) / dir.coords().norm());
    CHECK(sphere_distance(base, sphere_exp(base, dir)) ==
          doctest::Approx(dir.coords().norm()).epsilon(1e-9));
  }
}

TEST_CASE("inverse exponential map") {
  const Point p = north_pole();

  const TangentVector at_itself = sphere_log(p, p);
  CHECK(at_itself.coords().norm() == 0.0);

  Eigen::VectorXd ex(3);
  ex << 1.0, 0.0, 0.0;
  const TangentVector quarter = sphere_log(p, Point::sphere(ex));
  ex << kPi / 2.0, 0.0, 0.0;
  CHECK((quarter.coords() - ex).norm() <= 1e-12);

  CHECK_THROWS_AS(sphere_log(p, Point::sphere(-p.coords())), LogUndefinedError);

  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const Point a = random_sphere_point(2, rng);
    const Point b = random_sphere_point(2, rng);
    const Point roundtrip = sphere_exp(a, sphere_log(a, b));
    CHECK((roundtrip.coords() - b.coords()).lpNorm<Eigen::Infinity>() <= 1e-10);
  }

  // Near-coincident points go through the series branch.
  Eigen::VectorXd close(3);
  close << 1e-8, 0.0, 1.0;
  const TangentVector tiny = sphere_log(p, Point::sphere(close / close.norm()));
  CHECK(tiny.coords().norm() == doctest::Approx(1e-8).epsilon(1e-6));
}

TEST_CASE("arc distance") {
  const Point p = north_pole();
  Eigen::VectorXd v(3);
  v << 1.0, 0.0, 0.0;
  const Point q = Point::sphere(v);
  CHECK(sphere_distance(p, p) == 0.0);
  CHECK(sphere_distance(p, q) == doctest::Approx(kPi / 2.0));
  CHECK(sphere_distance(p, Point::sphere(-p.coords())) == doctest::Approx(kPi));
}

TEST_CASE("polar cap sampling") {
  const ManifoldDescriptor s2 = ManifoldDescriptor::sphere(2);
  const double r = kPi / 8.0;
  const BallSpec ball(north_pole(), r);
  std::mt19937_64 rng(2024);

  const int n = 100000;
  std::vector<double> thetas;
  std::vector<double> phis;
  thetas.reserve(n);
  phis.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Point draw = sample_polar_cap(s2, r, rng);
    REQUIRE(std::abs(draw.coords().norm() - 1.0) <= 1e-10);
    REQUIRE(in_ball(ball, draw));
    thetas.push_back(std::acos(std::clamp(draw.coords()[2], -1.0, 1.0)));
    const double phi = std::atan2(draw.coords()[1], draw.coords()[0]);
    phis.push_back(phi < 0.0 ? phi + 2.0 * kPi : phi);
  }

  CHECK(ks_distance(thetas, [r](double t) { return std::clamp(t / r, 0.0, 1.0); }) < 0.01);
  CHECK(ks_distance(phis, [](double t) { return std::clamp(t / (2.0 * kPi), 0.0, 1.0); }) <
        0.01);

  CHECK_THROWS_AS(sample_polar_cap(ManifoldDescriptor::sphere(1), r, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_polar_cap(s2, -0.1, rng), std::domain_error);
}

TEST_CASE("chord radius") {
  CHECK(chord_radius(kPi / 8.0) == doctest::Approx(2.0 * std::sin(kPi / 16.0)).epsilon(1e-15));
  CHECK(chord_radius(kPi / 8.0) == doctest::Approx(0.390181).epsilon(1e-5));
  CHECK(chord_radius(0.0) == 0.0);
  CHECK(chord_radius(kPi) == doctest::Approx(2.0));
  CHECK_THROWS_AS(chord_radius(-0.01), std::domain_error);
  CHECK_THROWS_AS(chord_radius(kPi + 0.01), std::domain_error);

  // Chord is never longer than the arc.
  for (int i = 0; i <= 100; ++i) {
    const double r = kPi * i / 100.0;
    CHECK(chord_radius(r) <= r + 1e-15);
  }
}

TEST_CASE("tangent proposal") {
  std::mt19937_64 rng(555);
  const Point x = random_sphere_point(2, rng);
  const double sigma = 0.3;

  const int n = 100000;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  Eigen::Vector3d sum_sq = Eigen::Vector3d::Zero();
  for (int i = 0; i < n; ++i) {
    const TangentVector v = draw_tangent_proposal(x, sigma, rng);
    REQUIRE(v.coords().norm() <= sigma + 1e-12);
    REQUIRE(std::abs(v.coords().dot(x.coords())) <= 1e-10);
    sum += Eigen::Vector3d(v.coords());
    sum_sq += Eigen::Vector3d(v.coords().cwiseProduct(v.coords()));
  }
  // Symmetry: the mean vanishes within 3 standard errors componentwise.
  for (int c = 0; c < 3; ++c) {
    const double mean = sum[c] / n;
    const double var = sum_sq[c] / n - mean * mean;
    CHECK(std::abs(mean) <= 3.0 * std::sqrt(var / n) + 1e-12);
  }
}

TEST_CASE("rotation invariance") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd q = random_rotation(3, rng);
    const Point a = random_sphere_point(2, rng);
    const Point b = random_sphere_point(2, rng);
    const Point qa = Point::sphere(q * a.coords());
    const Point qb = Point::sphere(q * b.coords());
    CHECK(std::abs(sphere_distance(qa, qb) - sphere_distance(a, b)) <= 1e-10);

    const TangentVector v = sphere_log(a, b);
    const TangentVector qv(qa, q * v.coords());
    const Point moved = sphere_exp(qa, qv);
    CHECK((moved.coords() - q * sphere_exp(a, v).coords()).norm() <= 1e-10);
  }
}

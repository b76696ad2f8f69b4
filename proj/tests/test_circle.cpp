#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "modrec/circle.hpp"

using namespace modrec;

namespace {

FractionalPhase ph(double t) { return FractionalPhase::wrap(t); }

}  // namespace

TEST_CASE("lift") {
  const auto p0 = lift(ph(0.0));
  CHECK(p0.re == 1.0);
  CHECK(p0.im == 0.0);
  const auto p1 = lift(ph(0.25));
  CHECK(p1.re == doctest::Approx(0.0));
  CHECK(p1.im == doctest::Approx(1.0));
  const auto p2 = lift(ph(0.7));
  CHECK(p2.re == doctest::Approx(std::cos(1.4 * std::numbers::pi)).epsilon(1e-14));
  CHECK(p2.re == doctest::Approx(-0.30902).epsilon(1e-4));
  CHECK(p2.im == doctest::Approx(-0.95106).epsilon(1e-4));
}

TEST_CASE("project") {
  const auto a = project(3.0, 4.0);
  CHECK(a.re == doctest::Approx(0.6));
  CHECK(a.im == doctest::Approx(0.8));
  const auto z = project(0.0, 0.0);
  CHECK(z.re == 1.0);
  CHECK(z.im == 0.0);
  const auto b = project(-2.0, 0.0);
  CHECK(b.re == -1.0);
  CHECK(b.im == 0.0);
  const auto c = project(std::complex<double>(1e-300, -1e-300));
  CHECK(std::hypot(c.re, c.im) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("phase") {
  CHECK(phase(CirclePoint{1.0, 0.0}).value() == 0.0);
  CHECK(phase(CirclePoint{0.0, -1.0}).value() == doctest::Approx(0.75));
  CHECK(phase(CirclePoint{-0.30902, -0.95106}).value() == doctest::Approx(0.7).epsilon(1e-5));
  // atan2(-0, -1) = -pi must map to 1/2, not 1
  CHECK(phase(CirclePoint{-1.0, -0.0}).value() == doctest::Approx(0.5));
}

TEST_CASE("wrap distance") {
  CHECK(wrap_distance(0.9, 0.1) == doctest::Approx(0.2));
  CHECK(wrap_distance(0.37, 0.37) == 0.0);
  CHECK(wrap_distance(0.0, 0.5) == 0.5);
}

TEST_CASE("circle properties over random samples") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 3.0);

  SUBCASE("lift is on the circle, phase inverts lift and vice versa") {
    for (int k = 0; k < 10000; ++k) {
      const FractionalPhase t = ph(unit(gen));
      const CirclePoint p = lift(t);
      CHECK(std::abs(p.re * p.re + p.im * p.im - 1.0) <= 1e-12);
      CHECK(wrap_distance(phase(p), t) <= 1e-10);

      const CirclePoint q = project(normal(gen), normal(gen));
      CHECK(std::abs(q.re * q.re + q.im * q.im - 1.0) <= 1e-12);
      const CirclePoint back = lift(phase(q));
      CHECK(std::abs(back.re - q.re) <= 1e-10);
      CHECK(std::abs(back.im - q.im) <= 1e-10);
    }
  }

  SUBCASE("wrap distance is a metric on the circle") {
    for (int k = 0; k < 10000; ++k) {
      const auto a = ph(unit(gen));
      const auto b = ph(unit(gen));
      const auto c = ph(unit(gen));
      const double ab = wrap_distance(a, b);
      CHECK(ab >= 0.0);
      CHECK(ab <= 0.5);
      CHECK(ab == wrap_distance(b, a));
      CHECK(wrap_distance(a, a) == 0.0);
      CHECK(ab <= wrap_distance(a, c) + wrap_distance(c, b) + 1e-15);
    }
  }

  SUBCASE("chord length is 2 sin(pi d_w)") {
    for (int k = 0; k < 10000; ++k) {
      const auto t = ph(unit(gen));
      const auto s = ph(unit(gen));
      const double chord = std::abs(lift(t).to_complex() - lift(s).to_complex());
      CHECK(std::abs(chord - 2.0 * std::sin(std::numbers::pi * wrap_distance(t, s))) <= 1e-9);
    }
  }
}

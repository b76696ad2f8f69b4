#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "generators.hpp"
#include "modrec/lp_denoiser.hpp"
#include "modrec/metrics_bounds.hpp"
#include "oracles.hpp"

using namespace modrec;
using cd = std::complex<double>;

namespace {

LpConfig config(int l, double b, KernelId k = KernelId::epanechnikov) {
  LpConfig c;
  c.order_l = l;
  c.bandwidth_b = b;
  c.kernel = make_kernel(k);
  return c;
}

Eigen::VectorXcd lifted(const ModuloSamples& s) {
  Eigen::VectorXcd z(s.values.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = lift(FractionalPhase::wrap(s.values[i])).to_complex();
  return z;
}

}  // namespace

TEST_CASE("design vector") {
  const Eigen::VectorXd a = design_vector(0.0, 3);
  CHECK(a.size() == 4);
  CHECK(a[0] == 1.0);
  CHECK(a.tail(3).isZero());
  const Eigen::VectorXd b = design_vector(1.0, 2);
  CHECK(b[1] == 1.0);
  CHECK(b[2] == 0.5);
  const Eigen::VectorXd c = design_vector(2.0, 2);
  CHECK(c[1] == 2.0);
  CHECK(c[2] == 2.0);
  const Eigen::VectorXf f = design_vector(2.0f, 3);
  CHECK(f[3] == doctest::Approx(8.0f / 6.0f));
}

TEST_CASE("support window") {
  const UniformGrid g(100);
  const GridWindow w = support_window(g, 0.5, 0.055);
  CHECK(w.first == 44);  // x = 0.45
  CHECK(w.last == 54);   // x = 0.55
  const GridWindow e = support_window(UniformGrid(10), 0.05, 0.04);
  CHECK(e.empty());
  // exactly on the edge: |x_i - x| = b is included
  const GridWindow edge = support_window(UniformGrid(4), 0.5, 0.25);
  CHECK(edge.first == 0);
  CHECK(edge.last == 2);
}

TEST_CASE("build_bnx") {
  SUBCASE("order 0 with the box kernel is a scaled count") {
    // 11 points within 0.055 of 0.5 on the grid i/100
    const Eigen::MatrixXd m = build_bnx(UniformGrid(100), 0.5, config(0, 0.055, KernelId::box));
    REQUIRE(m.rows() == 1);
    CHECK(m(0, 0) == doctest::Approx(11 * 0.5 / (100 * 0.055)).epsilon(1e-14));
  }
  SUBCASE("empty window gives the zero matrix") {
    const Eigen::MatrixXd m = build_bnx(UniformGrid(10), 0.05, config(2, 0.04));
    CHECK(m.isZero(0.0));
  }
  SUBCASE("matches the naive triple loop") {
    for (KernelId k : {KernelId::epanechnikov, KernelId::box, KernelId::triangular}) {
      for (double x : {0.5, 0.0, 0.013, 1.0}) {
        const LpConfig cfg = config(2, 0.1, k);
        const Eigen::MatrixXd m = build_bnx(UniformGrid(100), x, cfg);
        const auto ref = oracle::naive_bnx(100, x, 0.1, 2, cfg.kernel);
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) CHECK(std::abs(m(r, c) - ref[r][c]) <= 1e-12);
        }
        CHECK(m.isApprox(m.transpose()));
        CHECK(min_eigenvalue<double>(m) >= -1e-14);
      }
    }
  }
}

TEST_CASE("lp_weights") {
  SUBCASE("order 0 box kernel weights are uniform") {
    const LpWeights w = lp_weights(UniformGrid(100), 0.5, config(0, 0.055, KernelId::box));
    REQUIRE(w.indices.size() == 11);
    for (Eigen::Index k = 0; k < w.weights.size(); ++k) CHECK(w.weights[k] == doctest::Approx(1.0 / 11).epsilon(1e-13));
    CHECK(w.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("window indices are exactly the points within b") {
    const UniformGrid g(237);
    const LpConfig cfg = config(2, 0.037);
    const double x = 0.4123;
    const LpWeights w = lp_weights(g, x, cfg);
    std::vector<Eigen::Index> expected;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (std::abs(g.point(i) - x) <= cfg.bandwidth_b) expected.push_back(i);
    }
    CHECK(w.indices == expected);
  }
  SUBCASE("moment identities") {
    const UniformGrid g(300);
    const LpConfig cfg = config(3, 0.05);
    for (double x : {0.0, 0.02, 0.5, 0.99, 1.0}) {
      const LpWeights w = lp_weights(g, x, cfg);
      CHECK(std::abs(w.weights.sum() - 1.0) <= 1e-8);
      for (int k = 1; k <= 3; ++k) {
        double m = 0.0;
        for (std::size_t j = 0; j < w.indices.size(); ++j) m += std::pow(g.point(w.indices[j]) - x, k) * w.weights[j];
        CHECK(std::abs(m) <= 1e-7 * 300);
      }
    }
  }
  SUBCASE("too few supporting points is reported as ill-conditioned") {
    // epanechnikov with b = 1.5/n sees three points with positive weight; a cubic needs four
    CHECK_THROWS_AS(lp_weights(UniformGrid(100), 0.5, config(3, 0.015)), IllConditioned);
    try {
      lp_weights(UniformGrid(100), 0.5, config(3, 0.015));
    } catch (const IllConditioned& e) {
      CHECK(e.x() == 0.5);
      CHECK(e.min_eig() < 1e-8);
    }
    LpConfig strict = config(2, 0.05);
    strict.min_eig_threshold = 1.0;
    CHECK_THROWS_AS(lp_weights(UniformGrid(100), 0.5, strict), IllConditioned);
  }
}

TEST_CASE("weighted least squares") {
  const UniformGrid g(50);
  SUBCASE("constant targets") {
    const Eigen::VectorXcd z = Eigen::VectorXcd::Constant(50, cd(0.3, -0.7));
    const Eigen::VectorXcd th = weighted_ls_solve<double>(z, g, 0.4, config(2, 0.2));
    CHECK(std::abs(th[0] - cd(0.3, -0.7)) <= 1e-12);
    CHECK(std::abs(th[1]) <= 1e-10);
    CHECK(std::abs(th[2]) <= 1e-9);
  }
  SUBCASE("linear targets") {
    Eigen::VectorXcd z(50);
    for (Eigen::Index i = 0; i < 50; ++i) z[i] = 2.5 * g.point(i) - 1.0;
    for (double x : {0.0, 0.31, 1.0}) {
      const Eigen::VectorXcd th = weighted_ls_solve<double>(z, g, x, config(1, 0.15));
      CHECK(std::abs(th[0] - cd(2.5 * x - 1.0)) <= 1e-12);
    }
  }
  SUBCASE("random targets match Cramer's rule and the weight route") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    for (int l = 0; l <= 3; ++l) {
      for (double x : {0.0, 0.23, 0.5, 0.97}) {
        Eigen::VectorXcd z(50);
        std::vector<cd> zv(50);
        for (Eigen::Index i = 0; i < 50; ++i) zv[i] = z[i] = cd(nd(rng), nd(rng));
        const LpConfig cfg = config(l, 0.3, KernelId::triangular);
        const Eigen::VectorXcd th = weighted_ls_solve<double>(z, g, x, cfg);
        oracle::Matrix gram;
        std::vector<cd> rhs;
        oracle::normal_equations(50, x, 0.3, l, cfg.kernel, zv, gram, rhs);
        const auto ref = oracle::cramer_solve(gram, rhs);
        CHECK(std::abs(th[0] - ref[0]) <= 1e-9);

        const LpWeights w = lp_weights(g, x, cfg);
        cd via_weights = 0.0;
        for (std::size_t j = 0; j < w.indices.size(); ++j) via_weights += z[w.indices[j]] * w.weights[j];
        CHECK(std::abs(th[0] - via_weights) <= 1e-9);
      }
    }
  }
}

TEST_CASE("denoise") {
  SUBCASE("constant signal is reproduced") {
    const auto s = sample_modulo(constant_fn(0.25), UniformGrid(120), {0.0, 1});
    const DenoisedModulo d = denoise(s, config(2, 0.08));
    for (Eigen::Index i = 0; i < 120; ++i) {
      CHECK(std::abs(d.phases[i] - 0.25) <= 1e-9);
      CHECK(std::abs(std::abs(d.circle_estimates[i]) - 1.0) <= 1e-12);
      CHECK(d.circle_estimates[i] == project(d.raw_estimates[i]).to_complex());
    }
    CHECK(d.min_eig_overall > 0.0);
  }
  SUBCASE("bandwidth below 1/(2n) is rejected") {
    const auto s = sample_modulo(constant_fn(0.25), UniformGrid(100), {0.0, 1});
    CHECK_THROWS_AS(denoise(s, config(0, 0.004)), InvalidArgument);
  }
  SUBCASE("paper_fn at sigma = 0.12, n = 600") {
    const double b = practical_bandwidth(0.1, 2.4, 600);
    CHECK(b == doctest::Approx(0.0153).epsilon(0.005));
    int good = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const UniformGrid g(600);
      const auto f = paper_fn();
      const auto s = sample_modulo(f, g, {0.12, seed});
      const DenoisedModulo d = denoise(s, config(2, b));
      Eigen::VectorXd truth(600);
      for (Eigen::Index i = 0; i < 600; ++i) truth[i] = frac(f(g.point(i)));
      if (wrap_max(d.phases, truth) < 0.25) ++good;
    }
    CHECK(good >= 4);
  }
  SUBCASE("result does not depend on anything but the inputs") {
    const auto s = sample_modulo(paper_fn(), UniformGrid(400), {0.12, 3});
    const DenoisedModulo a = denoise(s, config(2, 0.03));
    const DenoisedModulo b = denoise(s, config(2, 0.03));
    CHECK((a.phases.array() == b.phases.array()).all());
  }
}

TEST_CASE("complex polynomials of degree <= l are reproduced at every grid point") {
  const UniformGrid g(200);
  for (int l = 0; l <= 3; ++l) {
    const LpConfig cfg = config(l, 0.06);
    // P(x) = sum_k c_k x^k with complex coefficients
    std::vector<cd> coeff = {cd(0.3, -1.0), cd(-2.0, 0.5), cd(1.5, 1.5), cd(-0.7, 2.0)};
    coeff.resize(l + 1);
    const auto poly = [&](double x) {
      cd acc = 0.0;
      for (int k = l; k >= 0; --k) acc = acc * x + coeff[k];
      return acc;
    };
    Eigen::VectorXcd z(200);
    for (Eigen::Index i = 0; i < 200; ++i) z[i] = poly(g.point(i));
    for (Eigen::Index i = 0; i < 200; ++i) {
      const LpWeights w = lp_weights(g, g.point(i), cfg);
      cd h = 0.0;
      for (std::size_t j = 0; j < w.indices.size(); ++j) h += z[w.indices[j]] * w.weights[j];
      CHECK(std::abs(h - poly(g.point(i))) <= 1e-8);
    }
  }
}

TEST_CASE("weight bounds with C* from the realised eigenvalue floor") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const gen::LpCase c = gen::random_lp_case(rng);
    const UniformGrid g(c.n);
    const LpWeights w = lp_weights(g, c.x, c.cfg);
    const double cstar = c_star(c.cfg.kernel.k_max, w.min_eig);
    const double nb = c.n * c.cfg.bandwidth_b;
    CHECK(w.weights.cwiseAbs().maxCoeff() <= cstar / nb);
    CHECK(w.weights.cwiseAbs().sum() <= cstar);
  }
}

TEST_CASE("polynomial reproduction over random (Q, x)") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    const gen::LpCase c = gen::random_lp_case(rng);
    const UniformGrid g(c.n);
    std::vector<double> q(c.cfg.order_l + 1);
    for (auto& v : q) v = nd(rng);
    const auto Q = [&](double x) {
      double acc = 0.0;
      for (auto it = q.rbegin(); it != q.rend(); ++it) acc = acc * x + *it;
      return acc;
    };
    const LpWeights w = lp_weights(g, c.x, c.cfg);
    double s = 0.0;
    for (std::size_t j = 0; j < w.indices.size(); ++j) s += Q(g.point(w.indices[j])) * w.weights[j];
    CHECK(std::abs(s - Q(c.x)) <= 1e-7);
  }
}

TEST_CASE("weights route equals least-squares route, joint complex fit equals two real fits") {
  const UniformGrid g(300);
  const auto s = sample_modulo(paper_fn(), g, {0.12, 8});
  const LpConfig cfg = config(2, practical_bandwidth(0.1, 2.4, 300));
  const DenoisedModulo d = denoise(s, cfg);
  const Eigen::VectorXcd z = lifted(s);
  const Eigen::VectorXcd zr = z.real().cast<cd>();
  const Eigen::VectorXcd zi = z.imag().cast<cd>();
  for (Eigen::Index i = 0; i < 300; ++i) {
    const double x = g.point(i);
    const cd joint = weighted_ls_solve<double>(z, g, x, cfg)[0];
    CHECK(std::abs(joint - d.raw_estimates[i]) <= 1e-9);
    const cd re = weighted_ls_solve<double>(zr, g, x, cfg)[0];
    const cd im = weighted_ls_solve<double>(zi, g, x, cfg)[0];
    CHECK(std::abs(cd(re.real(), im.real()) - joint) <= 1e-12);
    CHECK(std::abs(re.imag()) <= 1e-14);
  }
}

TEST_CASE("noiseless bias decays at least like b^(0.8 beta) in the interior") {
  const Eigen::Index n = 4096;
  const UniformGrid g(n);
  const auto f = paper_fn();
  const auto s = sample_modulo(f, g, {0.0, 0});
  const Eigen::VectorXcd z = lifted(s);
  std::vector<double> bs, errs;
  for (double b : {0.01, 0.005, 0.0025, 0.00125, 0.000625}) {
    const LpConfig cfg = config(2, b);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; i += 3) {
      const double x = g.point(i);
      if (x < 0.1 || x > 0.9) continue;
      const LpWeights w = lp_weights(g, x, cfg);
      cd h = 0.0;
      for (std::size_t j = 0; j < w.indices.size(); ++j) h += z[w.indices[j]] * w.weights[j];
      worst = std::max(worst, std::abs(h - std::polar(1.0, 2.0 * std::numbers::pi * f(x))));
    }
    bs.push_back(b);
    errs.push_back(worst);
  }
  CHECK(oracle::loglog_slope(bs, errs) >= 0.8 * 2.4);
}

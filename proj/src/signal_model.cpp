#include "modrec/signal_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace modrec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs_on_unit_interval(const std::function<double(double)>& g, int samples = 20001) {
  double m = 0.0;
  for (int j = 0; j < samples; ++j) {
    m = std::max(m, std::abs(g(static_cast<double>(j) / (samples - 1))));
  }
  return m;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<double> parse_numbers(std::string_view text, std::string_view id) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = text.substr(0, comma);
    double v = 0.0;
    // from_chars for double is available in libstdc++ 11
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw InvalidArgument("malformed number in function id '" + std::string(id) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw InvalidArgument("missing parameters in function id '" + std::string(id) + "'");
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

}  // namespace

void SmoothnessParams::validate() const {
  if (l < 0) throw InvalidArgument("smoothness order l must be nonnegative");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("Hoelder exponent alpha must lie in (0, 1]");
  if (!(M > 0.0)) throw InvalidArgument("Hoelder constant M must be positive");
  if (!(kappa > 0.0)) throw InvalidArgument("derivative bound kappa must be positive");
}

double paper_fn_d1(double x) {
  const double w = 2.0 * kTwoPi;
  return 2.0 + 2.0 * std::cos(w * x) - w * (2.0 * x + 1.0) * std::sin(w * x);
}

double paper_fn_d2(double x) {
  const double w = 2.0 * kTwoPi;
  return -4.0 * w * std::sin(w * x) - w * w * (2.0 * x + 1.0) * std::cos(w * x);
}

TestFunction paper_fn() {
  TestFunction f;
  f.kind = FunctionKind::paper_fn;
  f.id = "paper_fn";
  f.evaluator = [](double x) {
    const double c = std::cos(kTwoPi * x);
    const double s = std::sin(kTwoPi * x);
    return 4.0 * x * c * c - 2.0 * s * s + 4.7;
  };
  // kappa: sup of |f|, |f'|, |f''| on a dense grid. M: finite-difference witness for the
  // 0.4-Hoelder seminorm of f''. Both are computed once.
  static const SmoothnessParams smoothness = [&f] {
    SmoothnessParams s;
    s.l = 2;
    s.alpha = 0.4;
    s.kappa = std::max({max_abs_on_unit_interval(f.evaluator), max_abs_on_unit_interval(paper_fn_d1),
                        max_abs_on_unit_interval(paper_fn_d2)});
    s.M = holder_seminorm_estimate(f, s.l, s.alpha, 2000);
    return s;
  }();
  f.smoothness = smoothness;
  return f;
}

TestFunction constant_fn(double c) {
  TestFunction f;
  f.kind = FunctionKind::constant;
  f.id = "constant:" + format_number(c);
  f.evaluator = [c](double) { return c; };
  f.smoothness = {0, 1.0, 1.0, std::max(std::abs(c), 1e-12)};
  return f;
}

TestFunction linear_fn(double a, double b) {
  TestFunction f;
  f.kind = FunctionKind::linear;
  f.id = "linear:" + format_number(a) + "," + format_number(b);
  f.evaluator = [a, b](double x) { return a * x + b; };
  f.smoothness = {1, 1.0, 1.0, std::max({std::abs(a), std::abs(b), std::abs(a + b), 1e-12})};
  return f;
}

TestFunction poly_fn(std::vector<double> coeffs) {
  if (coeffs.empty()) throw InvalidArgument("poly needs at least one coefficient");
  TestFunction f;
  f.kind = FunctionKind::poly;
  f.id = "poly:";
  for (std::size_t k = 0; k < coeffs.size(); ++k) f.id += (k ? "," : "") + format_number(coeffs[k]);

  const auto horner = [](const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  f.evaluator = [coeffs, horner](double x) { return horner(coeffs, x); };

  const int degree = static_cast<int>(coeffs.size()) - 1;
  double kappa = 1e-12;
  std::vector<double> d = coeffs;
  for (int ell = 0; ell <= degree; ++ell) {
    kappa = std::max(kappa, max_abs_on_unit_interval([&](double x) { return horner(d, x); }, 2001));
    std::vector<double> next;
    for (std::size_t k = 1; k < d.size(); ++k) next.push_back(static_cast<double>(k) * d[k]);
    d = next.empty() ? std::vector<double>{0.0} : next;
  }
  // f^(degree) is constant, so any M > 0 bounds its seminorm.
  f.smoothness = {degree, 1.0, 1.0, kappa};
  return f;
}

TestFunction cos_k_fn(int k) {
  TestFunction f;
  f.kind = FunctionKind::cos_k;
  f.id = "cos_k:" + std::to_string(k);
  const double w = kTwoPi * k;
  f.evaluator = [w](double x) { return std::cos(w * x); };
  const double aw = std::max(std::abs(w), 1e-12);
  f.smoothness = {2, 1.0, aw * aw * aw, std::max({1.0, aw, aw * aw})};
  return f;
}

TestFunction parse_test_function(std::string_view id) {
  if (id == "paper_fn") return paper_fn();
  const auto colon = id.find(':');
  if (colon == std::string_view::npos) throw InvalidArgument("unknown function id '" + std::string(id) + "'");
  const auto name = id.substr(0, colon);
  const auto args = parse_numbers(id.substr(colon + 1), id);
  if (name == "constant" && args.size() == 1) return constant_fn(args[0]);
  if (name == "linear" && args.size() == 2) return linear_fn(args[0], args[1]);
  if (name == "poly") return poly_fn(args);
  if (name == "cos_k" && args.size() == 1 && args[0] == std::round(args[0])) {
    return cos_k_fn(static_cast<int>(args[0]));
  }
  throw InvalidArgument("unknown function id '" + std::string(id) + "'");
}

TestFunction circle_component(const TestFunction& f, CirclePart part) {
  TestFunction h;
  h.kind = FunctionKind::custom;
  h.id = (part == CirclePart::real ? "cos2pi(" : "sin2pi(") + f.id + ")";
  auto inner = f.evaluator;
  if (part == CirclePart::real) {
    h.evaluator = [inner](double x) { return std::cos(kTwoPi * inner(x)); };
  } else {
    h.evaluator = [inner](double x) { return std::sin(kTwoPi * inner(x)); };
  }
  h.smoothness = f.smoothness;
  return h;
}

Eigen::VectorXd gaussian_noise(const NoiseModel& noise, Eigen::Index n) {
  if (noise.sigma < 0.0) throw InvalidArgument("noise sigma must be nonnegative");
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  if (noise.sigma == 0.0) return eta;
  std::mt19937_64 gen(noise.seed);
  std::normal_distribution<double> normal(0.0, noise.sigma);
  for (Eigen::Index i = 0; i < n; ++i) eta[i] = normal(gen);
  return eta;
}

double frac(double v) noexcept {
  const double r = v - std::floor(v);
  // v slightly below an integer can round up to exactly 1.
  return r >= 1.0 ? 0.0 : r;
}

Eigen::VectorXd evaluate_on_grid(const TestFunction& f, const UniformGrid& grid) {
  Eigen::VectorXd out(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) out[i] = f(grid.point(i));
  return out;
}

ModuloSamples sample_modulo(const TestFunction& f, const UniformGrid& grid, const NoiseModel& noise) {
  const Eigen::VectorXd eta = gaussian_noise(noise, grid.size());
  Eigen::VectorXd y(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) y[i] = frac(f(grid.point(i)) + eta[i]);
  return {grid, std::move(y)};
}

double holder_seminorm_estimate(const TestFunction& f, int l, double alpha, int n_probe) {
  if (l < 0) throw InvalidArgument("derivative order must be nonnegative");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  if (n_probe < 10 * (l + 2)) throw InvalidArgument("n_probe must be at least 10 (l + 2)");
  const double h = 1.0 / n_probe;
  if (std::pow(h, l) < 1e3 * std::numeric_limits<double>::epsilon()) {
    throw InvalidArgument("derivative order too large for the probe resolution");
  }

  // Central stencil sum_k (-1)^k C(l,k) f(x + (l/2 - k) h) / h^l, probes kept inside [0,1].
  std::vector<double> coef(l + 1);
  for (int k = 0; k <= l; ++k) coef[k] = ((k % 2) ? -1.0 : 1.0) * binomial(l, k);
  const double half_reach = 0.5 * l * h;
  const double scale = std::pow(h, -l);

  std::vector<double> xs;
  std::vector<double> deriv;
  for (int j = 0; j <= n_probe; ++j) {
    const double x = static_cast<double>(j) * h;
    if (x - half_reach < -1e-15 || x + half_reach > 1.0 + 1e-15) continue;
    double acc = 0.0;
    for (int k = 0; k <= l; ++k) acc += coef[k] * f(x + (0.5 * l - k) * h);
    xs.push_back(x);
    deriv.push_back(acc * scale);
  }

  double best = 0.0;
  for (std::size_t a = 0; a < xs.size(); ++a) {
    for (std::size_t b = a + 1; b < xs.size() && xs[b] - xs[a] <= 0.1 + 1e-12; ++b) {
      best = std::max(best, std::abs(deriv[b] - deriv[a]) / std::pow(xs[b] - xs[a], alpha));
    }
  }
  return best;
}

}  // namespace modrec

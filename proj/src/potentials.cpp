#include "lifshitz/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lifshitz/errors.hpp"

namespace lifshitz {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double overlap(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

// Exact ∫ of the linear interpolant through (x0, f0), (x1, f1) over [lo, hi] ∩ [x0, x1].
double linear_segment_integral(double x0, double f0, double x1, double f1, double lo, double hi) {
  const double a = std::max(lo, x0);
  const double b = std::min(hi, x1);
  if (b <= a) return 0.0;
  const double slope = (f1 - f0) / (x1 - x0);
  const double fa = f0 + slope * (a - x0);
  const double fb = f0 + slope * (b - x0);
  return 0.5 * (fa + fb) * (b - a);
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& fs, double x) {
  if (x < xs.front() || x > xs.back()) return 0.0;
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return fs.back();
  const auto i = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return fs[i - 1] + w * (fs[i] - fs[i - 1]);
}

void require_grid(const std::vector<double>& xs, const char* what) {
  require(xs.size() >= 2, std::string(what) + ": need at least two grid points");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    require(xs[i] > xs[i - 1], std::string(what) + ": grid must be strictly increasing");
  }
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, const std::vector<double>& breakpoints,
                 double rel_tol) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] <= cuts[i - 1]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, cuts[i - 1], cuts[i], 30, rel_tol);
  }
  return total;
}

// ---------------------------------------------------------------- Profile

Profile Profile::indicator(double lo, double hi, double height) {
  require(lo < hi, "indicator profile: requires lo < hi");
  require(std::isfinite(height), "indicator profile: height must be finite");
  Profile p;
  p.kind_ = Kind::indicator;
  std::ostringstream os;
  os << "indicator[" << lo << "," << hi << "]*" << height;
  p.name_ = os.str();
  p.support_lo_ = lo;
  p.support_hi_ = hi;
  p.height_ = height;
  p.sup_norm_ = std::abs(height);
  p.breakpoints_ = {lo, hi};
  return p;
}

Profile Profile::quartic_bump() {
  return smooth(
      "quartic_bump",
      [](double x) {
        if (x < -0.5 || x > 0.5) return 0.0;
        const double q = 1.0 - 4.0 * x * x;
        return q * q;
      },
      -0.5, 0.5, 1.0);
}

Profile Profile::piecewise_linear(std::vector<double> xs, std::vector<double> fs) {
  require_grid(xs, "piecewise_linear profile");
  require(xs.size() == fs.size(), "piecewise_linear profile: x and f columns differ in length");
  Profile p;
  p.kind_ = Kind::piecewise_linear;
  p.name_ = "piecewise_linear(" + std::to_string(xs.size()) + " nodes)";
  p.support_lo_ = xs.front();
  p.support_hi_ = xs.back();
  for (double f : fs) {
    require(std::isfinite(f), "piecewise_linear profile: values must be finite");
    p.sup_norm_ = std::max(p.sup_norm_, std::abs(f));
  }
  p.breakpoints_ = xs;
  p.xs_ = std::move(xs);
  p.fs_ = std::move(fs);
  return p;
}

Profile Profile::from_csv(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "profile csv: cannot open " + path);
  std::vector<double> xs;
  std::vector<double> fs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x = 0.0;
    double f = 0.0;
    if (!(row >> x >> f)) {
      if (xs.empty()) continue;  // header
      throw ValidationError("profile csv: malformed row '" + line + "' in " + path);
    }
    xs.push_back(x);
    fs.push_back(f);
  }
  return piecewise_linear(std::move(xs), std::move(fs));
}

Profile Profile::smooth(std::string name, std::function<double(double)> f, double lo, double hi, double sup_norm) {
  require(lo < hi, "smooth profile: requires lo < hi");
  Profile p;
  p.kind_ = Kind::smooth;
  p.name_ = std::move(name);
  p.support_lo_ = lo;
  p.support_hi_ = hi;
  p.sup_norm_ = sup_norm;
  p.breakpoints_ = {lo, hi};
  p.fn_ = std::move(f);
  return p;
}

double Profile::operator()(double x) const {
  switch (kind_) {
    case Kind::indicator:
      return (x >= support_lo_ && x <= support_hi_) ? height_ : 0.0;
    case Kind::piecewise_linear:
      return interpolate(xs_, fs_, x);
    case Kind::smooth:
      return (x >= support_lo_ && x <= support_hi_) ? fn_(x) : 0.0;
  }
  return 0.0;
}

double Profile::integral(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  switch (kind_) {
    case Kind::indicator:
      return height_ * overlap(lo, hi, support_lo_, support_hi_);
    case Kind::piecewise_linear: {
      double total = 0.0;
      for (std::size_t i = 1; i < xs_.size(); ++i) {
        total += linear_segment_integral(xs_[i - 1], fs_[i - 1], xs_[i], fs_[i], lo, hi);
      }
      return total;
    }
    case Kind::smooth: {
      const double a = std::max(lo, support_lo_);
      const double b = std::min(hi, support_hi_);
      return integrate(fn_, a, b);
    }
  }
  return 0.0;
}

double Profile::integral_of_square() const {
  switch (kind_) {
    case Kind::indicator:
      return height_ * height_ * (support_hi_ - support_lo_);
    case Kind::piecewise_linear: {
      double total = 0.0;
      for (std::size_t i = 1; i < xs_.size(); ++i) {
        const double a = fs_[i - 1];
        const double b = fs_[i];
        total += (xs_[i] - xs_[i - 1]) * (a * a + a * b + b * b) / 3.0;
      }
      return total;
    }
    case Kind::smooth:
      return integrate([this](double x) { return fn_(x) * fn_(x); }, support_lo_, support_hi_);
  }
  return 0.0;
}

// ---------------------------------------------------------------- SingleSiteModel

SingleSiteModel SingleSiteModel::alloy(Profile f, CouplingRange range) {
  require(range.lower <= range.upper, "alloy model: coupling range must satisfy lower <= upper");
  return SingleSiteModel(AlloyModel{std::move(f)}, range);
}

SingleSiteModel SingleSiteModel::smooth_breather(Profile f, double lambda_min, double lambda_max) {
  require(lambda_min > 0.0, "smooth breather: lambda_min must be positive");
  require(lambda_min <= lambda_max, "smooth breather: requires lambda_min <= lambda_max");
  return SingleSiteModel(SmoothBreatherModel{std::move(f)}, {lambda_min, lambda_max});
}

SingleSiteModel SingleSiteModel::characteristic_breather() {
  return SingleSiteModel(CharacteristicBreatherModel{}, {0.0, 1.0});
}

SingleSiteModel SingleSiteModel::tabulated(std::vector<double> lambdas, std::vector<double> xs,
                                           std::vector<double> values) {
  require_grid(lambdas, "tabulated model (lambda axis)");
  require_grid(xs, "tabulated model (x axis)");
  require(values.size() == lambdas.size() * xs.size(), "tabulated model: values must have |lambdas|*|xs| entries");
  const CouplingRange range{lambdas.front(), lambdas.back()};
  return SingleSiteModel(TabulatedModel{std::move(lambdas), std::move(xs), std::move(values)}, range);
}

std::string SingleSiteModel::name() const {
  return std::visit(overloaded{
                        [](const AlloyModel& a) { return "alloy(" + a.f.name() + ")"; },
                        [](const SmoothBreatherModel& b) { return "smooth_breather(" + b.f.name() + ")"; },
                        [](const CharacteristicBreatherModel&) { return std::string("characteristic_breather"); },
                        [](const TabulatedModel&) { return std::string("tabulated"); },
                    },
                    kind_);
}

namespace {

// Row of a tabulated model at coupling λ, linear in λ between table rows.
std::vector<double> tabulated_row(const TabulatedModel& t, double lambda) {
  require(lambda >= t.lambdas.front() && lambda <= t.lambdas.back(),
          "tabulated model: coupling outside the tabulated range");
  const std::size_t nx = t.xs.size();
  auto it = std::upper_bound(t.lambdas.begin(), t.lambdas.end(), lambda);
  std::size_t i = it == t.lambdas.end() ? t.lambdas.size() - 1 : static_cast<std::size_t>(it - t.lambdas.begin());
  const double w = (lambda - t.lambdas[i - 1]) / (t.lambdas[i] - t.lambdas[i - 1]);
  std::vector<double> row(nx);
  for (std::size_t j = 0; j < nx; ++j) {
    row[j] = (1.0 - w) * t.values[(i - 1) * nx + j] + w * t.values[i * nx + j];
  }
  return row;
}

}  // namespace

double SingleSiteModel::value(double lambda, double t) const {
  const double x = t - 0.5;
  return std::visit(overloaded{
                        [&](const AlloyModel& a) { return lambda * a.f(x); },
                        [&](const SmoothBreatherModel& b) {
                          require(lambda > 0.0, "smooth breather: coupling must be positive");
                          return b.f(x / lambda);
                        },
                        [&](const CharacteristicBreatherModel&) { return (t > 0.0 && t <= lambda) ? 1.0 : 0.0; },
                        [&](const TabulatedModel& tab) { return interpolate(tab.xs, tabulated_row(tab, lambda), x); },
                    },
                    kind_);
}

double SingleSiteModel::integral(double lambda, double t0, double t1) const {
  if (!(t1 > t0)) return 0.0;
  const double x0 = t0 - 0.5;
  const double x1 = t1 - 0.5;
  return std::visit(overloaded{
                        [&](const AlloyModel& a) { return lambda * a.f.integral(x0, x1); },
                        [&](const SmoothBreatherModel& b) {
                          require(lambda > 0.0, "smooth breather: coupling must be positive");
                          return lambda * b.f.integral(x0 / lambda, x1 / lambda);
                        },
                        [&](const CharacteristicBreatherModel&) { return overlap(t0, t1, 0.0, lambda); },
                        [&](const TabulatedModel& tab) {
                          const auto row = tabulated_row(tab, lambda);
                          double total = 0.0;
                          for (std::size_t j = 1; j < tab.xs.size(); ++j) {
                            total += linear_segment_integral(tab.xs[j - 1], row[j - 1], tab.xs[j], row[j], x0, x1);
                          }
                          return total;
                        },
                    },
                    kind_);
}

double SingleSiteModel::cell_integral_of_square(double lambda) const {
  return std::visit(overloaded{
                        [&](const AlloyModel& a) { return lambda * lambda * a.f.integral_of_square(); },
                        [&](const SmoothBreatherModel& b) {
                          require(lambda > 0.0, "smooth breather: coupling must be positive");
                          return lambda * b.f.integral_of_square();
                        },
                        [&](const CharacteristicBreatherModel&) { return std::clamp(lambda, 0.0, 1.0); },
                        [&](const TabulatedModel& tab) {
                          const auto row = tabulated_row(tab, lambda);
                          double total = 0.0;
                          for (std::size_t j = 1; j < tab.xs.size(); ++j) {
                            const double lo = std::max(tab.xs[j - 1], -0.5);
                            const double hi = std::min(tab.xs[j], 0.5);
                            if (hi <= lo) continue;
                            const double slope = (row[j] - row[j - 1]) / (tab.xs[j] - tab.xs[j - 1]);
                            const double a = row[j - 1] + slope * (lo - tab.xs[j - 1]);
                            const double b = row[j - 1] + slope * (hi - tab.xs[j - 1]);
                            total += (hi - lo) * (a * a + a * b + b * b) / 3.0;
                          }
                          return total;
                        },
                    },
                    kind_);
}

// ---------------------------------------------------------------- RandomPotential

std::size_t RandomPotential::cell_of(double x) const {
  const int L = realization.L;
  const auto j = static_cast<long>(std::floor(x + half_length()));
  return static_cast<std::size_t>(std::clamp<long>(j, 0, L - 1));
}

double evaluate(const RandomPotential& W, double x) {
  const double half = W.half_length();
  require(std::isfinite(x) && x >= -half && x <= half, "evaluate: position outside Λ_L");
  const std::size_t j = W.cell_of(x);
  const double origin = -half + static_cast<double>(j);
  return W.model.value(W.realization.lambdas[j], x - origin);
}

std::vector<double> cell_averages(const RandomPotential& W, int m) {
  require(m >= 1, "cell_averages: m must be >= 1");
  const auto& lambdas = W.realization.lambdas;
  const std::size_t L = lambdas.size();
  const auto mm = static_cast<std::size_t>(m);
  std::vector<double> out(L * mm);
  const double h = 1.0 / m;

  if (W.model.is_characteristic_breather()) {
    for (std::size_t j = 0; j < L; ++j) {
      const double lambda = lambdas[j];
      for (std::size_t q = 0; q < mm; ++q) {
        const double t0 = static_cast<double>(q) / m;
        const double t1 = static_cast<double>(q + 1) / m;
        out[j * mm + q] = overlap(t0, t1, 0.0, lambda) * m;
      }
    }
    return out;
  }
  for (std::size_t j = 0; j < L; ++j) {
    for (std::size_t q = 0; q < mm; ++q) {
      const double t0 = static_cast<double>(q) / m;
      const double t1 = static_cast<double>(q + 1) / m;
      out[j * mm + q] = W.model.integral(lambdas[j], t0, t1) / h;
    }
  }
  return out;
}

Moments moments(const RandomPotential& W) {
  const auto& lambdas = W.realization.lambdas;
  Moments mo;
  if (lambdas.empty()) return mo;
  const auto n = static_cast<double>(lambdas.size());
  const double s_l = averages(W.realization).s_l;
  std::visit(overloaded{
                 [&](const CharacteristicBreatherModel&) {
                   // χ² = χ: both moments are the box average of the couplings.
                   mo.m1 = s_l;
                   mo.m2 = s_l;
                 },
                 [&](const AlloyModel& a) {
                   double sq = 0.0;
                   for (double lambda : lambdas) sq += lambda * lambda;
                   mo.m1 = s_l * a.f.total_integral();
                   mo.m2 = sq / n * a.f.integral_of_square();
                 },
                 [&](const SmoothBreatherModel& b) {
                   mo.m1 = s_l * b.f.total_integral();
                   mo.m2 = s_l * b.f.integral_of_square();
                 },
                 [&](const TabulatedModel&) {
                   double s1 = 0.0;
                   double s2 = 0.0;
                   for (double lambda : lambdas) {
                     s1 += W.model.cell_integral(lambda);
                     s2 += W.model.cell_integral_of_square(lambda);
                   }
                   mo.m1 = s1 / n;
                   mo.m2 = s2 / n;
                 },
             },
             W.model.kind());
  return mo;
}

// ---------------------------------------------------------------- Hypothesis A

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

double checked_value(const SingleSiteModel& model, double lambda, double x) {
  double u = 0.0;
  try {
    u = model.value(lambda, x + 0.5);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("check_hypothesis_a: model not evaluable on grid: ") + e.what());
  }
  if (!std::isfinite(u)) throw ValidationError("check_hypothesis_a: model not evaluable on grid (non-finite value)");
  return u;
}

struct QuotientMax {
  double kappa = 0.0;
  double lambda = 0.0;
  double x = 0.0;
};

// max over the grid of (u(λ, x) - u(λ₋, x)) / (λ - λ₋), λ ∈ ]λ₋, λ₋ + ε₂].
QuotientMax difference_quotient(const SingleSiteModel& model, double lambda_min, double eps2, int n_lambda, int n_x) {
  QuotientMax best;
  const auto lambdas = linspace(lambda_min, lambda_min + eps2, n_lambda);
  const auto xs = linspace(-0.5, 0.5, n_x);
  std::vector<double> base(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) base[k] = checked_value(model, lambda_min, xs[k]);
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    const double d = lambdas[i] - lambda_min;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double q = (checked_value(model, lambdas[i], xs[k]) - base[k]) / d;
      if (q > best.kappa) best = {q, lambdas[i], xs[k]};
    }
  }
  return best;
}

}  // namespace

HypothesisAReport check_hypothesis_a(const SingleSiteModel& model, int lambda_grid, int x_grid) {
  require(lambda_grid >= 16 && x_grid >= 16, "check_hypothesis_a: grids need at least 16 points each");
  HypothesisAReport report;
  report.lambda_grid = lambda_grid;
  report.x_grid = x_grid;

  const double lo = model.coupling_range().lower;
  const double hi = model.coupling_range().upper;
  require(hi > lo, "check_hypothesis_a: coupling range must be non-degenerate");
  const auto lambdas = linspace(lo, hi, lambda_grid);
  const auto xs = linspace(-0.5, 0.5, x_grid);
  constexpr double tol = 1e-12;

  // (a) supp u(λ, ·) ⊆ Λ₁
  for (double lambda : lambdas) {
    bool found = false;
    for (int k = 1; k <= x_grid && !found; ++k) {
      const double offset = 0.5 * k / x_grid;
      for (double x : {-0.5 - offset, 0.5 + offset}) {
        if (std::abs(checked_value(model, lambda, x)) > 0.0) {
          report.violations.push_back({"support", lambda, x, "u(lambda, x) != 0 outside Lambda_1"});
          found = true;
          break;
        }
      }
    }
    if (found) break;
  }

  // (b) u(λ, x) >= u(λ₋, x)
  [&] {
    for (double x : xs) {
      const double base = checked_value(model, lo, x);
      for (double lambda : lambdas) {
        const double u = checked_value(model, lambda, x);
        if (u < base - tol * (1.0 + std::abs(base))) {
          report.violations.push_back({"monotonicity", lambda, x, "u(lambda, x) < u(lambda_min, x)"});
          return;
        }
      }
    }
  }();

  // (c) integral lower bounds with ε₂ = (λ₊ - λ₋)/2
  const double eps2 = 0.5 * (hi - lo);
  report.epsilon2 = eps2;
  {
    const double base = model.cell_integral(lo);
    double eps1 = INFINITY;
    double witness = lo;
    for (double lambda : linspace(lo, lo + eps2, lambda_grid)) {
      if (lambda <= lo) continue;
      const double ratio = (model.cell_integral(lambda) - base) / (lambda - lo);
      if (ratio < eps1) {
        eps1 = ratio;
        witness = lambda;
      }
    }
    bool ok = eps1 > 0.0;
    if (!ok) {
      report.violations.push_back(
          {"integral_lower_bound", witness, 0.0, "no positive epsilon1 on ]lambda_min, lambda_min + epsilon2]"});
    }
    const double mid = model.cell_integral(lo + eps2);
    for (double lambda : linspace(lo + eps2, hi, lambda_grid)) {
      if (model.cell_integral(lambda) < mid - tol * (1.0 + std::abs(mid))) {
        report.violations.push_back(
            {"integral_lower_bound", lambda, 0.0, "integral of u(lambda) below integral at lambda_min + epsilon2"});
        ok = false;
        break;
      }
    }
    if (ok) report.epsilon1 = eps1;
  }

  // (d) Lipschitz at λ₋: the grid κ must stay bounded under two nested refinements.
  {
    const auto k1 = difference_quotient(model, lo, eps2, lambda_grid, x_grid);
    const auto k2 = difference_quotient(model, lo, eps2, 2 * lambda_grid - 1, 2 * x_grid - 1);
    const auto k4 = difference_quotient(model, lo, eps2, 4 * lambda_grid - 3, 4 * x_grid - 3);
    constexpr double growth = 1.5;
    if (k2.kappa > growth * k1.kappa && k4.kappa > growth * k2.kappa) {
      std::ostringstream os;
      os << "difference quotient unbounded near lambda_min: grid kappa " << k1.kappa << " -> " << k2.kappa << " -> "
         << k4.kappa << " under refinement";
      report.violations.push_back({"lipschitz", k4.lambda, k4.x, os.str()});
    } else {
      report.kappa = k4.kappa;
    }
  }

  report.passes = report.violations.empty();
  return report;
}

}  // namespace lifshitz

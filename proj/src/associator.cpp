#include "kza/associator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace kza {

namespace {

constexpr double kPi = std::numbers::pi;

void require_regulator(double v) {
  if (!(v > 0.0 && v <= 0.25))
    throw std::domain_error("regulator must lie in ]0, 1/4]");
}

PiecewisePath half_path_upper(double eps) {
  // 1 - (1/2) exp(ln(2 eps) s), joining 1/2 -> 1 - eps
  double l = std::log(2.0 * eps);
  return smooth_path(
      1, [l](double s) { return PointC{Cplx(1.0 - 0.5 * std::exp(l * s), 0.0)}; },
      [l](double s) { return PointC{Cplx(-0.5 * l * std::exp(l * s), 0.0)}; });
}

TruncatedSeries reduce_residual(const TruncatedSeries& x, const BraidPresentation* quotient,
                                std::vector<double>* norms) {
  if (quotient) {
    ReducedForm f = reduce_mod_ideal(x, *quotient);
    if (norms) *norms = f.residual_norm;
    return f.residual;
  }
  if (norms) *norms = x.sup_norm().per_degree;
  return x;
}

void require_central(const AlgebraElement& lambda, const AlgebraElement& x,
                     const BraidPresentation* quotient, const char* what) {
  AlgebraElement c = AlgebraElement::commutator(lambda, x);
  double norm = quotient ? reduce_element_mod_ideal(c, *quotient).sup_norm()
                         : c.sup_norm();
  double scale = std::max(1.0, lambda.sup_norm() * x.sup_norm());
  if (norm > 1e-9 * scale) throw precondition_error(what);
}

}  // namespace

std::vector<double> dyadic_grid(int k_min, int k_max) {
  if (k_max < k_min) std::swap(k_min, k_max);
  std::vector<double> g;
  for (int k = k_min; k <= k_max; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

TruncatedSeries phi_sample(const AlgebraElement& a, const AlgebraElement& b, double delta,
                           double eps, int order, int steps, AlphabetPtr alphabet) {
  require_regulator(delta);
  require_regulator(eps);
  FormalConnection conn = interval_connection(a, b, alphabet);
  PiecewisePath path = affine_path({Cplx(delta, 0.0)}, {Cplx(1.0 - eps, 0.0)});
  Propagator w = propagate(pull_back_to_path(conn, path), 0.0, 1.0, order, steps);
  TruncatedSeries left = exp_linear(-std::log(eps), b, order, alphabet);
  TruncatedSeries right = exp_linear(std::log(delta), a, order, alphabet);
  return left * w.value * right;
}

HalfPathFactor psi_half(const AlgebraElement& b, const AlgebraElement& a, double eps,
                        int order, int steps, AlphabetPtr alphabet) {
  require_regulator(eps);
  FormalConnection conn = interval_connection(a, b, alphabet);
  Propagator w =
      propagate(pull_back_to_path(conn, half_path_upper(eps)), 0.0, 1.0, order, steps);
  HalfPathFactor f;
  f.epsilon = eps;
  f.value = exp_linear(-std::log(eps), b, order, alphabet) * w.value;
  return f;
}

TruncatedSeries richardson_extrapolate(const std::vector<double>& grid,
                                       const std::vector<TruncatedSeries>& samples,
                                       int points) {
  if (grid.size() != samples.size() || samples.empty())
    throw std::invalid_argument("grid and sample sizes differ");
  int m = std::min<int>(points, (int)samples.size());
  int off = (int)samples.size() - m;
  int order = samples.front().order();
  const AlphabetPtr& alphabet = samples.front().alphabet();

  TruncatedSeries out(order, alphabet);
  for (int r = 0; r <= order; ++r) {
    // union of words appearing in the used samples at this degree
    std::vector<Word> words;
    for (int i = off; i < (int)samples.size(); ++i)
      for (const auto& t : samples[i].coeff(r).terms()) words.push_back(t.first);
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());

    AlgebraElement e;
    for (const Word& w : words) {
      std::vector<Cplx> t(m);
      for (int i = 0; i < m; ++i) t[i] = samples[off + i].coeff(r).coeff(w);
      // Iterated elimination toward 0 through adjacent nodes. Repeated
      // first-order passes grind down the delta * ln^p(delta) tails
      // (one pass per log power, which grows with the lambda degree);
      // the remaining passes remove genuine powers delta^2, delta^3, ...
      int levels = std::min(m - 1, points - 1);
      int first_order = std::min(std::max(2, r), levels);
      for (int lvl = 1; lvl <= levels; ++lvl) {
        int p = lvl <= first_order ? 1 : lvl - first_order + 1;
        for (int i = 0; i + lvl < m; ++i) {
          double xi = std::pow(grid[off + i + lvl - 1], p);
          double xj = std::pow(grid[off + i + lvl], p);
          t[i] = (xi * t[i + 1] - xj * t[i]) / (xi - xj);
        }
      }
      e += AlgebraElement::single_term(w, t[0]);
    }
    out.set_coeff(r, std::move(e));
  }
  out.normalize();
  return out;
}

AssociatorEstimate phi_limit(const AlgebraElement& a, const AlgebraElement& b, int order,
                             const std::vector<double>& grid, int steps,
                             AlphabetPtr alphabet, bool richardson) {
  if (grid.empty()) throw std::invalid_argument("empty regulator grid");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (grid[i + 1] >= grid[i])
      throw std::invalid_argument("regulator grid must decrease strictly");
  AssociatorEstimate est;
  est.order = order;
  est.grid = grid;
  for (double d : grid) {
    // sample through the half-path factorization: the half-path integrands
    // stay smooth on the whole grid, unlike the raw affine pullback
    HalfPathFactor up = psi_half(b, a, d, order, steps, alphabet);
    HalfPathFactor dn = psi_half(a, b, d, order, steps, alphabet);
    est.samples.push_back(up.value * invert_group(dn.value));
  }
  for (std::size_t i = 0; i + 1 < est.samples.size(); ++i)
    est.convergence.push_back(
        (est.samples[i + 1] - est.samples[i]).sup_norm().per_degree);
  est.converged = convergence_flag(est.convergence);
  est.extrapolated =
      richardson ? richardson_extrapolate(grid, est.samples) : est.samples.back();
  return est;
}

bool convergence_flag(const std::vector<std::vector<double>>& table) {
  if (table.size() < 2) return true;
  double last = 0.0, prev = 0.0;
  for (double v : table.back()) last = std::max(last, v);
  for (double v : table[table.size() - 2]) prev = std::max(prev, v);
  return last <= prev || last < 1e-12;
}

LbhDiagnostics classify_lbh(const std::vector<double>& grid,
                            const std::vector<TruncatedSeries>& values) {
  if (grid.size() != values.size() || grid.size() < 5)
    throw std::invalid_argument("classification needs at least five grid points");
  LbhDiagnostics diag;
  diag.grid = grid;
  int order = values.front().order();
  diag.norms.assign(order + 1, std::vector<double>(grid.size(), 0.0));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SeriesNorm n = values[i].sup_norm();
    for (int r = 0; r <= order; ++r) diag.norms[r][i] = n.per_degree[r];
  }

  auto linear_fit = [](const std::vector<double>& x, const std::vector<double>& y,
                       double& a0, double& a1) {
    // least squares y = a0 + a1 x, returns SSE
    double n = (double)x.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-30) { a0 = sy / n; a1 = 0.0; }
    else { a1 = (n * sxy - sx * sy) / det; a0 = (sy - a1 * sx) / n; }
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double e = y[i] - a0 - a1 * x[i];
      sse += e * e;
    }
    return sse;
  };

  for (int r = 0; r <= order; ++r) {
    const auto& y = diag.norms[r];
    LbhFit fit;
    std::vector<double> lx, llx, ly;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (y[i] <= 0.0) continue;
      lx.push_back(std::log(grid[i]));
      llx.push_back(std::log(-std::log(grid[i])));
      ly.push_back(std::log(y[i]));
    }
    if (ly.size() < 3) {
      fit.cls = LbhClass::B;
      fit.scale = 0.0;
      for (double v : y) fit.scale = std::max(fit.scale, v);
      diag.per_degree.push_back(fit);
      continue;
    }
    double mean = 0;
    for (double v : ly) mean += v;
    mean /= (double)ly.size();
    double sse_b = 0;
    for (double v : ly) sse_b += (v - mean) * (v - mean);
    double c_l, alpha, c_h, beta;
    double sse_l = linear_fit(llx, ly, c_l, alpha);
    double sse_h = linear_fit(lx, ly, c_h, beta);
    double rms_b = std::sqrt(sse_b / (double)ly.size());

    bool tail_decreasing = y.size() >= 2 && y[y.size() - 1] < y[y.size() - 2];
    bool l_valid = alpha > 0.0;
    bool h_valid = beta > 0.0 && tail_decreasing;

    if (rms_b < 0.05 || (!l_valid && !h_valid)) {
      fit.cls = LbhClass::B;
      fit.scale = std::exp(mean);
      fit.rms = rms_b;
    } else if (h_valid && (!l_valid || sse_h <= sse_l)) {
      fit.cls = LbhClass::H;
      fit.scale = std::exp(c_h);
      fit.exponent = beta;
      fit.rms = std::sqrt(sse_h / (double)ly.size());
    } else {
      fit.cls = LbhClass::L;
      fit.scale = std::exp(c_l);
      fit.exponent = alpha;
      fit.rms = std::sqrt(sse_l / (double)ly.size());
    }
    diag.per_degree.push_back(fit);
  }
  return diag;
}

TruncatedSeries hexagon_remainder(double delta, const AlgebraElement& a,
                                  const AlgebraElement& b, int order, int steps,
                                  AlphabetPtr alphabet) {
  HexagonPaths paths = hexagon_paths(delta);
  FormalConnection conn = punctured_plane_connection(a, b, alphabet);
  PulledBackField field = pull_back_to_path(conn, paths.legs[1]);

  PulledBackField y0;
  y0.alphabet = alphabet;
  y0.summands.push_back({[](double) { return Cplx(0.0, kPi); }, b});

  PulledBackField z = field;
  z.summands.push_back({[](double) { return Cplx(0.0, -kPi); }, b});

  auto [u, xi] = factorize(y0, z, 0.0, 1.0, order, steps);
  return xi.value;
}

namespace {

struct LimitPhi {
  AssociatorEstimate est;
  TruncatedSeries value;
};

LimitPhi limit_phi(const AlgebraElement& x, const AlgebraElement& y, int order,
                   const std::vector<double>& grid, int steps,
                   const AlphabetPtr& alphabet) {
  LimitPhi p{phi_limit(x, y, order, grid, steps, alphabet, true), TruncatedSeries()};
  p.value = p.est.extrapolated;
  return p;
}

}  // namespace

VerifyReport verify_hexagon(const AlgebraElement& a, const AlgebraElement& b,
                            const AlgebraElement& c, const BraidPresentation* quotient,
                            VerifyMode mode, int order, double tol, int steps,
                            const std::vector<double>& grid, AlphabetPtr alphabet) {
  auto t0 = std::chrono::steady_clock::now();
  AlgebraElement lambda = a + b + c;
  require_central(lambda, a, quotient, "A + B + C is not central for A");
  require_central(lambda, b, quotient, "A + B + C is not central for B");
  require_central(lambda, c, quotient, "A + B + C is not central for C");

  VerifyReport rep;
  rep.identity = "hexagon";
  rep.tolerance = tol;

  TruncatedSeries defect(order, alphabet);
  if (mode == VerifyMode::FiniteDelta) {
    rep.mode = "finite-delta";
    double delta = grid.empty() ? 0.125 : grid.front();
    rep.delta = delta;
    HexagonPaths paths = hexagon_paths(delta);
    FormalConnection conn = punctured_plane_connection(a, b, alphabet);
    Propagator w = propagate(pull_back_to_path(conn, paths.loop), 0.0, 1.0, order, steps);
    defect = w.value - TruncatedSeries::one(order, alphabet);
  } else {
    rep.mode = "limit";
    rep.grid = grid;
    LimitPhi p_ab = limit_phi(a, b, order, grid, steps, alphabet);
    LimitPhi p_bc = limit_phi(b, c, order, grid, steps, alphabet);
    LimitPhi p_ca = limit_phi(c, a, order, grid, steps, alphabet);
    rep.convergence = p_ab.est.convergence;
    TruncatedSeries rhs = exp_linear(Cplx(0.0, kPi), a, order, alphabet) * p_ca.value *
                          exp_linear(Cplx(0.0, kPi), c, order, alphabet) * p_bc.value *
                          exp_linear(Cplx(0.0, kPi), b, order, alphabet) * p_ab.value;
    TruncatedSeries lhs = exp_linear(Cplx(0.0, kPi), lambda, order, alphabet);
    defect = rhs - lhs;
  }
  reduce_residual(defect, quotient, &rep.residual_per_degree);
  SeriesNorm n = defect.sup_norm();
  rep.pass = true;
  for (int r = 0; r <= order; ++r) {
    rep.max_residual = std::max(rep.max_residual, rep.residual_per_degree[r]);
    if (rep.residual_per_degree[r] > tol * std::max(1.0, n.per_degree[r]))
      rep.pass = false;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

VerifyReport verify_pentagon(const std::vector<AlgebraElement>& images,
                             const BraidPresentation* quotient, VerifyMode mode,
                             int order, double tol, int steps,
                             const std::vector<double>& grid, AlphabetPtr alphabet) {
  auto t0 = std::chrono::steady_clock::now();
  if (images.size() != 6)
    throw std::invalid_argument("expected six images A_12,A_13,A_14,A_23,A_24,A_34");

  // the images must satisfy the braid relations in the target quotient
  BraidPresentation reference(4);
  for (const auto& rel : reference.relations()) {
    AlgebraElement value = substitute_element(to_complex(rel), images);
    double norm = quotient ? reduce_element_mod_ideal(value, *quotient).sup_norm()
                           : value.sup_norm();
    if (norm > 1e-9) throw precondition_error("images violate the braid relations");
  }

  VerifyReport rep;
  rep.identity = "pentagon";
  rep.tolerance = tol;

  const AlgebraElement& a12 = images[0];
  const AlgebraElement& a13 = images[1];
  const AlgebraElement& a23 = images[3];
  const AlgebraElement& a24 = images[4];
  const AlgebraElement& a34 = images[5];

  TruncatedSeries defect(order, alphabet);
  if (mode == VerifyMode::FiniteDelta) {
    rep.mode = "finite-delta";
    double delta = grid.empty() ? 0.125 : grid.front();
    rep.delta = delta;
    PentagonPaths paths = pentagon_paths(delta);
    FormalConnection conn = pentagon_connection(images, alphabet);
    auto transport = [&](const PiecewisePath& p) {
      return propagate(pull_back_to_path(conn, p), 0.0, 1.0, order, steps);
    };
    Propagator w1 = transport(paths.legs[0]);
    Propagator w2 = transport(paths.legs[1]);
    Propagator w3 = transport(paths.legs[2]);
    Propagator w4 = transport(paths.legs[3]);
    Propagator w5 = transport(paths.legs[4]);
    TruncatedSeries left = compose_transports(w5, w4).value;
    TruncatedSeries right = compose_transports(w3, compose_transports(w2, w1)).value;
    defect = left - right;
  } else {
    rep.mode = "limit";
    rep.grid = grid;
    LimitPhi f1 = limit_phi(a12, a23 + a24, order, grid, steps, alphabet);
    LimitPhi f2 = limit_phi(a13 + a23, a34, order, grid, steps, alphabet);
    LimitPhi g1 = limit_phi(a23, a34, order, grid, steps, alphabet);
    LimitPhi g2 = limit_phi(a12 + a13, a24 + a34, order, grid, steps, alphabet);
    LimitPhi g3 = limit_phi(a12, a23, order, grid, steps, alphabet);
    rep.convergence = f1.est.convergence;
    defect = f1.value * f2.value - g1.value * g2.value * g3.value;
  }
  reduce_residual(defect, quotient, &rep.residual_per_degree);
  SeriesNorm n = defect.sup_norm();
  rep.pass = true;
  for (int r = 0; r <= order; ++r) {
    rep.max_residual = std::max(rep.max_residual, rep.residual_per_degree[r]);
    if (rep.residual_per_degree[r] > tol * std::max(1.0, n.per_degree[r]))
      rep.pass = false;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace kza

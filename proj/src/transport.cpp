#include "kza/transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kza {

namespace {

bool finite(const Cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

using ComponentEval = std::function<void(double, std::vector<AlgebraElement>&)>;

// One ascending Picard sweep. Composite Simpson per panel; midpoint values
// for the next degree come from the half-panel rule on the same stencil.
TruncatedSeries sweep(const ComponentEval& eval, int ncomp, double lo, double hi,
                      const std::vector<double>& singular, int order, int steps,
                      const AlphabetPtr& alphabet, QuadratureInfo* info) {
  std::vector<double> cuts{lo};
  for (double d : singular)
    if (d > lo + 1e-14 && d < hi - 1e-14) cuts.push_back(d);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  if (info) info->segments = (int)cuts.size() - 1;

  TruncatedSeries total = TruncatedSeries::one(order, alphabet);
  std::vector<AlgebraElement> ya(ncomp), ym(ncomp), yb(ncomp);
  std::vector<AlgebraElement> curA(order + 1), curM(order + 1), curB(order + 1);

  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    double a0 = cuts[seg], b0 = cuts[seg + 1];
    double h = (b0 - a0) / steps;
    for (int r = 0; r <= order; ++r) {
      curA[r] = r == 0 ? AlgebraElement::unit() : AlgebraElement();
    }
    // fields have one-sided limits at breakpoints; sample segment ends
    // from inside the segment
    eval(std::nextafter(a0, b0), ya);
    for (int j = 0; j < steps; ++j) {
      double xa = a0 + j * h;
      double xm = xa + 0.5 * h;
      double xb = (j + 1 == steps) ? std::nextafter(b0, a0) : xa + h;
      eval(xm, ym);
      eval(xb, yb);
      if (info) ++info->panels;

      curM[0] = AlgebraElement::unit();
      curB[0] = AlgebraElement::unit();
      for (int r = 1; r <= order; ++r) {
        AlgebraElement ga, gm, gb;
        for (int c = 0; c < ncomp && c <= r - 1; ++c) {
          if (!ya[c].is_zero() && !curA[r - 1 - c].is_zero()) ga += ya[c] * curA[r - 1 - c];
          if (!ym[c].is_zero() && !curM[r - 1 - c].is_zero()) gm += ym[c] * curM[r - 1 - c];
          if (!yb[c].is_zero() && !curB[r - 1 - c].is_zero()) gb += yb[c] * curB[r - 1 - c];
        }
        curM[r] = curA[r] + (ga * Cplx(5.0 * h / 24.0) + gm * Cplx(8.0 * h / 24.0) -
                             gb * Cplx(h / 24.0));
        curB[r] = curA[r] +
                  (ga * Cplx(h / 6.0) + gm * Cplx(4.0 * h / 6.0) + gb * Cplx(h / 6.0));
      }
      std::swap(curA, curB);
      std::swap(ya, yb);
    }
    TruncatedSeries segprop(order, alphabet);
    for (int r = 0; r <= order; ++r) segprop.set_coeff(r, curA[r]);
    total = segprop * total;
  }
  total.normalize();
  return total;
}

ComponentEval plain_eval(const PulledBackField& field) {
  return [&field](double s, std::vector<AlgebraElement>& out) {
    AlgebraElement y;
    for (const auto& sm : field.summands) {
      Cplx v = sm.f(s);
      if (!finite(v))
        throw std::domain_error("field sampler is not finite inside the range");
      y += sm.weight * v;
    }
    out[0] = std::move(y);
  };
}

Propagator run_propagate(const ComponentEval& eval, int ncomp,
                         const PulledBackField& field, double alpha, double beta,
                         int order, int steps) {
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0)
    throw std::invalid_argument("parameters must lie in [0,1]");
  Propagator w;
  w.from_param = alpha;
  w.to_param = beta;
  if (field.path) {
    w.from_point = field.path->eval(alpha);
    w.to_point = field.path->eval(beta);
  }
  if (alpha == beta) {
    w.value = TruncatedSeries::one(order, field.alphabet);
    return w;
  }
  double lo = std::min(alpha, beta), hi = std::max(alpha, beta);
  TruncatedSeries v = sweep(eval, ncomp, lo, hi, field.singular_set, order, steps,
                            field.alphabet, &w.quadrature);
  if (beta < alpha) v = invert_group(v);
  w.value = std::move(v);
  return w;
}

}  // namespace

PulledBackField constant_field(const AlgebraElement& a, AlphabetPtr alphabet) {
  PulledBackField f;
  f.alphabet = std::move(alphabet);
  f.summands.push_back({[](double) { return Cplx(1.0, 0.0); }, a});
  return f;
}

Propagator propagate(const PulledBackField& field, double alpha, double beta, int order,
                     int steps, const PropagateOptions& opts) {
  Propagator w = run_propagate(plain_eval(field), 1, field, alpha, beta, order, steps);
  if (opts.estimate_error && steps >= 2 && alpha != beta) {
    Propagator half =
        run_propagate(plain_eval(field), 1, field, alpha, beta, order, steps / 2);
    w.quadrature.estimated_error = max_defect(w.value, half.value);
  }
  return w;
}

Propagator compose_transports(const Propagator& w2, const Propagator& w1,
                              double endpoint_tol) {
  if (!w1.to_point.empty() && !w2.from_point.empty()) {
    if (point_distance(w1.to_point, w2.from_point) > endpoint_tol)
      throw std::invalid_argument("transport composition endpoint mismatch");
  } else if (w1.to_point.empty() != w2.from_point.empty()) {
    throw std::invalid_argument("cannot compose transports with and without geometry");
  }
  Propagator r;
  r.value = w2.value * w1.value;
  r.from_param = w1.from_param;
  r.to_param = w2.to_param;
  r.from_point = w1.from_point;
  r.to_point = w2.to_point;
  r.quadrature.segments = w1.quadrature.segments + w2.quadrature.segments;
  r.quadrature.panels = w1.quadrature.panels + w2.quadrature.panels;
  return r;
}

Propagator invert_transport(const Propagator& w) {
  Propagator r;
  r.value = invert_group(w.value);
  r.from_param = w.to_param;
  r.to_param = w.from_param;
  r.from_point = w.to_point;
  r.to_point = w.from_point;
  r.quadrature = w.quadrature;
  return r;
}

std::pair<Propagator, Propagator> factorize(const PulledBackField& y0,
                                            const PulledBackField& z, double alpha,
                                            double beta, int order, int steps) {
  if (y0.summands.size() != 1)
    throw std::invalid_argument("closed-form factor must be a single summand");
  double lo = std::min(alpha, beta), hi = std::max(alpha, beta);
  const auto& sm = y0.summands.front();
  Cplx c0 = sm.f(lo + 0.5 * (hi - lo));
  for (int i = 0; i <= 32; ++i) {
    Cplx v = sm.f(lo + (hi - lo) * i / 32.0);
    if (std::abs(v - c0) > 1e-12 * std::max(1.0, std::abs(c0)))
      throw std::invalid_argument("closed-form factor must have a constant coefficient");
  }
  const AlgebraElement& a0 = sm.weight;

  // powers A0^p / p!
  std::vector<AlgebraElement> pw(order + 1);
  pw[0] = AlgebraElement::unit();
  for (int p = 1; p <= order; ++p) pw[p] = pw[p - 1] * a0 * Cplx(1.0 / p);

  int ncomp = order;  // components 0..order-1 feed degrees 1..order
  ComponentEval eval = [&](double s, std::vector<AlgebraElement>& out) {
    AlgebraElement zval;
    for (const auto& zs : z.summands) {
      Cplx v = zs.f(s);
      if (!finite(v))
        throw std::domain_error("field sampler is not finite inside the range");
      zval += zs.weight * v;
    }
    Cplx u = c0 * (s - alpha);
    // conjugation exp(-lambda u A0) Z exp(lambda u A0), graded by lambda
    std::vector<AlgebraElement> left(out.size()), right(out.size());
    Cplx up = Cplx(1.0, 0.0);
    for (std::size_t p = 0; p < out.size(); ++p) {
      right[p] = pw[p] * up;
      left[p] = pw[p] * (p % 2 == 0 ? up : -up);
      up *= u;
    }
    for (std::size_t j = 0; j < out.size(); ++j) {
      AlgebraElement comp;
      for (std::size_t p = 0; p <= j; ++p) comp += left[p] * zval * right[j - p];
      out[j] = std::move(comp);
    }
  };

  PulledBackField merged;
  merged.alphabet = z.alphabet ? z.alphabet : y0.alphabet;
  merged.path = z.path ? z.path : y0.path;
  merged.singular_set = z.singular_set;
  for (double d : y0.singular_set) merged.singular_set.push_back(d);
  std::sort(merged.singular_set.begin(), merged.singular_set.end());

  Propagator xi = run_propagate(eval, ncomp > 0 ? ncomp : 1, merged, alpha, beta, order,
                                steps);
  Propagator u;
  u.from_param = alpha;
  u.to_param = beta;
  u.from_point = xi.from_point;
  u.to_point = xi.to_point;
  u.value = exp_linear(c0 * (beta - alpha), a0, order, merged.alphabet);
  return {std::move(u), std::move(xi)};
}

}  // namespace kza

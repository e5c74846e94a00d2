#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "kza/path.hpp"
#include "kza/series.hpp"

namespace kza {

// Field of a formal linear ODE dW/ds = lambda Y(s) W on [0,1]:
// Y(s) = sum_k f_k(s) A_k with degree-0 coefficients A_k.
struct PulledBackField {
  struct Summand {
    std::function<Cplx(double)> f;
    AlgebraElement weight;
  };

  std::vector<Summand> summands;
  std::vector<double> singular_set{0.0, 1.0};
  AlphabetPtr alphabet;
  std::shared_ptr<const PiecewisePath> path;  // optional geometry for endpoints

  AlgebraElement eval(double s) const {
    AlgebraElement y;
    for (const auto& sm : summands) y += sm.weight * sm.f(s);
    return y;
  }
};

PulledBackField constant_field(const AlgebraElement& a, AlphabetPtr alphabet);

struct QuadratureInfo {
  int segments = 0;
  long long panels = 0;
  double estimated_error = -1.0;  // negative when not estimated
};

// Value of the fundamental solution at beta, normalized to 1 at alpha.
struct Propagator {
  TruncatedSeries value;
  double from_param = 0.0;
  double to_param = 1.0;
  PointC from_point;  // empty when the field carries no geometry
  PointC to_point;
  QuadratureInfo quadrature;
};

struct PropagateOptions {
  bool estimate_error = false;  // extra half-resolution sweep
};

// Order-by-order Picard integration with composite Simpson panels per
// smooth piece; orientation alpha > beta handled through the group inverse.
Propagator propagate(const PulledBackField& field, double alpha, double beta, int order,
                     int steps, const PropagateOptions& opts = {});

// series product w2 * w1 with endpoint compatibility check
Propagator compose_transports(const Propagator& w2, const Propagator& w1,
                              double endpoint_tol = 1e-10);

Propagator invert_transport(const Propagator& w);

// Splits Y = Y0 + Z where Y0 = c0 * A0 has a constant scalar coefficient:
// U(s) = exp(lambda c0 (s - alpha) A0) and Xi solves the conjugated ODE
// dXi/ds = lambda (U^-1 Z U) Xi. Returns (U at beta, Xi at beta).
std::pair<Propagator, Propagator> factorize(const PulledBackField& y0,
                                            const PulledBackField& z, double alpha,
                                            double beta, int order, int steps);

}  // namespace kza

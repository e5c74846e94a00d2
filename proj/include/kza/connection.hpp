#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "kza/path.hpp"
#include "kza/transport.hpp"

namespace kza {

// Connection sum_i Gamma_i(x) dx_i with rational coefficient functions.
// Every term carries analytic partial derivatives; nothing is ever
// differentiated numerically.
struct FormalConnection {
  struct Term {
    int axis;
    std::function<Cplx(const PointC&)> coeff;
    std::vector<std::function<Cplx(const PointC&)>> dcoeff;  // d coeff / d x_j
    AlgebraElement weight;
  };

  int dimension = 1;
  std::vector<Term> terms;
  std::function<bool(const PointC&)> admissible;
  AlphabetPtr alphabet;

  AlgebraElement component(int axis, const PointC& x) const {
    AlgebraElement g;
    for (const auto& t : terms)
      if (t.axis == axis) g += t.weight * t.coeff(x);
    return g;
  }
};

// flatness defect d Gamma_i / d x_j - d Gamma_j / d x_i + lambda [Gamma_i, Gamma_j],
// collapsed to one algebra element (the bracket sits at word degree 2)
struct CurvatureSample {
  PointC point;
  int axis_i = 0;
  int axis_j = 0;
  AlgebraElement value;
};

// (A/x + B/(x-1)) dx on the real interval ]0,1[
FormalConnection interval_connection(const AlgebraElement& a, const AlgebraElement& b,
                                     AlphabetPtr alphabet);

// same coefficients on the doubly punctured complex plane
FormalConnection punctured_plane_connection(const AlgebraElement& a,
                                            const AlgebraElement& b, AlphabetPtr alphabet);

// sum_{i<j} A_ij / (z_i - z_j) (dz_i - dz_j) on distinct configurations;
// images indexed like the braid alphabet pairs (1,2),(1,3),...
FormalConnection kz_connection(int n, const std::vector<AlgebraElement>& images,
                               AlphabetPtr alphabet);

// restriction of the n=4 case to x1=0, x4=1 on the open triangle 0<x2<x3<1;
// images indexed by pairs (1,2),(1,3),(1,4),(2,3),(2,4),(3,4)
FormalConnection pentagon_connection(const std::vector<AlgebraElement>& images,
                                     AlphabetPtr alphabet);

CurvatureSample curvature(const FormalConnection& conn, const PointC& x, int axis_i,
                          int axis_j);

// Y(s) = sum_i Gamma_i(c(s)) c_i'(s); the path must stay admissible
PulledBackField pull_back_to_path(const FormalConnection& conn, const PiecewisePath& c);

// Moebius map z -> 1/(1-z) implementing the 3-cycle on the punctured plane
Cplx zeta_map(Cplx z);
Cplx zeta_inverse_map(Cplx z);

struct HexagonPaths {
  double delta;
  std::vector<PiecewisePath> legs;  // six legs, in composition order
  PiecewisePath loop;               // six-fold composition, based at delta

  HexagonPaths(double d, std::vector<PiecewisePath> l, PiecewisePath lp)
      : delta(d), legs(std::move(l)), loop(std::move(lp)) {}
};

// Interval segment delta -> 1-delta, its two zeta images, and the three
// lower half circles closing the loop around 0 and 1.
HexagonPaths hexagon_paths(double delta);

struct PentagonPaths {
  double delta;
  std::vector<PiecewisePath> legs;        // I..V joining the zone points
  std::vector<PiecewisePath> half_paths;  // I-1, I-2, II-1, II-2, IV-1, IV-2
  std::vector<std::string> half_names;
  std::vector<PointC> zone_points;        // p1..p5

  PentagonPaths(double d) : delta(d) {}
};

// Affine edges between the five zone points of the open triangle plus the
// exponential half-paths with scales delta, delta^2 and delta(1-delta/2).
PentagonPaths pentagon_paths(double delta);

// distance from a point to the connection's singular locus, used by the
// path constructors to assert an admissibility margin
double hexagon_margin(const PointC& z);
double pentagon_margin(const PointC& x);

}  // namespace kza

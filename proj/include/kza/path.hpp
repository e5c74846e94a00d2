#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "kza/algebra.hpp"

namespace kza {

using PointC = std::vector<Cplx>;

double point_distance(const PointC& a, const PointC& b);

// Continuous piecewise-smooth curve [0,1] -> C^m. Each piece carries value
// and derivative samplers in the global parameter; the singular set lists
// all breakpoints including 0 and 1.
class PiecewisePath {
public:
  struct Piece {
    double a, b;  // closed parameter subinterval
    std::function<PointC(double)> value;
    std::function<PointC(double)> deriv;
  };

  PiecewisePath(int dimension, std::vector<Piece> pieces);

  int dimension() const { return dim_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<double>& singular_set() const { return singular_; }

  PointC eval(double s) const;
  PointC deriv(double s) const;
  PointC start() const { return eval(0.0); }
  PointC end() const { return eval(1.0); }

  bool is_loop(double tol = 1e-10) const { return point_distance(start(), end()) <= tol; }

  // left/right values at interior breakpoints must agree
  void check_continuity(double tol = 1e-12) const;

private:
  int dim_;
  std::vector<Piece> pieces_;
  std::vector<double> singular_;
};

PiecewisePath affine_path(const PointC& from, const PointC& to);
PiecewisePath constant_path(const PointC& at);

// single smooth piece given by closures on [0,1]
PiecewisePath smooth_path(int dimension, std::function<PointC(double)> value,
                          std::function<PointC(double)> deriv);

// right-to-left composition with parameter halving; c1 runs first
PiecewisePath compose_paths(const PiecewisePath& c2, const PiecewisePath& c1,
                            double endpoint_tol = 1e-10);

// precomposition with the interval inversion s -> 1 - s
PiecewisePath reverse_path(const PiecewisePath& c);

// precomposition with a strictly monotone smooth theta: [0,1] -> [0,1]
PiecewisePath reparametrize_path(const PiecewisePath& c,
                                 std::function<double(double)> theta,
                                 std::function<double(double)> theta_deriv,
                                 std::function<double(double)> theta_inverse);

}  // namespace kza

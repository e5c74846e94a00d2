#include "kza/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kza {

double point_distance(const PointC& a, const PointC& b) {
  if (a.size() != b.size()) throw std::invalid_argument("point dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

PiecewisePath::PiecewisePath(int dimension, std::vector<Piece> pieces)
    : dim_(dimension), pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("path needs at least one piece");
  singular_.push_back(pieces_.front().a);
  for (const auto& p : pieces_) {
    if (p.b <= p.a) throw std::invalid_argument("degenerate path piece");
    singular_.push_back(p.b);
  }
  if (std::abs(singular_.front()) > 1e-14 || std::abs(singular_.back() - 1.0) > 1e-14)
    throw std::invalid_argument("path must be parameterized over [0,1]");
  singular_.front() = 0.0;
  singular_.back() = 1.0;
}

PointC PiecewisePath::eval(double s) const {
  for (const auto& p : pieces_)
    if (s <= p.b || &p == &pieces_.back()) return p.value(std::clamp(s, p.a, p.b));
  return pieces_.back().value(s);
}

PointC PiecewisePath::deriv(double s) const {
  for (const auto& p : pieces_)
    if (s <= p.b || &p == &pieces_.back()) return p.deriv(std::clamp(s, p.a, p.b));
  return pieces_.back().deriv(s);
}

void PiecewisePath::check_continuity(double tol) const {
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    double joint = pieces_[i].b;
    if (std::abs(joint - pieces_[i + 1].a) > 1e-14)
      throw std::invalid_argument("path pieces are not contiguous");
    if (point_distance(pieces_[i].value(joint), pieces_[i + 1].value(joint)) > tol)
      throw std::invalid_argument("path is discontinuous at a breakpoint");
  }
}

PiecewisePath affine_path(const PointC& from, const PointC& to) {
  if (from.size() != to.size()) throw std::invalid_argument("point dimension mismatch");
  int dim = (int)from.size();
  PiecewisePath::Piece p;
  p.a = 0.0;
  p.b = 1.0;
  p.value = [from, to](double s) {
    PointC x(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) x[i] = (1.0 - s) * from[i] + s * to[i];
    return x;
  };
  p.deriv = [from, to](double) {
    PointC x(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) x[i] = to[i] - from[i];
    return x;
  };
  return PiecewisePath(dim, {p});
}

PiecewisePath constant_path(const PointC& at) { return affine_path(at, at); }

PiecewisePath smooth_path(int dimension, std::function<PointC(double)> value,
                          std::function<PointC(double)> deriv) {
  PiecewisePath::Piece p;
  p.a = 0.0;
  p.b = 1.0;
  p.value = std::move(value);
  p.deriv = std::move(deriv);
  return PiecewisePath(dimension, {p});
}

PiecewisePath compose_paths(const PiecewisePath& c2, const PiecewisePath& c1,
                            double endpoint_tol) {
  if (c1.dimension() != c2.dimension())
    throw std::invalid_argument("path dimension mismatch");
  if (point_distance(c1.end(), c2.start()) > endpoint_tol)
    throw std::invalid_argument("path composition endpoint mismatch");
  std::vector<PiecewisePath::Piece> pieces;
  for (const auto& p : c1.pieces()) {
    PiecewisePath::Piece q;
    q.a = 0.5 * p.a;
    q.b = 0.5 * p.b;
    q.value = [f = p.value](double s) { return f(2.0 * s); };
    q.deriv = [f = p.deriv](double s) {
      PointC v = f(2.0 * s);
      for (auto& c : v) c *= 2.0;
      return v;
    };
    pieces.push_back(std::move(q));
  }
  for (const auto& p : c2.pieces()) {
    PiecewisePath::Piece q;
    q.a = 0.5 * p.a + 0.5;
    q.b = 0.5 * p.b + 0.5;
    q.value = [f = p.value](double s) { return f(2.0 * s - 1.0); };
    q.deriv = [f = p.deriv](double s) {
      PointC v = f(2.0 * s - 1.0);
      for (auto& c : v) c *= 2.0;
      return v;
    };
    pieces.push_back(std::move(q));
  }
  return PiecewisePath(c1.dimension(), std::move(pieces));
}

PiecewisePath reverse_path(const PiecewisePath& c) {
  std::vector<PiecewisePath::Piece> pieces;
  for (auto it = c.pieces().rbegin(); it != c.pieces().rend(); ++it) {
    PiecewisePath::Piece q;
    q.a = 1.0 - it->b;
    q.b = 1.0 - it->a;
    q.value = [f = it->value](double s) { return f(1.0 - s); };
    q.deriv = [f = it->deriv](double s) {
      PointC v = f(1.0 - s);
      for (auto& cv : v) cv = -cv;
      return v;
    };
    pieces.push_back(std::move(q));
  }
  return PiecewisePath(c.dimension(), std::move(pieces));
}

PiecewisePath reparametrize_path(const PiecewisePath& c,
                                 std::function<double(double)> theta,
                                 std::function<double(double)> theta_deriv,
                                 std::function<double(double)> theta_inverse) {
  std::vector<PiecewisePath::Piece> pieces;
  for (const auto& p : c.pieces()) {
    PiecewisePath::Piece q;
    q.a = p.a == 0.0 ? 0.0 : theta_inverse(p.a);
    q.b = p.b == 1.0 ? 1.0 : theta_inverse(p.b);
    q.value = [f = p.value, theta](double s) { return f(theta(s)); };
    q.deriv = [f = p.deriv, theta, theta_deriv](double s) {
      PointC v = f(theta(s));
      double dt = theta_deriv(s);
      for (auto& cv : v) cv *= dt;
      return v;
    };
    pieces.push_back(std::move(q));
  }
  return PiecewisePath(c.dimension(), std::move(pieces));
}

}  // namespace kza

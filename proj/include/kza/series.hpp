#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "kza/algebra.hpp"

namespace kza {

// Per-lambda-degree sup norms of a truncated series.
struct SeriesNorm {
  std::vector<double> per_degree;

  double max() const {
    double m = 0.0;
    for (double v : per_degree) m = std::max(m, v);
    return m;
  }
};

// Formal power series in lambda truncated at a fixed order, with
// coefficients in the free algebra over a shared alphabet. All operations
// are pure; mixed-order operands truncate to the smaller order.
template <class K>
class BasicSeries {
public:
  BasicSeries() : order_(0), coeff_(1) {}
  BasicSeries(int order, AlphabetPtr alphabet)
      : order_(order), alphabet_(std::move(alphabet)), coeff_(order + 1) {
    if (order < 0) throw std::invalid_argument("negative truncation order");
  }

  static BasicSeries one(int order, AlphabetPtr alphabet) {
    BasicSeries s(order, std::move(alphabet));
    s.coeff_[0] = BasicElement<K>::unit();
    return s;
  }
  static BasicSeries zero(int order, AlphabetPtr alphabet) {
    return BasicSeries(order, std::move(alphabet));
  }

  int order() const { return order_; }
  const AlphabetPtr& alphabet() const { return alphabet_; }

  const BasicElement<K>& coeff(int r) const { return coeff_.at(r); }
  void set_coeff(int r, BasicElement<K> e) { coeff_.at(r) = std::move(e); }

  bool is_zero() const {
    for (const auto& c : coeff_)
      if (!c.is_zero()) return false;
    return true;
  }

  BasicSeries truncated(int new_order) const {
    if (new_order >= order_) return *this;
    BasicSeries s(new_order, alphabet_);
    for (int r = 0; r <= new_order; ++r) s.coeff_[r] = coeff_[r];
    return s;
  }

  friend BasicSeries operator+(const BasicSeries& a, const BasicSeries& b) {
    require_same_alphabet(a.alphabet_, b.alphabet_);
    int n = std::min(a.order_, b.order_);
    BasicSeries s(n, a.alphabet_);
    for (int r = 0; r <= n; ++r) s.coeff_[r] = a.coeff_[r] + b.coeff_[r];
    s.normalize();
    return s;
  }
  friend BasicSeries operator-(const BasicSeries& a, const BasicSeries& b) {
    require_same_alphabet(a.alphabet_, b.alphabet_);
    int n = std::min(a.order_, b.order_);
    BasicSeries s(n, a.alphabet_);
    for (int r = 0; r <= n; ++r)
      s.coeff_[r] = a.coeff_[r] - b.coeff_[r];
    s.normalize();
    return s;
  }

  // Cauchy product truncated at the smaller order
  friend BasicSeries operator*(const BasicSeries& a, const BasicSeries& b) {
    require_same_alphabet(a.alphabet_, b.alphabet_);
    int n = std::min(a.order_, b.order_);
    BasicSeries s(n, a.alphabet_);
    for (int r = 0; r <= n; ++r) {
      BasicElement<K> c;
      for (int u = 0; u <= r; ++u) {
        if (a.coeff_[u].is_zero() || b.coeff_[r - u].is_zero()) continue;
        c += a.coeff_[u] * b.coeff_[r - u];
      }
      s.coeff_[r] = std::move(c);
    }
    s.normalize();
    return s;
  }

  friend BasicSeries operator*(const BasicSeries& a, const K& c) {
    BasicSeries s(a.order_, a.alphabet_);
    for (int r = 0; r <= a.order_; ++r) s.coeff_[r] = a.coeff_[r] * c;
    return s;
  }

  BasicSeries& operator+=(const BasicSeries& o) { return *this = *this + o; }
  BasicSeries& operator*=(const BasicSeries& o) { return *this = *this * o; }

  SeriesNorm sup_norm() const {
    SeriesNorm n;
    n.per_degree.resize(order_ + 1);
    for (int r = 0; r <= order_; ++r) n.per_degree[r] = coeff_[r].sup_norm();
    return n;
  }

  // drops per-degree coefficients below kPrune * (degree sup norm)
  void normalize() {
    if (ScalarOps<K>::kPrune <= 0.0) return;
    for (auto& c : coeff_) c.prune(ScalarOps<K>::kPrune * c.sup_norm());
  }

private:
  int order_;
  AlphabetPtr alphabet_;
  std::vector<BasicElement<K>> coeff_;
};

using TruncatedSeries = BasicSeries<Cplx>;
using RationalSeries = BasicSeries<Rational>;

template <class K>
BasicSeries<K> series_from_element(const BasicElement<K>& e, int degree, int order,
                                   AlphabetPtr alphabet) {
  BasicSeries<K> s(order, std::move(alphabet));
  if (degree <= order) s.set_coeff(degree, e);
  return s;
}

// exp of a series with vanishing constant term; lands in the group 1 + lambda(...)
template <class K>
BasicSeries<K> exp_proper(const BasicSeries<K>& x) {
  if (!x.coeff(0).is_zero())
    throw std::invalid_argument("exp requires a vanishing lambda^0 part");
  BasicSeries<K> acc = BasicSeries<K>::one(x.order(), x.alphabet());
  BasicSeries<K> pow = acc;
  for (int k = 1; k <= x.order(); ++k) {
    pow = pow * x;
    pow = pow * (ScalarOps<K>::one() / ScalarOps<K>::from_int(k));
    acc += pow;
  }
  return acc;
}

// inverse of exp_proper on the group 1 + lambda(...)
template <class K>
BasicSeries<K> log_group(const BasicSeries<K>& g) {
  if (!(g.coeff(0) == BasicElement<K>::unit()))
    throw std::invalid_argument("log requires lambda^0 part equal to 1");
  BasicSeries<K> h = g;
  h.set_coeff(0, BasicElement<K>());
  BasicSeries<K> acc = BasicSeries<K>::zero(g.order(), g.alphabet());
  BasicSeries<K> pow = BasicSeries<K>::one(g.order(), g.alphabet());
  int sign = 1;
  for (int k = 1; k <= g.order(); ++k) {
    pow = pow * h;
    acc += pow * (ScalarOps<K>::from_int(sign) / ScalarOps<K>::from_int(k));
    sign = -sign;
  }
  return acc;
}

// geometric-series inverse on the group 1 + lambda(...)
template <class K>
BasicSeries<K> invert_group(const BasicSeries<K>& g) {
  if (!(g.coeff(0) == BasicElement<K>::unit()))
    throw std::invalid_argument("inverse requires lambda^0 part equal to 1");
  BasicSeries<K> h = BasicSeries<K>::one(g.order(), g.alphabet()) - g;  // 1 - g
  BasicSeries<K> acc = BasicSeries<K>::one(g.order(), g.alphabet());
  BasicSeries<K> pow = acc;
  for (int k = 1; k <= g.order(); ++k) {
    pow = pow * h;
    acc += pow;
  }
  return acc;
}

// Algebra-morphism extension of generator images, applied degreewise.
template <class K>
BasicSeries<K> substitute(const BasicSeries<K>& x,
                          const std::vector<BasicElement<K>>& images,
                          AlphabetPtr target) {
  if (images.size() < x.alphabet()->size())
    throw std::invalid_argument("missing generator image");
  BasicSeries<K> out(x.order(), std::move(target));
  for (int r = 0; r <= x.order(); ++r)
    out.set_coeff(r, substitute_element(x.coeff(r), images));
  out.normalize();
  return out;
}

// e^{lambda c A} for a degree-0 element A
inline TruncatedSeries exp_linear(Cplx c, const AlgebraElement& a, int order,
                                  AlphabetPtr alphabet) {
  return exp_proper(series_from_element(a * c, 1, order, std::move(alphabet)));
}

inline double max_defect(const TruncatedSeries& a, const TruncatedSeries& b) {
  return (a - b).sup_norm().max();
}

}  // namespace kza

#pragma once

// Self-contained quadrature oracles for the acceptance suite. Everything
// here works on plain doubles and never touches the transport machinery
// whose results it cross-checks.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

// mesh on [a, b] refined geometrically toward both endpoints
inline std::vector<double> graded_mesh(double a, double b, int depth = 20) {
  std::vector<double> cuts{a, b};
  double len = b - a;
  for (int j = 1; j <= depth; ++j) {
    double off = len * std::ldexp(1.0, -j);
    cuts.push_back(a + off);
    cuts.push_back(b - off);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

template <class F>
double simpson_cell(const F& f, double a, double b, int panels) {
  double h = (b - a) / panels, acc = 0.0;
  for (int j = 0; j < panels; ++j) {
    double x0 = a + j * h;
    acc += (h / 6.0) * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
  }
  return acc;
}

template <class F>
double graded_integral(const F& f, double a, double b, int panels = 16) {
  if (b <= a) return 0.0;
  double acc = 0.0;
  std::vector<double> mesh = graded_mesh(a, b);
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i)
    acc += simpson_cell(f, mesh[i], mesh[i + 1], panels);
  return acc;
}

struct Zeta2Sample {
  double aa, ab, ba, bb;
};

// Second-order coefficients of the conjugated transport at regulator
// delta, from direct two-fold iterated-integral quadrature
//   W2[w1 w2] = int_{delta < u2 < u1 < 1-delta} du1 du2 / ((u1-i1)(u2-i2))
// with the singular factors exp(-ln d B), exp(ln d A) expanded by hand.
inline Zeta2Sample zeta2_regularized(double delta) {
  auto outer = [&](int i1, int i2) {
    return graded_integral(
        [&](double u1) {
          double inner = graded_integral(
              [&](double u2) { return 1.0 / (u2 - i2); }, delta, u1);
          return inner / (u1 - i1);
        },
        delta, 1.0 - delta);
  };
  double waa = outer(0, 0), wab = outer(0, 1), wba = outer(1, 0), wbb = outer(1, 1);
  double c = std::log(delta);
  double a = std::log((1.0 - delta) / delta);
  Zeta2Sample s;
  s.aa = waa + c * a + 0.5 * c * c;
  s.ab = wab;
  s.ba = wba - 2.0 * c * a - c * c;
  s.bb = wbb + c * a + 0.5 * c * c;
  return s;
}

// iterated first-order elimination toward delta = 0 on a dyadic grid;
// three levels keep the noise amplification modest
inline double ladder_extrapolate(std::vector<double> values) {
  int levels = std::min<int>(3, (int)values.size() - 1);
  for (int lvl = 0; lvl < levels; ++lvl) {
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
      values[i] = 2.0 * values[i + 1] - values[i];
    values.pop_back();
  }
  return values.back();
}

struct Zeta2Oracle {
  double aa, ab, ba, bb;
};

// Richardson-extrapolated over delta = 2^-k, k = 6..11
inline Zeta2Oracle zeta2_oracle() {
  std::vector<double> aa, ab, ba, bb;
  for (int k = 6; k <= 11; ++k) {
    Zeta2Sample s = zeta2_regularized(std::ldexp(1.0, -k));
    aa.push_back(s.aa);
    ab.push_back(s.ab);
    ba.push_back(s.ba);
    bb.push_back(s.bb);
  }
  return {ladder_extrapolate(aa), ladder_extrapolate(ab), ladder_extrapolate(ba),
          ladder_extrapolate(bb)};
}

}  // namespace oracle

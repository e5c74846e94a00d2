#include "kza/connection.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kza {

namespace {

constexpr double kAdmissibleEps = 1e-12;

// term with coefficient 1/(l . x - c) along one axis, l a real row vector
FormalConnection::Term pole_term(int axis, std::vector<double> l, Cplx c,
                                 const AlgebraElement& weight, int dim) {
  FormalConnection::Term t;
  t.axis = axis;
  t.weight = weight;
  auto denom = [l, c](const PointC& x) {
    Cplx d = -c;
    for (std::size_t i = 0; i < l.size(); ++i) d += l[i] * x[i];
    return d;
  };
  t.coeff = [denom](const PointC& x) { return 1.0 / denom(x); };
  for (int j = 0; j < dim; ++j) {
    double lj = l[j];
    t.dcoeff.push_back([denom, lj](const PointC& x) {
      Cplx d = denom(x);
      return -lj / (d * d);
    });
  }
  return t;
}

void check_margin(const PiecewisePath& path, double margin,
                  const std::function<double(const PointC&)>& dist) {
  for (const auto& piece : path.pieces()) {
    for (int k = 0; k <= 64; ++k) {
      double s = piece.a + (piece.b - piece.a) * k / 64.0;
      if (dist(path.eval(s)) < margin)
        throw std::domain_error("path runs too close to the singular locus");
    }
  }
}

}  // namespace

FormalConnection interval_connection(const AlgebraElement& a, const AlgebraElement& b,
                                     AlphabetPtr alphabet) {
  FormalConnection conn;
  conn.dimension = 1;
  conn.alphabet = std::move(alphabet);
  conn.terms.push_back(pole_term(0, {1.0}, Cplx(0.0), a, 1));
  conn.terms.push_back(pole_term(0, {1.0}, Cplx(1.0), b, 1));
  conn.admissible = [](const PointC& x) {
    return std::abs(x[0].imag()) < 1e-9 && x[0].real() > kAdmissibleEps &&
           x[0].real() < 1.0 - kAdmissibleEps;
  };
  return conn;
}

FormalConnection punctured_plane_connection(const AlgebraElement& a,
                                            const AlgebraElement& b,
                                            AlphabetPtr alphabet) {
  FormalConnection conn;
  conn.dimension = 1;
  conn.alphabet = std::move(alphabet);
  conn.terms.push_back(pole_term(0, {1.0}, Cplx(0.0), a, 1));
  conn.terms.push_back(pole_term(0, {1.0}, Cplx(1.0), b, 1));
  conn.admissible = [](const PointC& z) {
    return std::abs(z[0]) > kAdmissibleEps && std::abs(z[0] - 1.0) > kAdmissibleEps;
  };
  return conn;
}

FormalConnection kz_connection(int n, const std::vector<AlgebraElement>& images,
                               AlphabetPtr alphabet) {
  if (n < 2) throw std::invalid_argument("configuration space needs n >= 2");
  if ((int)images.size() != n * (n - 1) / 2)
    throw std::invalid_argument("expected one image per unordered pair");
  FormalConnection conn;
  conn.dimension = n;
  conn.alphabet = std::move(alphabet);
  int pair = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++pair) {
      std::vector<double> l(n, 0.0);
      l[i] = 1.0;
      l[j] = -1.0;
      // A_ij/(z_i - z_j) (dz_i - dz_j)
      conn.terms.push_back(pole_term(i, l, Cplx(0.0), images[pair], n));
      conn.terms.push_back(pole_term(j, l, Cplx(0.0), images[pair] * Cplx(-1.0), n));
    }
  conn.admissible = [n](const PointC& z) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (std::abs(z[i] - z[j]) <= kAdmissibleEps) return false;
    return true;
  };
  return conn;
}

FormalConnection pentagon_connection(const std::vector<AlgebraElement>& images,
                                     AlphabetPtr alphabet) {
  if (images.size() != 6)
    throw std::invalid_argument("expected six images A_12,A_13,A_14,A_23,A_24,A_34");
  const AlgebraElement& a12 = images[0];
  const AlgebraElement& a13 = images[1];
  const AlgebraElement& a23 = images[3];
  const AlgebraElement& a24 = images[4];
  const AlgebraElement& a34 = images[5];
  FormalConnection conn;
  conn.dimension = 2;
  conn.alphabet = std::move(alphabet);
  // coords (x2, x3); x1 = 0 and x4 = 1 are frozen
  conn.terms.push_back(pole_term(0, {1.0, 0.0}, Cplx(0.0), a12, 2));
  conn.terms.push_back(pole_term(0, {1.0, -1.0}, Cplx(0.0), a23, 2));
  conn.terms.push_back(pole_term(0, {1.0, 0.0}, Cplx(1.0), a24, 2));
  conn.terms.push_back(pole_term(1, {0.0, 1.0}, Cplx(0.0), a13, 2));
  conn.terms.push_back(pole_term(1, {1.0, -1.0}, Cplx(0.0), a23 * Cplx(-1.0), 2));
  conn.terms.push_back(pole_term(1, {0.0, 1.0}, Cplx(1.0), a34, 2));
  conn.admissible = [](const PointC& x) {
    double x2 = x[0].real(), x3 = x[1].real();
    return x2 > kAdmissibleEps && x3 - x2 > kAdmissibleEps && x3 < 1.0 - kAdmissibleEps;
  };
  return conn;
}

CurvatureSample curvature(const FormalConnection& conn, const PointC& x, int axis_i,
                          int axis_j) {
  if ((int)x.size() != conn.dimension)
    throw std::invalid_argument("point dimension mismatch");
  if (!conn.admissible(x)) throw std::domain_error("inadmissible point");
  CurvatureSample s;
  s.point = x;
  s.axis_i = axis_i;
  s.axis_j = axis_j;
  if (axis_i == axis_j) return s;
  AlgebraElement v;
  for (const auto& t : conn.terms) {
    if (t.axis == axis_i) v += t.weight * t.dcoeff[axis_j](x);
    if (t.axis == axis_j) v -= t.weight * t.dcoeff[axis_i](x);
  }
  v += AlgebraElement::commutator(conn.component(axis_i, x), conn.component(axis_j, x));
  s.value = std::move(v);
  return s;
}

PulledBackField pull_back_to_path(const FormalConnection& conn, const PiecewisePath& c) {
  if (conn.dimension != c.dimension())
    throw std::invalid_argument("connection and path dimension mismatch");
  for (const auto& piece : c.pieces())
    for (int k = 0; k <= 64; ++k) {
      double s = piece.a + (piece.b - piece.a) * k / 64.0;
      if (!conn.admissible(c.eval(s)))
        throw std::domain_error("path touches the singular locus");
    }
  PulledBackField field;
  field.alphabet = conn.alphabet;
  field.singular_set = c.singular_set();
  auto path = std::make_shared<const PiecewisePath>(c);
  field.path = path;
  for (const auto& t : conn.terms) {
    PulledBackField::Summand sm;
    sm.weight = t.weight;
    sm.f = [path, coeff = t.coeff, axis = t.axis](double s) {
      return coeff(path->eval(s)) * path->deriv(s)[axis];
    };
    field.summands.push_back(std::move(sm));
  }
  return field;
}

Cplx zeta_map(Cplx z) { return 1.0 / (1.0 - z); }
Cplx zeta_inverse_map(Cplx z) { return (z - 1.0) / z; }

double hexagon_margin(const PointC& z) {
  return std::min(std::abs(z[0]), std::abs(z[0] - 1.0));
}

double pentagon_margin(const PointC& x) {
  double x2 = x[0].real(), x3 = x[1].real();
  return std::min({x2, x3 - x2, 1.0 - x3});
}

HexagonPaths hexagon_paths(double delta) {
  if (!(delta > 0.0 && delta <= 0.25))
    throw std::domain_error("regulator delta must lie in ]0, 1/4]");
  const double pi = std::numbers::pi;
  const Cplx I(0.0, 1.0);
  const double d = delta;

  auto leg1 = smooth_path(
      1, [d](double s) { return PointC{Cplx(d + s * (1.0 - 2.0 * d), 0.0)}; },
      [d](double) { return PointC{Cplx(1.0 - 2.0 * d, 0.0)}; });

  // lower half circle 1-delta -> 1/(1-delta); counterclockwise, non-uniform
  auto leg2 = smooth_path(
      1,
      [d, pi, I](double s) {
        Cplx g = (1.0 - d / 2.0) * std::exp(-I * pi * s) + d / 2.0;
        return PointC{1.0 - d / g};
      },
      [d, pi, I](double s) {
        Cplx e = std::exp(-I * pi * s);
        Cplx g = (1.0 - d / 2.0) * e + d / 2.0;
        Cplx gp = -I * pi * (1.0 - d / 2.0) * e;
        return PointC{d * gp / (g * g)};
      });

  auto leg3 = smooth_path(
      1,
      [d](double s) { return PointC{Cplx(1.0 / (1.0 - d - s * (1.0 - 2.0 * d)), 0.0)}; },
      [d](double s) {
        double q = 1.0 - d - s * (1.0 - 2.0 * d);
        return PointC{Cplx((1.0 - 2.0 * d) / (q * q), 0.0)};
      });

  // clockwise half circle of center 1/2 and radius 1/delta - 1/2
  auto leg4 = smooth_path(
      1,
      [d, pi, I](double s) {
        return PointC{0.5 + (1.0 / d - 0.5) * std::exp(-I * pi * s)};
      },
      [d, pi, I](double s) {
        return PointC{-I * pi * (1.0 / d - 0.5) * std::exp(-I * pi * s)};
      });

  auto leg5 = smooth_path(
      1,
      [d](double s) {
        double q = d + s * (1.0 - 2.0 * d);
        return PointC{Cplx((q - 1.0) / q, 0.0)};
      },
      [d](double s) {
        double q = d + s * (1.0 - 2.0 * d);
        return PointC{Cplx((1.0 - 2.0 * d) / (q * q), 0.0)};
      });

  auto leg6 = smooth_path(
      1,
      [d, pi, I](double s) {
        Cplx h = -(1.0 - d / 2.0) * std::exp(-I * pi * s) + d / 2.0;
        return PointC{d / h};
      },
      [d, pi, I](double s) {
        Cplx e = std::exp(-I * pi * s);
        Cplx h = -(1.0 - d / 2.0) * e + d / 2.0;
        Cplx hp = I * pi * (1.0 - d / 2.0) * e;
        return PointC{-d * hp / (h * h)};
      });

  std::vector<PiecewisePath> legs{leg1, leg2, leg3, leg4, leg5, leg6};
  double margin = delta * delta / 4.0;
  for (const auto& leg : legs)
    check_margin(leg, margin, [](const PointC& z) { return hexagon_margin(z); });

  PiecewisePath loop = compose_paths(leg2, leg1);
  loop = compose_paths(leg3, loop);
  loop = compose_paths(leg4, loop);
  loop = compose_paths(leg5, loop);
  loop = compose_paths(leg6, loop);
  return HexagonPaths(delta, std::move(legs), std::move(loop));
}

PentagonPaths pentagon_paths(double delta) {
  if (!(delta > 0.0 && delta <= 0.25))
    throw std::domain_error("regulator delta must lie in ]0, 1/4]");
  const double d = delta, d2 = delta * delta;
  const double dhat = delta * (1.0 - delta / 2.0);

  PentagonPaths out(delta);
  auto pt = [](double x2, double x3) { return PointC{Cplx(x2, 0.0), Cplx(x3, 0.0)}; };
  PointC p1 = pt(d2, d);
  PointC p2 = pt(d - d2, d);
  PointC p3 = pt(1.0 - d, 1.0 - d + d2);
  PointC p4 = pt(1.0 - d, 1.0 - d2);
  PointC p5 = pt(d2, 1.0 - d2);
  out.zone_points = {p1, p2, p3, p4, p5};

  out.legs.push_back(affine_path(p1, p2));
  out.legs.push_back(affine_path(p2, p3));
  out.legs.push_back(affine_path(p3, p4));
  out.legs.push_back(affine_path(p1, p5));
  out.legs.push_back(affine_path(p5, p4));

  // prefactor * exp(ln(2 scale) s) and its derivative
  auto expo = [](double prefactor, double scale) {
    double l = std::log(2.0 * scale);
    return [prefactor, l](double s) { return prefactor * std::exp(l * s); };
  };
  auto expo_d = [](double prefactor, double scale) {
    double l = std::log(2.0 * scale);
    return [prefactor, l](double s) { return prefactor * l * std::exp(l * s); };
  };

  // joining (d/2, d) -> (d^2, d)
  auto g1 = expo(d / 2.0, d);
  auto g1d = expo_d(d / 2.0, d);
  out.half_paths.push_back(smooth_path(
      2, [=](double s) { return PointC{Cplx(g1(s), 0.0), Cplx(d, 0.0)}; },
      [=](double s) { return PointC{Cplx(g1d(s), 0.0), Cplx(0.0, 0.0)}; }));
  out.half_names.push_back("I-1");
  // joining (d/2, d) -> (d - d^2, d)
  out.half_paths.push_back(smooth_path(
      2, [=](double s) { return PointC{Cplx(d - g1(s), 0.0), Cplx(d, 0.0)}; },
      [=](double s) { return PointC{Cplx(-g1d(s), 0.0), Cplx(0.0, 0.0)}; }));
  out.half_names.push_back("I-2");
  // joining ((1-d^2)/2, (1+d^2)/2) -> (d - d^2, d); Theta image of II-2
  auto eh = expo(0.5, dhat);
  auto ehd = expo_d(0.5, dhat);
  auto e1 = expo(0.5, d);
  auto e1d = expo_d(0.5, d);
  out.half_paths.push_back(smooth_path(
      2,
      [=](double s) { return PointC{Cplx(eh(s) - d2 / 2.0, 0.0), Cplx(eh(s) + d2 / 2.0, 0.0)}; },
      [=](double s) { return PointC{Cplx(ehd(s), 0.0), Cplx(ehd(s), 0.0)}; }));
  out.half_names.push_back("II-1");
  // joining ((1-d^2)/2, (1+d^2)/2) -> (1-d, 1-d+d^2)
  out.half_paths.push_back(smooth_path(
      2,
      [=](double s) {
        return PointC{Cplx(1.0 - eh(s) - d2 / 2.0, 0.0), Cplx(1.0 - eh(s) + d2 / 2.0, 0.0)};
      },
      [=](double s) { return PointC{Cplx(-ehd(s), 0.0), Cplx(-ehd(s), 0.0)}; }));
  out.half_names.push_back("II-2");
  // joining (d^2, 1/2) -> (d^2, d)
  out.half_paths.push_back(smooth_path(
      2, [=](double s) { return PointC{Cplx(d2, 0.0), Cplx(e1(s), 0.0)}; },
      [=](double s) { return PointC{Cplx(0.0, 0.0), Cplx(e1d(s), 0.0)}; }));
  out.half_names.push_back("IV-1");
  // joining (d^2, 1/2) -> (d^2, 1-d^2)
  auto e2 = expo(0.5, d2);
  auto e2d = expo_d(0.5, d2);
  out.half_paths.push_back(smooth_path(
      2, [=](double s) { return PointC{Cplx(d2, 0.0), Cplx(1.0 - e2(s), 0.0)}; },
      [=](double s) { return PointC{Cplx(0.0, 0.0), Cplx(-e2d(s), 0.0)}; }));
  out.half_names.push_back("IV-2");

  double margin = delta * delta / 4.0;
  for (const auto& leg : out.legs)
    check_margin(leg, margin, [](const PointC& x) { return pentagon_margin(x); });
  for (const auto& leg : out.half_paths)
    check_margin(leg, margin, [](const PointC& x) { return pentagon_margin(x); });
  return out;
}

}  // namespace kza

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kza/associator.hpp"

using namespace kza;

namespace {

const AlphabetPtr kAB = make_alphabet({"A", "B"});
constexpr double kPi = std::numbers::pi;

AlgebraElement gen(uint8_t id) { return AlgebraElement::generator(id); }

}  // namespace

TEST_CASE("conjugated transport with commuting images") {
  double d = 1.0 / 8, e = 1.0 / 16;
  AlgebraElement a = AlgebraElement::scalar(Cplx(0.6, 0.1));
  AlgebraElement b = AlgebraElement::scalar(Cplx(-0.4, 0.3));
  TruncatedSeries phi = phi_sample(a, b, d, e, 5, 1024, kAB);
  TruncatedSeries ref = exp_proper(
      series_from_element(a * std::log(1 - e) - b * std::log(1 - d), 1, 5, kAB));
  CHECK(max_defect(phi, ref) < 1e-10);
}

TEST_CASE("first-order coefficient of the conjugated transport") {
  double d = 1.0 / 8, e = 1.0 / 16;
  TruncatedSeries phi = phi_sample(gen(0), gen(1), d, e, 3, 1024, kAB);
  AlgebraElement expect = gen(0) * std::log(1 - e) - gen(1) * std::log(1 - d);
  CHECK((phi.coeff(1) - expect).sup_norm() < 1e-8);
  CHECK(max_defect(phi, phi) == 0.0);
  CHECK_THROWS_AS(phi_sample(gen(0), gen(1), 0.3, e, 3, 64, kAB), std::domain_error);
}

TEST_CASE("inverse swaps arguments and regulators") {
  double d = 1.0 / 8, e = 1.0 / 16;
  TruncatedSeries ab = phi_sample(gen(0), gen(1), d, e, 4, 1024, kAB);
  TruncatedSeries ba = phi_sample(gen(1), gen(0), e, d, 4, 1024, kAB);
  CHECK(max_defect(invert_group(ab), ba) < 1e-8);
}

TEST_CASE("half-path factor basics") {
  // vanishing far side: psi collapses to exp(ln(2) B), independent of eps
  AlgebraElement b = gen(1);
  TruncatedSeries ref = exp_linear(std::log(2.0), b, 4, kAB);
  for (double eps : {0.25, 1.0 / 16, 1.0 / 64}) {
    HalfPathFactor f = psi_half(b, AlgebraElement(), eps, 4, 512, kAB);
    CHECK(max_defect(f.value, ref) < 1e-10);
  }
  CHECK_THROWS_AS(psi_half(b, gen(0), 0.26, 3, 64, kAB), std::domain_error);
}

TEST_CASE("half-path factors rebuild the conjugated transport") {
  for (double d : {1.0 / 8, 1.0 / 16})
    for (double e : {1.0 / 8, 1.0 / 16}) {
      TruncatedSeries direct = phi_sample(gen(0), gen(1), d, e, 4, 2048, kAB);
      HalfPathFactor up = psi_half(gen(1), gen(0), e, 4, 2048, kAB);
      HalfPathFactor dn = psi_half(gen(0), gen(1), d, 4, 2048, kAB);
      CHECK(max_defect(direct, up.value * invert_group(dn.value)) < 1e-8);
    }
}

TEST_CASE("half-path factors stay bounded on the grid") {
  std::vector<double> grid = dyadic_grid(4, 10);
  std::vector<double> worst(5, 0.0);
  for (double eps : grid) {
    HalfPathFactor f = psi_half(gen(1), gen(0), eps, 4, 512, kAB);
    SeriesNorm n = f.value.sup_norm();
    for (int r = 0; r <= 4; ++r) worst[r] = std::max(worst[r], n.per_degree[r]);
  }
  // a fixed constant dominates every degree across the whole grid
  for (int r = 0; r <= 4; ++r) CHECK(worst[r] < 10.0);
}

TEST_CASE("limit estimate structure") {
  std::vector<double> grid = dyadic_grid(4, 8);
  AssociatorEstimate est = phi_limit(gen(0), gen(1), 3, grid, 512, kAB, false);
  REQUIRE(est.samples.size() == grid.size());
  CHECK(est.converged);
  CHECK(est.convergence.size() == grid.size() - 1);
  // lambda^1 must fade with the regulator
  CHECK(est.samples.front().coeff(1).sup_norm() >
        est.samples.back().coeff(1).sup_norm());
  CHECK(est.extrapolated.coeff(0) == AlgebraElement::unit());
  CHECK(max_defect(est.extrapolated, est.samples.back()) == 0.0);

  CHECK_THROWS_AS(phi_limit(gen(0), gen(1), 3, {0.1, 0.2}, 64, kAB),
                  std::invalid_argument);
  CHECK_THROWS_AS(phi_limit(gen(0), gen(1), 3, {}, 64, kAB), std::invalid_argument);
}

TEST_CASE("non-convergence is flagged, not thrown") {
  CHECK(convergence_flag({}));
  CHECK(convergence_flag({{0.5, 0.1}}));
  CHECK(convergence_flag({{0.5, 0.1}, {0.2, 0.05}}));
  CHECK(convergence_flag({{0.5}, {0.2}, {1e-14}}));
  CHECK(!convergence_flag({{0.1, 0.02}, {0.4, 0.01}}));
}

TEST_CASE("extrapolation ladder removes log-contaminated linear error") {
  std::vector<double> grid = dyadic_grid(4, 10);
  std::vector<TruncatedSeries> samples;
  for (double d : grid) {
    TruncatedSeries s = TruncatedSeries::one(1, kAB);
    s.set_coeff(1, gen(0) * Cplx(2.0 + d * std::log(d) + 0.3 * d, 0.0));
    samples.push_back(s);
  }
  TruncatedSeries ex = richardson_extrapolate(grid, samples);
  CHECK(std::abs(ex.coeff(1).coeff(Word::single(0)) - Cplx(2.0, 0.0)) < 1e-10);
}

TEST_CASE("duality of the extrapolated associator") {
  std::vector<double> grid = dyadic_grid(4, 9);
  AssociatorEstimate ab = phi_limit(gen(0), gen(1), 4, grid, 1024, kAB, false);
  AssociatorEstimate ba = phi_limit(gen(1), gen(0), 4, grid, 1024, kAB, false);
  TruncatedSeries prod = ab.extrapolated * ba.extrapolated;
  SeriesNorm defect = (prod - TruncatedSeries::one(4, kAB)).sup_norm();
  for (int r = 0; r <= 4; ++r) CHECK(defect.per_degree[r] < 1e-4);
}

TEST_CASE("central shift invariance in the three-strand quotient") {
  BraidPresentation t3(3);
  AlgebraElement a = t3.generator(1, 2), b = t3.generator(2, 3);
  AlgebraElement lam = a + b + t3.generator(1, 3);
  std::vector<double> grid = dyadic_grid(4, 8);
  AssociatorEstimate plain = phi_limit(a, b, 3, grid, 512, t3.alphabet(), false);
  AssociatorEstimate shifted =
      phi_limit(a + lam, b + lam, 3, grid, 512, t3.alphabet(), false);
  ReducedForm f = reduce_mod_ideal(shifted.extrapolated - plain.extrapolated, t3);
  CHECK(f.max_norm() < 1e-4);
}

TEST_CASE("classifier on synthetic families") {
  std::vector<double> grid = dyadic_grid(4, 10);
  std::vector<TruncatedSeries> singular, powerlaw, flat;
  for (double d : grid) {
    singular.push_back(exp_linear(std::log(d), gen(0), 3, kAB));
    TruncatedSeries p = TruncatedSeries::one(3, kAB);
    p.set_coeff(1, gen(0) * Cplx(std::sqrt(d), 0.0));
    powerlaw.push_back(p);
    TruncatedSeries c = TruncatedSeries::one(3, kAB);
    c.set_coeff(1, gen(0) * Cplx(2.5, 0.0));
    c.set_coeff(2, AlgebraElement());
    flat.push_back(c);
  }

  LbhDiagnostics ds = classify_lbh(grid, singular);
  for (int r = 1; r <= 3; ++r) {
    CHECK(ds.per_degree[r].cls == LbhClass::L);
    CHECK(std::abs(ds.per_degree[r].exponent - r) < 0.2);
  }

  LbhDiagnostics dp = classify_lbh(grid, powerlaw);
  CHECK(dp.per_degree[1].cls == LbhClass::H);
  CHECK(std::abs(dp.per_degree[1].exponent - 0.5) < 0.05);
  CHECK(dp.per_degree[2].cls == LbhClass::B);  // all-zero degree
  CHECK(dp.per_degree[2].scale == 0.0);

  LbhDiagnostics df = classify_lbh(grid, flat);
  CHECK(df.per_degree[0].cls == LbhClass::B);
  CHECK(df.per_degree[1].cls == LbhClass::B);
  CHECK(df.per_degree[1].scale == doctest::Approx(2.5));

  CHECK_THROWS_AS(classify_lbh({0.25, 0.125}, {flat[0], flat[1]}),
                  std::invalid_argument);
}

TEST_CASE("classifier respects the harmless ideal structure") {
  std::vector<double> grid = dyadic_grid(4, 10);
  std::vector<TruncatedSeries> hh, lh;
  for (double d : grid) {
    // group elements with harmless positive degrees
    TruncatedSeries h1 = TruncatedSeries::one(2, kAB);
    h1.set_coeff(1, gen(0) * Cplx(std::sqrt(d), 0.0));
    TruncatedSeries h2 = TruncatedSeries::one(2, kAB);
    h2.set_coeff(1, gen(1) * Cplx(std::pow(d, 0.7), 0.0));
    hh.push_back(h1 * h2);
    // log-divergent series times a series harmless at every degree
    lh.push_back(exp_linear(std::log(d), gen(0), 2, kAB) * h1 *
                 Cplx(std::pow(d, 0.6), 0.0));
  }
  LbhDiagnostics dhh = classify_lbh(grid, hh);
  CHECK(dhh.per_degree[1].cls == LbhClass::H);
  CHECK(dhh.per_degree[2].cls == LbhClass::H);
  LbhDiagnostics dlh = classify_lbh(grid, lh);
  for (int r = 0; r <= 2; ++r) {
    CHECK(dlh.per_degree[r].cls == LbhClass::H);
    CHECK(dlh.per_degree[r].exponent > 0.0);
  }
}

TEST_CASE("half-circle remainder matches its definition") {
  double d = 0.125;
  BraidPresentation t3(3);
  AlgebraElement a = t3.generator(1, 2), b = t3.generator(2, 3);
  TruncatedSeries h = hexagon_remainder(d, a, b, 3, 1024, t3.alphabet());

  HexagonPaths paths = hexagon_paths(d);
  FormalConnection conn = punctured_plane_connection(a, b, t3.alphabet());
  Propagator w = propagate(pull_back_to_path(conn, paths.legs[1]), 0, 1, 3, 1024);
  TruncatedSeries direct =
      exp_linear(Cplx(0.0, -kPi), b, 3, t3.alphabet()) * w.value;
  CHECK(max_defect(h, direct) < 1e-9);
}

TEST_CASE("hexagon remainder vanishes with the regulator") {
  BraidPresentation t3(3);
  AlgebraElement a = t3.generator(1, 2), b = t3.generator(2, 3);
  std::vector<double> grid = dyadic_grid(4, 10);
  std::vector<TruncatedSeries> values;
  for (double d : grid)
    values.push_back(hexagon_remainder(d, a, b, 3, 512, t3.alphabet()));
  LbhDiagnostics diag = classify_lbh(grid, values);
  for (int r = 1; r <= 3; ++r) {
    CHECK(diag.per_degree[r].cls == LbhClass::H);
    CHECK(diag.per_degree[r].exponent >= 0.3);
  }
}

TEST_CASE("assembled hexagon factorization equals the loop transport") {
  double d = 0.125;
  BraidPresentation t3(3);
  auto al = t3.alphabet();
  AlgebraElement a = t3.generator(1, 2), b = t3.generator(2, 3);
  AlgebraElement ct = (a + b) * Cplx(-1.0);  // C - Lambda in the quotient
  int order = 3, steps = 1024;
  Cplx ipi(0.0, kPi), ld(std::log(d), 0.0);

  auto leg_odd = [&](const AlgebraElement& x, const AlgebraElement& y) {
    // transport delta -> 1-delta for the connection with pole data (x, y)
    return exp_linear(ld, y, order, al) * phi_sample(x, y, d, d, order, steps, al) *
           exp_linear(-ld, x, order, al);
  };
  TruncatedSeries w1 = leg_odd(a, b);
  TruncatedSeries w3 = leg_odd(b, ct);
  TruncatedSeries w5 = leg_odd(ct, a);
  TruncatedSeries w2 = exp_linear(ipi, b, order, al) *
                       hexagon_remainder(d, a, b, order, steps, al);
  TruncatedSeries w4 = exp_linear(ipi, ct, order, al) *
                       hexagon_remainder(d, b, ct, order, steps, al);
  TruncatedSeries w6 = exp_linear(ipi, a, order, al) *
                       hexagon_remainder(d, ct, a, order, steps, al);
  TruncatedSeries assembled = w6 * w5 * w4 * w3 * w2 * w1;

  HexagonPaths paths = hexagon_paths(d);
  FormalConnection conn = punctured_plane_connection(a, b, al);
  Propagator loop = propagate(pull_back_to_path(conn, paths.loop), 0, 1, order, steps);
  CHECK(max_defect(assembled, loop.value) < 1e-8);
}

TEST_CASE("hexagon verification in the commuting quotient") {
  AlphabetPtr tiny = make_alphabet({"x"});
  AlgebraElement a = AlgebraElement::scalar(Cplx(0.4, 0.1));
  AlgebraElement b = AlgebraElement::scalar(Cplx(-0.3, 0.2));
  AlgebraElement c = AlgebraElement::scalar(Cplx(0.8, -0.5));
  VerifyReport rep = verify_hexagon(a, b, c, nullptr, VerifyMode::Limit, 3, 1e-6, 512,
                                    dyadic_grid(4, 10), tiny);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-6);
}

TEST_CASE("hexagon centrality precondition") {
  AlphabetPtr free3 = make_alphabet({"A", "B", "C"});
  CHECK_THROWS_AS(verify_hexagon(AlgebraElement::generator(0),
                                 AlgebraElement::generator(1),
                                 AlgebraElement::generator(2), nullptr,
                                 VerifyMode::FiniteDelta, 3, 1e-6, 64, {0.125}, free3),
                  precondition_error);
}

TEST_CASE("hexagon finite-delta verification") {
  BraidPresentation t3(3);
  VerifyReport rep =
      verify_hexagon(t3.generator(1, 2), t3.generator(2, 3), t3.generator(1, 3), &t3,
                     VerifyMode::FiniteDelta, 3, 1e-6, 512, {0.125}, t3.alphabet());
  CHECK(rep.pass);
  CHECK(rep.mode == "finite-delta");
}

TEST_CASE("pentagon verification in the commuting quotient") {
  AlphabetPtr tiny = make_alphabet({"x"});
  std::vector<AlgebraElement> images;
  double vals[6] = {0.35, -0.2, 0.1, 0.45, -0.15, 0.25};
  for (double v : vals) images.push_back(AlgebraElement::scalar(Cplx(v, 0.0)));
  VerifyReport rep = verify_pentagon(images, nullptr, VerifyMode::Limit, 3, 1e-6, 512,
                                     dyadic_grid(4, 10), tiny);
  CHECK(rep.pass);
  CHECK(rep.max_residual < 1e-6);
}

TEST_CASE("pentagon relation precondition") {
  AlphabetPtr free6 = make_alphabet({"u12", "u13", "u14", "u23", "u24", "u34"});
  std::vector<AlgebraElement> images;
  for (uint8_t i = 0; i < 6; ++i) images.push_back(AlgebraElement::generator(i));
  CHECK_THROWS_AS(verify_pentagon(images, nullptr, VerifyMode::FiniteDelta, 3, 1e-6,
                                  64, {0.125}, free6),
                  precondition_error);
}

TEST_CASE("pentagon finite-delta verification") {
  BraidPresentation t4(4);
  std::vector<AlgebraElement> images;
  for (uint8_t i = 0; i < 6; ++i) images.push_back(AlgebraElement::generator(i));
  VerifyReport rep = verify_pentagon(images, &t4, VerifyMode::FiniteDelta, 3, 1e-6,
                                     512, {0.125}, t4.alphabet());
  CHECK(rep.pass);
}

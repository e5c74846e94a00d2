#pragma once

#include <map>
#include <string>
#include <vector>

#include "kza/connection.hpp"
#include "kza/dk.hpp"

namespace kza {

struct precondition_error : std::runtime_error {
  explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
};

// regularized transport factor from the exponential half-path
struct HalfPathFactor {
  double epsilon = 0.0;
  TruncatedSeries value;
};

struct AssociatorEstimate {
  int order = 0;
  std::vector<double> grid;  // strictly decreasing regulators
  std::vector<TruncatedSeries> samples;
  TruncatedSeries extrapolated;
  // per successive grid pair, per lambda-degree sup-norm difference
  std::vector<std::vector<double>> convergence;
  bool converged = true;
};

// conjugated transport along the affine path delta -> 1-eps:
// exp(-lambda ln(eps) B) W exp(lambda ln(delta) A)
TruncatedSeries phi_sample(const AlgebraElement& a, const AlgebraElement& b, double delta,
                           double eps, int order, int steps, AlphabetPtr alphabet);

// psi_eps(B,A): regular factor of the half-path transport 1/2 -> 1-eps
HalfPathFactor psi_half(const AlgebraElement& b, const AlgebraElement& a, double eps,
                        int order, int steps, AlphabetPtr alphabet);

// grid of diagonal samples delta = eps; extrapolated value is the last
// sample unless `richardson` turns on polynomial extrapolation to 0
AssociatorEstimate phi_limit(const AlgebraElement& a, const AlgebraElement& b, int order,
                             const std::vector<double>& grid, int steps,
                             AlphabetPtr alphabet, bool richardson = false);

// polynomial extrapolation to delta = 0 through the smallest grid points
TruncatedSeries richardson_extrapolate(const std::vector<double>& grid,
                                       const std::vector<TruncatedSeries>& samples,
                                       int points = 6);

// monotone-difference criterion on the successive-difference table; a
// growing final gap flags the grid as non-convergent
bool convergence_flag(const std::vector<std::vector<double>>& table);

std::vector<double> dyadic_grid(int k_min, int k_max);  // 2^-k_min .. 2^-k_max

enum class LbhClass { L, B, H };

struct LbhFit {
  LbhClass cls = LbhClass::B;
  double scale = 0.0;     // C
  double exponent = 0.0;  // alpha for L, beta for H, unused for B
  double rms = 0.0;       // log-space fit residual of the chosen model
};

struct LbhDiagnostics {
  std::vector<double> grid;
  std::vector<std::vector<double>> norms;  // [degree][grid point]
  std::vector<LbhFit> per_degree;
};

// classify a regulator-dependent family as at-most-logarithmic, bounded
// or power-law-vanishing, per lambda-degree
LbhDiagnostics classify_lbh(const std::vector<double>& grid,
                            const std::vector<TruncatedSeries>& values);

// regular factor of the transport along the half circle around 1:
// exp(-lambda i pi B) W, obtained through the split-off constant part
TruncatedSeries hexagon_remainder(double delta, const AlgebraElement& a,
                                  const AlgebraElement& b, int order, int steps,
                                  AlphabetPtr alphabet);

enum class VerifyMode { FiniteDelta, Limit };

struct VerifyReport {
  std::string identity;
  std::string mode;
  double tolerance = 0.0;
  double delta = 0.0;                         // finite mode
  std::vector<double> grid;                   // limit mode
  std::vector<double> residual_per_degree;
  double max_residual = 0.0;
  bool pass = false;
  std::vector<std::vector<double>> convergence;  // limit mode, first phi factor
  double seconds = 0.0;
};

// Hexagon identity in a quotient: finite mode transports the composed
// six-path loop and tests triviality; limit mode assembles the identity
// from extrapolated associators. quotient == nullptr means the plain
// algebra (used with commuting scalar images).
VerifyReport verify_hexagon(const AlgebraElement& a, const AlgebraElement& b,
                            const AlgebraElement& c, const BraidPresentation* quotient,
                            VerifyMode mode, int order, double tol, int steps,
                            const std::vector<double>& grid, AlphabetPtr alphabet);

// Pentagon identity; images indexed by pairs (1,2),(1,3),(1,4),(2,3),(2,4),(3,4).
VerifyReport verify_pentagon(const std::vector<AlgebraElement>& images,
                             const BraidPresentation* quotient, VerifyMode mode,
                             int order, double tol, int steps,
                             const std::vector<double>& grid, AlphabetPtr alphabet);

}  // namespace kza

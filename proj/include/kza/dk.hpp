#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "kza/series.hpp"

namespace kza {

// Reduced row-echelon basis of the degree-d component of the two-sided
// ideal generated by the braid relations. Rows are monic on their pivot
// word and supported elsewhere only on non-pivot words.
struct GradedIdealBasis {
  int degree = 0;
  std::vector<Word> pivots;                  // ascending word order
  std::vector<RationalElement> rows;         // rows[i] has pivot pivots[i]
  std::vector<AlgebraElement> rows_complex;  // double image of rows, cached

  std::size_t rank() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
};

// Outcome of projecting a series onto the complement of the ideal span.
struct ReducedForm {
  TruncatedSeries residual;
  std::vector<double> residual_norm;  // per lambda-degree

  double max_norm() const {
    double m = 0.0;
    for (double v : residual_norm) m = std::max(m, v);
    return m;
  }
};

// Generators t_{ij} (i<j) of the infinitesimal-braid presentation together
// with its homogeneous degree-2 relations. Basis construction is memoized
// per degree and optionally mirrored to a disk cache.
class BraidPresentation {
public:
  explicit BraidPresentation(int n, std::optional<std::string> cache_dir = std::nullopt);

  int strand_count() const { return n_; }
  const AlphabetPtr& alphabet() const { return alphabet_; }
  const std::vector<RationalElement>& relations() const { return relations_; }

  // canonical generator id of the unordered pair {i, j}, 1-based strands
  int generator_id(int i, int j) const;
  AlgebraElement generator(int i, int j) const {
    return AlgebraElement::generator((uint8_t)generator_id(i, j));
  }

  // images of t_{ij} under the strand permutation sigma (1-based table)
  std::vector<AlgebraElement> permutation_images(const std::vector<int>& sigma) const;

  const GradedIdealBasis& ideal_component(int degree) const;

private:
  GradedIdealBasis build_component(int degree) const;

  int n_;
  AlphabetPtr alphabet_;
  std::vector<RationalElement> relations_;
  std::optional<std::string> cache_dir_;
  mutable std::recursive_mutex mutex_;
  mutable std::map<int, GradedIdealBasis> memo_;
};

BraidPresentation build_presentation(int n,
                                     std::optional<std::string> cache_dir = std::nullopt);

// Projects each lambda-degree of x (split by word length) onto the
// complement of the ideal span; the residual is what survives.
ReducedForm reduce_mod_ideal(const TruncatedSeries& x, const BraidPresentation& p);

std::pair<bool, ReducedForm> is_zero_mod_ideal(const TruncatedSeries& x,
                                               const BraidPresentation& p, double tol);

// element-level variant, degree split by word length
AlgebraElement reduce_element_mod_ideal(const AlgebraElement& x, const BraidPresentation& p);

}  // namespace kza

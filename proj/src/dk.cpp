#include "kza/dk.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace kza {

namespace {

constexpr int kCacheFormatVersion = 1;

std::vector<std::string> braid_generator_names(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      names.push_back("t" + std::to_string(i) + std::to_string(j));
  return names;
}

// one reduction pass of x against an RREF row set keyed by pivot word
RationalElement reduce_row(const RationalElement& x,
                           const std::map<Word, RationalElement>& rows) {
  RationalElement r = x;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : r.terms()) {
      auto it = rows.find(t.first);
      if (it == rows.end()) continue;
      r -= it->second * t.second;
      changed = true;
      break;
    }
  }
  return r;
}

Word leading_word(const RationalElement& x) { return x.terms().front().first; }

}  // namespace

BraidPresentation::BraidPresentation(int n, std::optional<std::string> cache_dir)
    : n_(n), cache_dir_(std::move(cache_dir)) {
  if (n < 2) throw std::invalid_argument("braid presentation needs n >= 2");
  if (n > 9) throw std::invalid_argument("braid presentation capped at n = 9");
  alphabet_ = make_alphabet(braid_generator_names(n));

  auto gen = [&](int i, int j) {
    return RationalElement::generator((uint8_t)generator_id(i, j));
  };
  // [t_ij + t_ik, t_jk] per distinguished element of every 3-subset
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k) {
        auto tij = gen(i, j), tik = gen(i, k), tjk = gen(j, k);
        relations_.push_back(RationalElement::commutator(tij + tik, tjk));
        relations_.push_back(RationalElement::commutator(tij + tjk, tik));
        relations_.push_back(RationalElement::commutator(tik + tjk, tij));
      }
  // [t_ij, t_kl] for disjoint pairs of every 4-subset
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          relations_.push_back(RationalElement::commutator(gen(i, j), gen(k, l)));
          relations_.push_back(RationalElement::commutator(gen(i, k), gen(j, l)));
          relations_.push_back(RationalElement::commutator(gen(i, l), gen(j, k)));
        }
}

BraidPresentation build_presentation(int n, std::optional<std::string> cache_dir) {
  return BraidPresentation(n, std::move(cache_dir));
}

int BraidPresentation::generator_id(int i, int j) const {
  if (i == j || i < 1 || j < 1 || i > n_ || j > n_)
    throw std::invalid_argument("bad generator index pair");
  if (i > j) std::swap(i, j);
  // pairs (1,2),(1,3),...,(1,n),(2,3),... in lex order
  return (i - 1) * n_ - (i - 1) * i / 2 + (j - i - 1);
}

std::vector<AlgebraElement> BraidPresentation::permutation_images(
    const std::vector<int>& sigma) const {
  if ((int)sigma.size() != n_) throw std::invalid_argument("permutation size mismatch");
  std::vector<AlgebraElement> images;
  for (int i = 1; i <= n_; ++i)
    for (int j = i + 1; j <= n_; ++j)
      images.push_back(generator(sigma[i - 1], sigma[j - 1]));
  return images;
}

namespace {

namespace fs = std::filesystem;

std::string cache_file_name(int n, int degree) {
  return "dk_n" + std::to_string(n) + "_d" + std::to_string(degree) + "_v" +
         std::to_string(kCacheFormatVersion) + ".json";
}

std::optional<GradedIdealBasis> load_cached(const std::string& dir, int n, int degree) {
  fs::path file = fs::path(dir) / cache_file_name(n, degree);
  std::ifstream in(file);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("n") != n || j.at("degree") != degree ||
        j.at("version") != kCacheFormatVersion)
      return std::nullopt;
    GradedIdealBasis b;
    b.degree = degree;
    for (const auto& row : j.at("rows")) {
      RationalElement e;
      for (const auto& term : row) {
        std::vector<uint8_t> ids;
        for (const auto& v : term.at("word")) ids.push_back((uint8_t)v.get<int>());
        e += RationalElement::single_term(Word::from_ids(ids),
                                          Rational::parse(term.at("coeff").get<std::string>()));
      }
      if (e.is_zero()) return std::nullopt;
      b.pivots.push_back(leading_word(e));
      b.rows.push_back(std::move(e));
    }
    for (const auto& r : b.rows) b.rows_complex.push_back(to_complex(r));
    return b;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void store_cached(const std::string& dir, int n, const GradedIdealBasis& b) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : b.rows) {
    nlohmann::json jrow = nlohmann::json::array();
    for (const auto& t : row.terms()) {
      nlohmann::json word = nlohmann::json::array();
      for (std::size_t i = 0; i < t.first.size(); ++i) word.push_back((int)t.first[i]);
      jrow.push_back({{"word", word}, {"coeff", t.second.str()}});
    }
    rows.push_back(jrow);
  }
  nlohmann::json j = {{"n", n},
                      {"degree", b.degree},
                      {"version", kCacheFormatVersion},
                      {"rows", rows}};
  fs::path final_path = fs::path(dir) / cache_file_name(n, b.degree);
  fs::path tmp_path = final_path;
  tmp_path += ".tmp";
  {
    std::ofstream out(tmp_path);
    if (!out) return;
    out << j.dump();
  }
  fs::rename(tmp_path, final_path, ec);  // atomic publish
}

}  // namespace

GradedIdealBasis BraidPresentation::build_component(int degree) const {
  GradedIdealBasis basis;
  basis.degree = degree;
  if (degree < 2 || relations_.empty()) return basis;

  // span rows: generators times the (d-1)-basis, plus relations times
  // length-(d-2) words on the right
  std::vector<RationalElement> pending;
  if (degree == 2) {
    pending = relations_;
  } else {
    const GradedIdealBasis& lower = ideal_component(degree - 1);
    for (std::size_t g = 0; g < alphabet_->size(); ++g) {
      RationalElement gen = RationalElement::generator((uint8_t)g);
      for (const auto& row : lower.rows) pending.push_back(gen * row);
    }
    // enumerate right words of length degree-2 in lex order
    std::size_t ng = alphabet_->size();
    std::vector<uint8_t> idx(degree - 2, 0);
    while (true) {
      RationalElement w = RationalElement::single_term(Word::from_ids(idx), Rational(1));
      for (const auto& rel : relations_) pending.push_back(rel * w);
      int pos = degree - 3;
      while (pos >= 0 && idx[pos] == ng - 1) idx[pos--] = 0;
      if (pos < 0) break;
      ++idx[pos];
    }
  }

  // forward echelon with monic pivots
  std::map<Word, RationalElement> rows;
  for (auto& cand : pending) {
    RationalElement r = reduce_row(cand, rows);
    if (r.is_zero()) continue;
    Word p = leading_word(r);
    r = r * (Rational(1) / r.coeff(p));
    rows.emplace(p, std::move(r));
  }
  // back-substitution: eliminate pivot words from every other row
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    const Word& p = it->first;
    for (auto& kv : rows) {
      if (kv.first == p) continue;
      Rational c = kv.second.coeff(p);
      if (!c.is_zero()) kv.second -= it->second * c;
    }
  }

  for (auto& kv : rows) {
    basis.pivots.push_back(kv.first);
    basis.rows.push_back(std::move(kv.second));
  }
  for (const auto& r : basis.rows) basis.rows_complex.push_back(to_complex(r));
  return basis;
}

const GradedIdealBasis& BraidPresentation::ideal_component(int degree) const {
  if (degree < 2) {
    static const GradedIdealBasis kEmpty;
    return kEmpty;
  }
  // recursive: build_component re-enters for degree-1
  std::lock_guard<std::recursive_mutex> lock(mutex_);
  auto it = memo_.find(degree);
  if (it != memo_.end()) return it->second;
  if (cache_dir_) {
    auto cached = load_cached(*cache_dir_, n_, degree);
    if (cached) return memo_.emplace(degree, std::move(*cached)).first->second;
  }
  GradedIdealBasis built = build_component(degree);
  if (cache_dir_) store_cached(*cache_dir_, n_, built);
  return memo_.emplace(degree, std::move(built)).first->second;
}

namespace {

// eliminate pivot coordinates of one fixed-word-length slice
AlgebraElement project_slice(const AlgebraElement& slice, const GradedIdealBasis& basis) {
  if (basis.empty()) return slice;
  AlgebraElement r = slice;
  for (std::size_t i = 0; i < basis.pivots.size(); ++i) {
    Cplx c = r.coeff(basis.pivots[i]);
    if (c == Cplx(0.0, 0.0)) continue;
    r -= basis.rows_complex[i] * c;
  }
  return r;
}

}  // namespace

AlgebraElement reduce_element_mod_ideal(const AlgebraElement& x,
                                        const BraidPresentation& p) {
  // the ideal is graded by word length; project each length slice
  std::map<std::size_t, AlgebraElement> slices;
  for (const auto& t : x.terms())
    slices[t.first.size()] += AlgebraElement::single_term(t.first, t.second);
  AlgebraElement out;
  for (auto& kv : slices) {
    if (kv.first < 2) {
      out += kv.second;
      continue;
    }
    out += project_slice(kv.second, p.ideal_component((int)kv.first));
  }
  return out;
}

ReducedForm reduce_mod_ideal(const TruncatedSeries& x, const BraidPresentation& p) {
  require_same_alphabet(x.alphabet(), p.alphabet());
  ReducedForm f;
  f.residual = TruncatedSeries(x.order(), x.alphabet());
  f.residual_norm.resize(x.order() + 1, 0.0);
  for (int r = 0; r <= x.order(); ++r) {
    AlgebraElement res = reduce_element_mod_ideal(x.coeff(r), p);
    f.residual_norm[r] = res.sup_norm();
    f.residual.set_coeff(r, std::move(res));
  }
  return f;
}

std::pair<bool, ReducedForm> is_zero_mod_ideal(const TruncatedSeries& x,
                                               const BraidPresentation& p, double tol) {
  ReducedForm f = reduce_mod_ideal(x, p);
  SeriesNorm n = x.sup_norm();
  bool ok = true;
  for (int r = 0; r <= x.order(); ++r)
    if (f.residual_norm[r] > tol * std::max(1.0, n.per_degree[r])) ok = false;
  return {ok, std::move(f)};
}

}  // namespace kza

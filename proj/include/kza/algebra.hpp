#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kza/rational.hpp"
#include "kza/word.hpp"

namespace kza {

using Cplx = std::complex<double>;

struct alphabet_mismatch : std::invalid_argument {
  alphabet_mismatch() : std::invalid_argument("alphabet mismatch") {}
};

// Immutable set of named generators; the generator id is the position.
class Alphabet {
public:
  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!index_.emplace(names_[i], (int)i).second)
        throw std::invalid_argument("duplicate generator name: " + names_[i]);
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  int index_of(const std::string& n) const {
    auto it = index_.find(n);
    return it == index_.end() ? -1 : it->second;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.names_ == b.names_;
  }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

inline AlphabetPtr make_alphabet(std::vector<std::string> names) {
  return std::make_shared<const Alphabet>(std::move(names));
}

inline bool same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

inline void require_same_alphabet(const AlphabetPtr& a, const AlphabetPtr& b) {
  if (!same_alphabet(a, b)) throw alphabet_mismatch();
}

template <class K>
struct ScalarOps;

template <>
struct ScalarOps<Cplx> {
  static double abs(const Cplx& c) { return std::abs(c); }
  static bool is_zero(const Cplx& c) { return c == Cplx(0.0, 0.0); }
  static Cplx zero() { return Cplx(0.0, 0.0); }
  static Cplx one() { return Cplx(1.0, 0.0); }
  static Cplx from_int(long long v) { return Cplx((double)v, 0.0); }
  // relative pruning threshold within one lambda-degree
  static constexpr double kPrune = 1e-15;
};

template <>
struct ScalarOps<Rational> {
  static double abs(const Rational& r) { return std::fabs(r.to_double()); }
  static bool is_zero(const Rational& r) { return r.is_zero(); }
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long long v) { return Rational(v); }
  static constexpr double kPrune = 0.0;
};

// Sparse element of the free associative unital algebra: term list sorted
// by word (length, then lex). Exact zeros are never stored.
template <class K>
class BasicElement {
public:
  using Term = std::pair<Word, K>;

  BasicElement() = default;

  static BasicElement unit() { return single_term(Word{}, ScalarOps<K>::one()); }
  static BasicElement generator(uint8_t id) {
    return single_term(Word::single(id), ScalarOps<K>::one());
  }
  static BasicElement single_term(const Word& w, const K& c) {
    BasicElement e;
    if (!ScalarOps<K>::is_zero(c)) e.terms_.push_back({w, c});
    return e;
  }
  static BasicElement scalar(const K& c) { return single_term(Word{}, c); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  K coeff(const Word& w) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), w,
                               [](const Term& t, const Word& x) { return t.first < x; });
    if (it != terms_.end() && it->first == w) return it->second;
    return ScalarOps<K>::zero();
  }

  std::size_t max_word_length() const {
    std::size_t m = 0;
    for (const auto& t : terms_) m = std::max(m, t.first.size());
    return m;
  }

  double sup_norm() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, ScalarOps<K>::abs(t.second));
    return m;
  }

  friend BasicElement operator+(const BasicElement& a, const BasicElement& b) {
    BasicElement r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() && ib != b.terms_.end()) {
      if (ia->first < ib->first) r.terms_.push_back(*ia++);
      else if (ib->first < ia->first) r.terms_.push_back(*ib++);
      else {
        K c = ia->second + ib->second;
        if (!ScalarOps<K>::is_zero(c)) r.terms_.push_back({ia->first, c});
        ++ia; ++ib;
      }
    }
    r.terms_.insert(r.terms_.end(), ia, a.terms_.end());
    r.terms_.insert(r.terms_.end(), ib, b.terms_.end());
    return r;
  }
  friend BasicElement operator-(const BasicElement& a, const BasicElement& b) {
    return a + (b * ScalarOps<K>::from_int(-1));
  }
  friend BasicElement operator*(const BasicElement& a, const K& c) {
    BasicElement r;
    if (ScalarOps<K>::is_zero(c)) return r;
    r.terms_.reserve(a.terms_.size());
    for (const auto& t : a.terms_) {
      K v = t.second * c;
      if (!ScalarOps<K>::is_zero(v)) r.terms_.push_back({t.first, v});
    }
    return r;
  }
  friend BasicElement operator*(const K& c, const BasicElement& a) { return a * c; }

  // concatenation product; affixing a fixed word keeps term lists sorted,
  // so few-term factors go through sorted merges instead of a hash map
  friend BasicElement operator*(const BasicElement& a, const BasicElement& b) {
    if (a.terms_.empty() || b.terms_.empty()) return BasicElement();
    if (b.terms_.size() == 1) {
      BasicElement r;
      r.terms_.reserve(a.terms_.size());
      for (const auto& ta : a.terms_) {
        K c = ta.second * b.terms_.front().second;
        if (!ScalarOps<K>::is_zero(c))
          r.terms_.push_back({ta.first.concat(b.terms_.front().first), c});
      }
      return r;
    }
    if (a.terms_.size() <= 8) {
      BasicElement r;
      for (const auto& ta : a.terms_) {
        BasicElement stream;
        stream.terms_.reserve(b.terms_.size());
        for (const auto& tb : b.terms_) {
          K c = ta.second * tb.second;
          if (!ScalarOps<K>::is_zero(c))
            stream.terms_.push_back({ta.first.concat(tb.first), c});
        }
        r += stream;
      }
      return r;
    }
    std::unordered_map<Word, K, WordHash> acc;
    acc.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) {
        K c = ta.second * tb.second;
        auto [it, fresh] = acc.emplace(ta.first.concat(tb.first), c);
        if (!fresh) it->second += c;
      }
    return from_map(acc);
  }

  BasicElement& operator+=(const BasicElement& o) { return *this = *this + o; }
  BasicElement& operator-=(const BasicElement& o) { return *this = *this - o; }

  friend bool operator==(const BasicElement& a, const BasicElement& b) {
    return a.terms_ == b.terms_;
  }

  static BasicElement commutator(const BasicElement& a, const BasicElement& b) {
    return a * b - b * a;
  }

  static BasicElement from_map(const std::unordered_map<Word, K, WordHash>& acc) {
    BasicElement r;
    r.terms_.reserve(acc.size());
    for (const auto& kv : acc)
      if (!ScalarOps<K>::is_zero(kv.second)) r.terms_.push_back(kv);
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& x, const Term& y) { return x.first < y.first; });
    return r;
  }

  // drop coefficients below a relative floor; used per lambda-degree
  void prune(double floor_abs) {
    if (floor_abs <= 0.0) return;
    terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                                [&](const Term& t) {
                                  return ScalarOps<K>::abs(t.second) < floor_abs;
                                }),
                 terms_.end());
  }

private:
  std::vector<Term> terms_;
};

using AlgebraElement = BasicElement<Cplx>;
using RationalElement = BasicElement<Rational>;

// Unique algebra morphism determined by generator images (degree 0 in lambda).
template <class K>
BasicElement<K> substitute_element(const BasicElement<K>& x,
                                   const std::vector<BasicElement<K>>& images) {
  BasicElement<K> out;
  for (const auto& t : x.terms()) {
    BasicElement<K> w = BasicElement<K>::scalar(t.second);
    for (std::size_t i = 0; i < t.first.size(); ++i) {
      uint8_t id = t.first[i];
      if (id >= images.size()) throw std::invalid_argument("missing generator image");
      w = w * images[id];
    }
    out += w;
  }
  return out;
}

inline AlgebraElement to_complex(const RationalElement& x) {
  AlgebraElement out;
  for (const auto& t : x.terms())
    out += AlgebraElement::single_term(t.first, Cplx(t.second.to_double(), 0.0));
  return out;
}

}  // namespace kza

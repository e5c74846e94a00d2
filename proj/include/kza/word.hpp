#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kza {

// Monomial of the free algebra: a finite sequence of generator ids.
// Inline storage keeps term maps allocation-free; lengths never exceed
// the truncation order of the surrounding series.
class Word {
public:
  static constexpr std::size_t kMaxLen = 24;

  Word() = default;

  static Word single(uint8_t id) {
    Word w;
    w.len_ = 1;
    w.id_[0] = id;
    return w;
  }
  static Word from_ids(const std::vector<uint8_t>& ids) {
    if (ids.size() > kMaxLen) throw std::length_error("word length cap exceeded");
    Word w;
    w.len_ = (uint8_t)ids.size();
    for (std::size_t i = 0; i < ids.size(); ++i) w.id_[i] = ids[i];
    return w;
  }

  std::size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }
  uint8_t operator[](std::size_t i) const { return id_[i]; }

  Word concat(const Word& o) const {
    if (len_ + o.len_ > kMaxLen) throw std::length_error("word length cap exceeded");
    Word r = *this;
    for (std::size_t i = 0; i < o.len_; ++i) r.id_[r.len_++] = o.id_[i];
    return r;
  }

  friend bool operator==(const Word& a, const Word& b) {
    if (a.len_ != b.len_) return false;
    for (std::size_t i = 0; i < a.len_; ++i)
      if (a.id_[i] != b.id_[i]) return false;
    return true;
  }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

  // length first, then lexicographic in generator ids
  friend bool operator<(const Word& a, const Word& b) {
    if (a.len_ != b.len_) return a.len_ < b.len_;
    for (std::size_t i = 0; i < a.len_; ++i)
      if (a.id_[i] != b.id_[i]) return a.id_[i] < b.id_[i];
    return false;
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    h = (h ^ len_) * 1099511628211ull;
    for (std::size_t i = 0; i < len_; ++i) h = (h ^ id_[i]) * 1099511628211ull;
    return h;
  }

private:
  uint8_t len_ = 0;
  std::array<uint8_t, kMaxLen> id_{};
};

struct WordHash {
  std::size_t operator()(const Word& w) const { return w.hash(); }
};

}  // namespace kza

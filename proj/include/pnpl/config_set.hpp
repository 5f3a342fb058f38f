#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace pnpl {

// Extensional representation of a formula: the subset of a feature model's
// valid configurations that satisfy it, as a fixed-width bitset over indices
// into the canonical valid-configuration list. Conjunction maps to
// intersection, disjunction to union, negation to complement within the
// valid set.
class ConfigSet {
 public:
  ConfigSet() = default;

  explicit ConfigSet(std::size_t universe, bool fill = false)
      : size_(universe), words_((universe + 63) / 64, fill ? ~0ULL : 0ULL) {
    trim();
  }

  std::size_t universe_size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1ULL; }

  void set(std::size_t i, bool value = true) {
    const std::uint64_t bit = 1ULL << (i % 64);
    if (value)
      words_[i / 64] |= bit;
    else
      words_[i / 64] &= ~bit;
  }

  std::size_t count() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  ConfigSet operator&(const ConfigSet& other) const {
    ConfigSet out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] & other.words_[i];
    return out;
  }

  ConfigSet operator|(const ConfigSet& other) const {
    ConfigSet out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] | other.words_[i];
    return out;
  }

  // Complement within the valid-configuration universe.
  ConfigSet complemented() const {
    ConfigSet out(size_);
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
    out.trim();
    return out;
  }

  bool is_subset_of(const ConfigSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (std::size_t i = 0; i < size_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  // Bit-pattern ordering; used only as a deterministic tie-breaker.
  friend auto operator<=>(const ConfigSet&, const ConfigSet&) = default;
  friend bool operator==(const ConfigSet&, const ConfigSet&) = default;

  std::size_t hash() const {
    std::size_t h = size_ * 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t w : words_) h = (h ^ w) * 1099511628211ULL;
    return h;
  }

 private:
  void trim() {
    if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (1ULL << (size_ % 64)) - 1ULL;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ConfigSetHash {
  std::size_t operator()(const ConfigSet& s) const { return s.hash(); }
};

}  // namespace pnpl

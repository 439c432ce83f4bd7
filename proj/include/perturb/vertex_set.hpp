#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace perturb {

using Vertex = std::uint32_t;
using Word = std::uint64_t;

inline constexpr std::size_t kWordBits = 64;

inline constexpr std::size_t words_for(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

/// Index of the first set bit at or after `from` in a word span, or `limit`.
std::size_t find_next_bit(std::span<const Word> words, std::size_t from, std::size_t limit);

/**
 * Dense subset of the vertex universe 0..n-1.
 *
 * The trailing bits of the last word are always zero, so popcounts over the
 * raw words equal the cardinality.
 */
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe);
  VertexSet(std::size_t universe, std::initializer_list<Vertex> members);

  static VertexSet full(std::size_t universe);
  static VertexSet from_vector(std::size_t universe, std::span<const Vertex> members);

  std::size_t universe() const { return universe_; }
  std::size_t count() const;
  bool empty() const;

  bool contains(Vertex v) const {
    return (words_[v / kWordBits] >> (v % kWordBits)) & 1U;
  }
  void insert(Vertex v) { words_[v / kWordBits] |= Word{1} << (v % kWordBits); }
  void erase(Vertex v) { words_[v / kWordBits] &= ~(Word{1} << (v % kWordBits)); }
  void clear();

  /// First member >= from, or universe() if none.
  std::size_t find_next(std::size_t from) const {
    return find_next_bit(words_, from, universe_);
  }
  std::size_t find_first() const { return find_next(0); }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(bits));
        f(static_cast<Vertex>(w * kWordBits + bit));
        bits &= bits - 1;
      }
    }
  }

  std::vector<Vertex> to_vector() const;

  VertexSet& operator|=(const VertexSet& other);
  VertexSet& operator&=(const VertexSet& other);
  /// Set difference.
  VertexSet& operator-=(const VertexSet& other);
  VertexSet& or_words(std::span<const Word> row);
  VertexSet complement() const;

  bool intersects(const VertexSet& other) const;
  bool intersects(std::span<const Word> row) const;
  std::size_t count_intersection(std::span<const Word> row) const;

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  friend bool operator==(const VertexSet& a, const VertexSet& b) = default;

 private:
  void trim();

  std::size_t universe_ = 0;
  std::vector<Word> words_;
};

VertexSet operator|(VertexSet a, const VertexSet& b);
VertexSet operator&(VertexSet a, const VertexSet& b);
VertexSet operator-(VertexSet a, const VertexSet& b);

}  // namespace perturb

#include "perturb/vertex_set.hpp"

#include <stdexcept>

namespace perturb {

std::size_t find_next_bit(std::span<const Word> words, std::size_t from, std::size_t limit) {
  if (from >= limit) return limit;
  std::size_t w = from / kWordBits;
  Word bits = words[w] & (~Word{0} << (from % kWordBits));
  while (true) {
    if (bits != 0) {
      const std::size_t idx = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
      return idx < limit ? idx : limit;
    }
    if (++w >= words.size()) return limit;
    bits = words[w];
  }
}

VertexSet::VertexSet(std::size_t universe) : universe_(universe), words_(words_for(universe), 0) {}

VertexSet::VertexSet(std::size_t universe, std::initializer_list<Vertex> members)
    : VertexSet(universe) {
  for (Vertex v : members) {
    if (v >= universe) throw std::out_of_range("vertex outside set universe");
    insert(v);
  }
}

VertexSet VertexSet::full(std::size_t universe) {
  VertexSet s(universe);
  for (auto& w : s.words_) w = ~Word{0};
  s.trim();
  return s;
}

VertexSet VertexSet::from_vector(std::size_t universe, std::span<const Vertex> members) {
  VertexSet s(universe);
  for (Vertex v : members) {
    if (v >= universe) throw std::out_of_range("vertex outside set universe");
    s.insert(v);
  }
  return s;
}

std::size_t VertexSet::count() const {
  std::size_t c = 0;
  for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool VertexSet::empty() const {
  for (Word w : words_)
    if (w != 0) return false;
  return true;
}

void VertexSet::clear() {
  for (auto& w : words_) w = 0;
}

std::vector<Vertex> VertexSet::to_vector() const {
  std::vector<Vertex> out;
  for_each([&](Vertex v) { out.push_back(v); });
  return out;
}

VertexSet& VertexSet::operator|=(const VertexSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

VertexSet& VertexSet::operator&=(const VertexSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

VertexSet& VertexSet::operator-=(const VertexSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

VertexSet& VertexSet::or_words(std::span<const Word> row) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= row[i];
  return *this;
}

VertexSet VertexSet::complement() const {
  VertexSet s(universe_);
  for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] = ~words_[i];
  s.trim();
  return s;
}

bool VertexSet::intersects(const VertexSet& other) const { return intersects(other.words_); }

bool VertexSet::intersects(std::span<const Word> row) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & row[i]) != 0) return true;
  return false;
}

std::size_t VertexSet::count_intersection(std::span<const Word> row) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < words_.size(); ++i)
    c += static_cast<std::size_t>(std::popcount(words_[i] & row[i]));
  return c;
}

void VertexSet::trim() {
  if (universe_ % kWordBits != 0 && !words_.empty())
    words_.back() &= (Word{1} << (universe_ % kWordBits)) - 1;
}

VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }

}  // namespace perturb

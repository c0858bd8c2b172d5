#pragma once

#include <vector>

#include "torus/circle.hpp"

namespace torus {

// A leveled set of characters: levels are finite, ordered, and globally
// deduplicated (a character keeps its first level of appearance).
class CharSet {
 public:
  CharSet() = default;
  explicit CharSet(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t level_count() const { return levels_.size(); }
  const std::vector<std::vector<Character>>& levels() const { return levels_; }
  const std::vector<Character>& level(std::size_t n) const {
    return levels_.at(n);
  }

  // Appends a level, dropping characters already present at earlier levels
  // (and duplicates within the new level). Order within the level is kept.
  void push_level(std::vector<Character> chars);

  bool contains(const Character& c) const;
  std::size_t total() const;

  // Flat enumeration in level order; the index is the position in the
  // sequence-of-characters view.
  std::vector<Character> flatten() const;

 private:
  std::size_t dim_ = 1;
  std::vector<std::vector<Character>> levels_;
};

// The two directions of the sequence/leveled-set dictionary. A sequence is
// convertible when no character repeats infinitely often; on a finite
// prefix this is approximated by flagging a constant tail.
std::vector<Character> charset_to_sequence(const CharSet& b);

struct SequenceConversion {
  bool constant_tail = false;  // flagged, not converted
  Character tail_value;        // the repeating character when flagged
  CharSet set;                 // singleton levels, first occurrences
};
SequenceConversion sequence_to_charset(const std::vector<Character>& u,
                                       std::size_t dim,
                                       std::size_t tail_run = 3);

}  // namespace torus

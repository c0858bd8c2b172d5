#include "torus/charset.hpp"

namespace torus {

void CharSet::push_level(std::vector<Character> chars) {
  std::vector<Character> kept;
  kept.reserve(chars.size());
  for (auto& c : chars) {
    if (c.dim() != dim_)
      throw std::invalid_argument("character dimension mismatch");
    bool dup = contains(c);
    if (!dup)
      for (const auto& k : kept)
        if (k == c) {
          dup = true;
          break;
        }
    if (!dup) kept.push_back(std::move(c));
  }
  levels_.push_back(std::move(kept));
}

bool CharSet::contains(const Character& c) const {
  for (const auto& lvl : levels_)
    for (const auto& k : lvl)
      if (k == c) return true;
  return false;
}

std::size_t CharSet::total() const {
  std::size_t n = 0;
  for (const auto& lvl : levels_) n += lvl.size();
  return n;
}

std::vector<Character> CharSet::flatten() const {
  std::vector<Character> out;
  out.reserve(total());
  for (const auto& lvl : levels_)
    for (const auto& k : lvl) out.push_back(k);
  return out;
}

std::vector<Character> charset_to_sequence(const CharSet& b) {
  return b.flatten();
}

SequenceConversion sequence_to_charset(const std::vector<Character>& u,
                                       std::size_t dim,
                                       std::size_t tail_run) {
  SequenceConversion out;
  out.set = CharSet(dim);
  if (u.size() >= tail_run && tail_run >= 2) {
    bool constant = true;
    for (std::size_t i = u.size() - tail_run + 1; i < u.size(); ++i)
      if (!(u[i] == u[u.size() - tail_run])) {
        constant = false;
        break;
      }
    if (constant) {
      out.constant_tail = true;
      out.tail_value = u.back();
      return out;
    }
  }
  for (const auto& c : u) {
    if (!out.set.contains(c)) out.set.push_level({c});
  }
  return out;
}

}  // namespace torus

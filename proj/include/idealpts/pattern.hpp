#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "idealpts/words.hpp"

namespace idealpts {

enum class BoolOp { Union, Intersection, Difference, SymmetricDifference };

// Exact normal form for the block-regular fragment of P(omega).
//
// Below `head_len` membership is a stored bit. From `head_len` on, membership of n
// depends only on three coordinates:
//   level(n) mod `levels`, where level(n) = floor(log2(n + 1));
//   the `depth` bits of n + 1 that follow its leading one (the cone of n);
//   n mod `modulus`.
// Residue classes, intervals, finite sets, cones {idx(u) : u extends s}, level sets
// and bit-pattern sets all live here, and the fragment is closed under Boolean
// operations. Every cell that is switched on is hit by a set of positive upper
// density, so the set is infinite iff some cell is on.
class Pattern {
 public:
  static constexpr std::size_t kMaxCells = std::size_t{1} << 22;
  static constexpr Nat kMaxHead = Nat{1} << 22;

  static Pattern empty();
  static Pattern all();
  static std::optional<Pattern> finite(const std::vector<Nat>& elements);
  static std::optional<Pattern> interval(Nat lo, std::optional<Nat> hi);  // hi inclusive
  static std::optional<Pattern> residue(Nat a, Nat m);
  static std::optional<Pattern> subtree(const BinWord& s);
  // {k : bits of k at positions lo .. lo+|p|-1 spell p}
  static std::optional<Pattern> bit_match(unsigned lo, const BinWord& p);
  // {n : level(n) in K}; K must be a pattern without levels/depth structure.
  static std::optional<Pattern> level_set(const Pattern& k);

  std::optional<Pattern> combine(BoolOp op, const Pattern& other) const;
  Pattern complement() const;

  bool contains(Nat n) const;
  bool is_empty() const;
  bool is_finite() const;
  // For finite patterns: the largest member (or nullopt when empty).
  std::optional<Nat> max_element() const;
  std::optional<Nat> first_at_or_after(Nat from) const;
  bool equals(const Pattern& other) const;

  // Plain eventually periodic sets (no level or cone structure).
  bool is_periodic() const { return levels_ == 1 && depth_ == 0; }
  Nat head_len() const { return head_len_; }
  Nat modulus() const { return modulus_; }
  Nat levels() const { return levels_; }
  unsigned depth() const { return depth_; }
  // Number of switched-on residues in the periodic part (periodic patterns only).
  Nat periodic_count() const;
  // Every level class has a switched-on cell, so every long enough level meets the set.
  bool meets_every_level() const;
  bool head_bit(Nat n) const { return head_[n] != 0; }
  bool cell(Nat level_class, Nat cone, Nat residue) const;

 private:
  Pattern() = default;
  std::size_t cell_index(Nat level_class, Nat cone, Nat residue) const;
  static std::optional<Pattern> make(Nat head_len, Nat levels, unsigned depth, Nat modulus);

  Nat head_len_ = 0;
  std::vector<std::uint8_t> head_;
  Nat levels_ = 1;
  unsigned depth_ = 0;
  Nat modulus_ = 1;
  std::vector<std::uint8_t> table_{0};
};

}  // namespace idealpts

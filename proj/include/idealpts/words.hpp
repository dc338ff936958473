#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace idealpts {

using Nat = std::uint64_t;
inline constexpr Nat kNatMax = std::numeric_limits<Nat>::max();

// Finite 0/1 word. Position 0 is the first letter.
class BinWord {
 public:
  BinWord() = default;
  explicit BinWord(std::vector<std::uint8_t> bits);
  static BinWord parse(const std::string& text);  // "0110", "" or "-" for the empty word
  static BinWord zeros(std::size_t n);
  static BinWord ones(std::size_t n);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::uint8_t back() const { return bits_.back(); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  BinWord append(std::uint8_t bit) const;
  BinWord concat(const BinWord& tail) const;
  BinWord prefix(std::size_t n) const;
  BinWord flip_last() const;
  bool is_prefix_of(const BinWord& other) const;
  bool is_zero() const;
  std::size_t count_ones() const;

  std::string str() const;  // "-" for the empty word

  friend bool operator==(const BinWord&, const BinWord&) = default;
  friend auto operator<=>(const BinWord&, const BinWord&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Level-order index: idx(u) = value of 1^u read in binary, minus one.
Nat word_index(const BinWord& u);
BinWord word_from_index(Nat n);
// Sum of 2^i * s_i (little-endian value); requires |s| < 64.
Nat word_value(const BinWord& s);
// Bit length of n (0 for n = 0).
unsigned bit_length(Nat n);
// floor(log2(n + 1)): the length of word_from_index(n).
unsigned level_of(Nat n);

// Pairing pi(n, k) = 2^n (2k + 1) - 1 and its inverse.
bool pair_fits(Nat n, Nat k);
Nat pair(Nat n, Nat k);  // throws std::overflow_error when the code exceeds 64 bits
std::pair<Nat, Nat> unpair(Nat m);

// Compare pi(n1,k1) with pi(n2,k2) without materialising the codes.
int compare_pair_codes(Nat n1, Nat k1, Nat n2, Nat k2);

Nat gcd_nat(Nat a, Nat b);
// lcm that reports overflow past `cap` by returning 0.
Nat lcm_capped(Nat a, Nat b, Nat cap);
Nat pow2_mod(Nat e, Nat m);
Nat mul_mod(Nat a, Nat b, Nat m);

}  // namespace idealpts

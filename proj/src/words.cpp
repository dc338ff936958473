#include "idealpts/words.hpp"

#include <bit>

namespace idealpts {

BinWord::BinWord(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw std::invalid_argument("BinWord: letters must be 0 or 1");
  }
}

BinWord BinWord::parse(const std::string& text) {
  std::vector<std::uint8_t> bits;
  if (text == "-") return BinWord{};
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != ',' && c != ' ') {
      throw std::invalid_argument("BinWord: unexpected character in '" + text + "'");
    }
  }
  return BinWord(std::move(bits));
}

BinWord BinWord::zeros(std::size_t n) { return BinWord(std::vector<std::uint8_t>(n, 0)); }
BinWord BinWord::ones(std::size_t n) { return BinWord(std::vector<std::uint8_t>(n, 1)); }

BinWord BinWord::append(std::uint8_t bit) const {
  auto b = bits_;
  b.push_back(bit);
  return BinWord(std::move(b));
}

BinWord BinWord::concat(const BinWord& tail) const {
  auto b = bits_;
  b.insert(b.end(), tail.bits_.begin(), tail.bits_.end());
  return BinWord(std::move(b));
}

BinWord BinWord::prefix(std::size_t n) const {
  if (n > bits_.size()) throw std::out_of_range("BinWord::prefix past end");
  return BinWord(std::vector<std::uint8_t>(bits_.begin(), bits_.begin() + static_cast<long>(n)));
}

BinWord BinWord::flip_last() const {
  if (bits_.empty()) throw std::invalid_argument("BinWord::flip_last on empty word");
  auto b = bits_;
  b.back() ^= 1U;
  return BinWord(std::move(b));
}

bool BinWord::is_prefix_of(const BinWord& other) const {
  if (bits_.size() > other.bits_.size()) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] != other.bits_[i]) return false;
  }
  return true;
}

bool BinWord::is_zero() const {
  for (auto b : bits_) {
    if (b) return false;
  }
  return true;
}

std::size_t BinWord::count_ones() const {
  std::size_t c = 0;
  for (auto b : bits_) c += b;
  return c;
}

std::string BinWord::str() const {
  if (bits_.empty()) return "-";
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

Nat word_index(const BinWord& u) {
  if (u.size() >= 63) throw std::overflow_error("word_index: word too long");
  Nat v = 1;
  for (auto b : u.bits()) v = (v << 1U) | b;
  return v - 1;
}

BinWord word_from_index(Nat n) {
  if (n == kNatMax) throw std::overflow_error("word_from_index: index too large");
  Nat v = n + 1;
  unsigned len = bit_length(v) - 1;
  std::vector<std::uint8_t> bits(len);
  for (unsigned i = 0; i < len; ++i) bits[i] = static_cast<std::uint8_t>((v >> (len - 1 - i)) & 1U);
  return BinWord(std::move(bits));
}

Nat word_value(const BinWord& s) {
  if (s.size() >= 64) throw std::overflow_error("word_value: word too long");
  Nat v = 0;
  for (std::size_t i = 0; i < s.size(); ++i) v |= static_cast<Nat>(s[i]) << i;
  return v;
}

unsigned bit_length(Nat n) { return static_cast<unsigned>(std::bit_width(n)); }

unsigned level_of(Nat n) {
  if (n == kNatMax) return 64;
  return bit_length(n + 1) - 1;
}

bool pair_fits(Nat n, Nat k) {
  if (n >= 64) return false;
  unsigned __int128 odd = static_cast<unsigned __int128>(k) * 2 + 1;
  unsigned __int128 v = odd << n;
  if ((v >> n) != odd) return false;
  return v - 1 <= kNatMax;
}

Nat pair(Nat n, Nat k) {
  if (!pair_fits(n, k)) throw std::overflow_error("pair: code exceeds 64 bits");
  unsigned __int128 odd = static_cast<unsigned __int128>(k) * 2 + 1;
  return static_cast<Nat>((odd << n) - 1);
}

std::pair<Nat, Nat> unpair(Nat m) {
  unsigned __int128 v = static_cast<unsigned __int128>(m) + 1;
  Nat n = 0;
  while ((v & 1U) == 0) {
    v >>= 1U;
    ++n;
  }
  return {n, static_cast<Nat>((v - 1) / 2)};
}

namespace {
unsigned bitlen128(unsigned __int128 v) {
  unsigned len = 0;
  while (v) {
    v >>= 1U;
    ++len;
  }
  return len;
}
}  // namespace

int compare_pair_codes(Nat n1, Nat k1, Nat n2, Nat k2) {
  if (n1 == n2 && k1 == k2) return 0;
  bool swapped = false;
  if (n1 < n2) {
    std::swap(n1, n2);
    std::swap(k1, k2);
    swapped = true;
  }
  // compare 2^d * o1 against o2
  const Nat d = n1 - n2;
  const unsigned __int128 o1 = static_cast<unsigned __int128>(k1) * 2 + 1;
  const unsigned __int128 o2 = static_cast<unsigned __int128>(k2) * 2 + 1;
  int result = 0;
  const unsigned __int128 len1 = bitlen128(o1) + static_cast<unsigned __int128>(d);
  const unsigned __int128 len2 = bitlen128(o2);
  if (len1 != len2) {
    result = len1 > len2 ? 1 : -1;
  } else {
    unsigned __int128 lhs = o1 << d;
    result = lhs == o2 ? 0 : (lhs > o2 ? 1 : -1);
  }
  return swapped ? -result : result;
}

Nat gcd_nat(Nat a, Nat b) {
  while (b) {
    Nat t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Nat lcm_capped(Nat a, Nat b, Nat cap) {
  if (a == 0 || b == 0) return 0;
  unsigned __int128 l = static_cast<unsigned __int128>(a / gcd_nat(a, b)) * b;
  if (l > cap) return 0;
  return static_cast<Nat>(l);
}

Nat mul_mod(Nat a, Nat b, Nat m) {
  return static_cast<Nat>(static_cast<unsigned __int128>(a) * b % m);
}

Nat pow2_mod(Nat e, Nat m) {
  if (m == 1) return 0;
  Nat result = 1 % m;
  Nat base = 2 % m;
  while (e) {
    if (e & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1U;
  }
  return result;
}

}  // namespace idealpts

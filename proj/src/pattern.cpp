#include "idealpts/pattern.hpp"

#include <algorithm>

namespace idealpts {

namespace {
bool apply(BoolOp op, bool a, bool b) {
  switch (op) {
    case BoolOp::Union: return a || b;
    case BoolOp::Intersection: return a && b;
    case BoolOp::Difference: return a && !b;
    case BoolOp::SymmetricDifference: return a != b;
  }
  return false;
}
}  // namespace

std::optional<Pattern> Pattern::make(Nat head_len, Nat levels, unsigned depth, Nat modulus) {
  if (head_len > kMaxHead || depth > 20) return std::nullopt;
  const Nat cones = Nat{1} << depth;
  if (head_len + 1 < cones) head_len = cones - 1;
  if (head_len > kMaxHead) return std::nullopt;
  unsigned __int128 cells = static_cast<unsigned __int128>(levels) * cones * modulus;
  if (cells > kMaxCells) return std::nullopt;
  Pattern p;
  p.head_len_ = head_len;
  p.head_.assign(head_len, 0);
  p.levels_ = levels;
  p.depth_ = depth;
  p.modulus_ = modulus;
  p.table_.assign(static_cast<std::size_t>(cells), 0);
  return p;
}

Pattern Pattern::empty() { return *make(0, 1, 0, 1); }

Pattern Pattern::all() {
  auto p = *make(0, 1, 0, 1);
  p.table_[0] = 1;
  return p;
}

std::optional<Pattern> Pattern::finite(const std::vector<Nat>& elements) {
  Nat top = 0;
  for (Nat e : elements) top = std::max(top, e + 1);
  auto p = make(top, 1, 0, 1);
  if (!p) return std::nullopt;
  for (Nat e : elements) p->head_[e] = 1;
  return p;
}

std::optional<Pattern> Pattern::interval(Nat lo, std::optional<Nat> hi) {
  if (hi) {
    if (*hi < lo) return empty();
    auto p = make(*hi + 1, 1, 0, 1);
    if (!p) return std::nullopt;
    for (Nat n = lo; n <= *hi; ++n) p->head_[n] = 1;
    return p;
  }
  auto p = make(lo, 1, 0, 1);
  if (!p) return std::nullopt;
  p->table_[0] = 1;
  return p;
}

std::optional<Pattern> Pattern::residue(Nat a, Nat m) {
  if (m == 0) return std::nullopt;
  auto p = make(0, 1, 0, m);
  if (!p) return std::nullopt;
  p->table_[a % m] = 1;
  return p;
}

std::optional<Pattern> Pattern::subtree(const BinWord& s) {
  const unsigned d = static_cast<unsigned>(s.size());
  auto p = make(0, 1, d, 1);
  if (!p) return std::nullopt;
  Nat cone = 0;
  for (std::size_t i = 0; i < s.size(); ++i) cone = (cone << 1U) | s[i];
  p->table_[p->cell_index(0, cone, 0)] = 1;
  return p;
}

std::optional<Pattern> Pattern::bit_match(unsigned lo, const BinWord& pat) {
  const unsigned hi = lo + static_cast<unsigned>(pat.size());
  if (hi >= 40) return std::nullopt;
  auto p = make(0, 1, 0, Nat{1} << hi);
  if (!p) return std::nullopt;
  for (Nat r = 0; r < p->modulus_; ++r) {
    bool ok = true;
    for (unsigned i = 0; i < pat.size() && ok; ++i) ok = ((r >> (lo + i)) & 1U) == pat[i];
    if (ok) p->table_[r] = 1;
  }
  return p;
}

std::optional<Pattern> Pattern::level_set(const Pattern& k) {
  if (!k.is_periodic()) return std::nullopt;
  if (k.head_len_ >= 23) return std::nullopt;
  const Nat head = (Nat{1} << k.head_len_) - 1;
  auto p = make(head, k.modulus_, 0, 1);
  if (!p) return std::nullopt;
  for (Nat n = 0; n < head; ++n) p->head_[n] = k.contains(level_of(n)) ? 1 : 0;
  for (Nat l = 0; l < k.modulus_; ++l) {
    // levels >= k.head_len_ with level = l mod k.modulus_
    p->table_[p->cell_index(l, 0, 0)] = k.table_[l] ? 1 : 0;
  }
  return p;
}

std::size_t Pattern::cell_index(Nat level_class, Nat cone, Nat residue) const {
  return static_cast<std::size_t>((level_class * (Nat{1} << depth_) + cone) * modulus_ + residue);
}

bool Pattern::cell(Nat level_class, Nat cone, Nat residue) const {
  return table_[cell_index(level_class, cone, residue)] != 0;
}

bool Pattern::contains(Nat n) const {
  if (n < head_len_) return head_[n] != 0;
  const unsigned lvl = level_of(n);
  Nat cone = 0;
  if (depth_ > 0) {
    unsigned __int128 v = static_cast<unsigned __int128>(n) + 1;
    cone = static_cast<Nat>((v >> (lvl - depth_)) & ((Nat{1} << depth_) - 1));
  }
  return table_[cell_index(lvl % levels_, cone, n % modulus_)] != 0;
}

std::optional<Pattern> Pattern::combine(BoolOp op, const Pattern& o) const {
  const Nat lv = lcm_capped(levels_, o.levels_, kMaxCells);
  const Nat md = lcm_capped(modulus_, o.modulus_, kMaxCells);
  if (lv == 0 || md == 0) return std::nullopt;
  const unsigned dp = std::max(depth_, o.depth_);
  auto p = make(std::max(head_len_, o.head_len_), lv, dp, md);
  if (!p) return std::nullopt;
  for (Nat n = 0; n < p->head_len_; ++n) p->head_[n] = apply(op, contains(n), o.contains(n)) ? 1 : 0;
  const Nat cones = Nat{1} << dp;
  for (Nat l = 0; l < lv; ++l) {
    for (Nat c = 0; c < cones; ++c) {
      const Nat ca = c >> (dp - depth_);
      const Nat cb = c >> (dp - o.depth_);
      for (Nat r = 0; r < md; ++r) {
        bool a = table_[cell_index(l % levels_, ca, r % modulus_)] != 0;
        bool b = o.table_[o.cell_index(l % o.levels_, cb, r % o.modulus_)] != 0;
        p->table_[p->cell_index(l, c, r)] = apply(op, a, b) ? 1 : 0;
      }
    }
  }
  return p;
}

Pattern Pattern::complement() const {
  Pattern p = *this;
  for (auto& b : p.head_) b ^= 1U;
  for (auto& b : p.table_) b ^= 1U;
  return p;
}

bool Pattern::is_finite() const {
  return std::all_of(table_.begin(), table_.end(), [](std::uint8_t b) { return b == 0; });
}

bool Pattern::is_empty() const {
  return is_finite() && std::all_of(head_.begin(), head_.end(), [](std::uint8_t b) { return b == 0; });
}

std::optional<Nat> Pattern::max_element() const {
  if (!is_finite()) return std::nullopt;
  for (Nat n = head_len_; n-- > 0;) {
    if (head_[n]) return n;
  }
  return std::nullopt;
}

std::optional<Nat> Pattern::first_at_or_after(Nat from) const {
  for (Nat n = from; n < head_len_; ++n) {
    if (head_[n]) return n;
  }
  if (is_finite()) return std::nullopt;
  Nat start = std::max(from, head_len_);
  for (unsigned lvl = level_of(start); lvl < 63; ++lvl) {
    const Nat lc = lvl % levels_;
    const Nat cones = Nat{1} << depth_;
    for (Nat c = 0; c < cones; ++c) {
      // block of n with n + 1 in [(2^D + c) 2^(lvl-D), (2^D + c + 1) 2^(lvl-D))
      const Nat width = Nat{1} << (lvl - depth_);
      const Nat lo = ((cones + c) << (lvl - depth_)) - 1;
      const Nat hi = lo + width;  // exclusive
      if (hi <= start) continue;
      bool any = false;
      for (Nat r = 0; r < modulus_ && !any; ++r) any = table_[cell_index(lc, c, r)] != 0;
      if (!any) continue;
      for (Nat n = std::max(lo, start); n < hi; ++n) {
        if (table_[cell_index(lc, c, n % modulus_)]) return n;
      }
    }
  }
  return std::nullopt;
}

bool Pattern::equals(const Pattern& other) const {
  auto x = combine(BoolOp::SymmetricDifference, other);
  return x && x->is_empty();
}

Nat Pattern::periodic_count() const {
  Nat c = 0;
  for (auto b : table_) c += b;
  return c;
}

bool Pattern::meets_every_level() const {
  const std::size_t per_level = static_cast<std::size_t>((Nat{1} << depth_) * modulus_);
  for (Nat l = 0; l < levels_; ++l) {
    auto first = table_.begin() + static_cast<std::ptrdiff_t>(l * per_level);
    if (std::find(first, first + static_cast<std::ptrdiff_t>(per_level), 1) == first + static_cast<std::ptrdiff_t>(per_level)) return false;
  }
  return true;
}

}  // namespace idealpts

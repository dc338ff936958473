#include "idealpts/cantor.hpp"

#include <deque>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

namespace idealpts {

std::string Dyadic::str() const {
  if (!exp) return "0";
  if (*exp == 0) return "1";
  return "2^-" + std::to_string(*exp);
}

// ---------------------------------------------------------------- points

struct CantorPoint::LazyState {
  std::function<std::uint8_t(Nat)> oracle;
  Nat horizon = 0;
  std::string label;
  std::mutex mu;
  std::vector<std::int8_t> memo;
};

namespace {

BinWord primitive_root(const BinWord& p) {
  const std::size_t n = p.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = p[i] == p[i - d];
    if (ok) return p.prefix(d);
  }
  return p;
}

std::string word_or_blank(const BinWord& w) { return w.empty() ? "" : w.str(); }

BinWord parse_side(const std::string& text) {
  if (text.empty()) return BinWord{};
  return BinWord::parse(text);
}

}  // namespace

CantorPoint CantorPoint::periodic(BinWord head, BinWord period) {
  if (period.empty()) throw std::invalid_argument("CantorPoint: period must be nonempty");
  period = primitive_root(period);
  std::vector<std::uint8_t> h = head.bits();
  std::vector<std::uint8_t> p = period.bits();
  while (!h.empty() && h.back() == p.back()) {
    h.pop_back();
    std::rotate(p.rbegin(), p.rbegin() + 1, p.rend());
  }
  CantorPoint x;
  x.head_ = BinWord(std::move(h));
  x.period_ = BinWord(std::move(p));
  x.lazy_.reset();
  return x;
}

CantorPoint CantorPoint::lazy(std::function<std::uint8_t(Nat)> oracle, Nat horizon, std::string label) {
  CantorPoint x;
  x.lazy_ = std::make_shared<LazyState>();
  x.lazy_->oracle = std::move(oracle);
  x.lazy_->horizon = horizon;
  x.lazy_->label = std::move(label);
  return x;
}

CantorPoint CantorPoint::parse(const std::string& literal) {
  const auto colon = literal.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("point literal needs 'prefix:period': " + literal);
  const std::string head = literal.substr(0, colon);
  const std::string period = literal.substr(colon + 1);
  BinWord p = parse_side(period == "-" ? "" : period);
  if (p.empty()) throw std::invalid_argument("point literal needs a nonempty period: " + literal);
  return periodic(parse_side(head == "-" ? "" : head), p);
}

Nat CantorPoint::horizon() const { return lazy_ ? lazy_->horizon : kNatMax; }

std::uint8_t CantorPoint::bit(Nat i) const {
  if (!lazy_) {
    if (i < head_.size()) return head_[i];
    return period_[(i - head_.size()) % period_.size()];
  }
  if (i >= lazy_->horizon) {
    throw InsufficientDefinedness("point " + lazy_->label + " is defined on " + std::to_string(lazy_->horizon) +
                                  " bits, bit " + std::to_string(i) + " requested");
  }
  std::lock_guard<std::mutex> lock(lazy_->mu);
  auto& memo = lazy_->memo;
  if (memo.size() <= i) memo.resize(i + 1, -1);
  if (memo[i] < 0) memo[i] = static_cast<std::int8_t>(lazy_->oracle(i) & 1U);
  return static_cast<std::uint8_t>(memo[i]);
}

BinWord CantorPoint::prefix(Nat n) const {
  std::vector<std::uint8_t> bits(n);
  for (Nat i = 0; i < n; ++i) bits[i] = bit(i);
  return BinWord(std::move(bits));
}

std::string CantorPoint::literal() const {
  if (lazy_) return "lazy:" + lazy_->label;
  return word_or_blank(head_) + ":" + period_.str();
}

bool operator==(const CantorPoint& a, const CantorPoint& b) {
  if (a.lazy_ || b.lazy_) return a.lazy_ == b.lazy_;
  return a.head_ == b.head_ && a.period_ == b.period_;
}

std::optional<Nat> first_difference(const CantorPoint& x, const CantorPoint& y) {
  if (x.is_periodic() && y.is_periodic()) {
    if (x == y) return std::nullopt;
    const Nat bound = std::max(x.head().size(), y.head().size()) +
                      std::lcm(x.period().size(), y.period().size());
    for (Nat i = 0; i < bound; ++i) {
      if (x.bit(i) != y.bit(i)) return i;
    }
    return std::nullopt;
  }
  const Nat h = std::min(x.horizon(), y.horizon());
  for (Nat i = 0; i < h; ++i) {
    if (x.bit(i) != y.bit(i)) return i;
  }
  throw InsufficientDefinedness("points agree on their common horizon " + std::to_string(h));
}

Dyadic metric(const CantorPoint& x, const CantorPoint& y) {
  auto d = first_difference(x, y);
  return d ? Dyadic::pow2(*d) : Dyadic::zero();
}

Dyadic cylinder_dist(const CantorPoint& x, const BinWord& s) {
  for (Nat i = 0; i < s.size(); ++i) {
    if (x.bit(i) != s[i]) return Dyadic::pow2(i);
  }
  return Dyadic::zero();
}

CantorPoint q_enum(Nat n) {
  if (n == 0) return CantorPoint::zeros();
  return CantorPoint::padded(word_from_index(n - 1).append(1));
}

std::optional<Nat> q_index(const CantorPoint& x) {
  if (!x.eventually_zero()) return std::nullopt;
  const BinWord& h = x.head();
  if (h.empty()) return 0;
  // canonical head of an eventually-zero point ends with 1
  return word_index(h.prefix(h.size() - 1)) + 1;
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::In: return "in";
    case Membership::Out: return "out";
    case Membership::Unknown: return "unknown";
  }
  return "unknown";
}

// ---------------------------------------------------------------- closed codes

namespace {
bool compatible(const BinWord& a, const BinWord& b) {
  return a.size() <= b.size() ? a.is_prefix_of(b) : b.is_prefix_of(a);
}
}  // namespace

ClosedCode ClosedCode::full() {
  ClosedCode t;
  t.kind_ = Kind::Full;
  t.name_ = "full";
  return t;
}

ClosedCode ClosedCode::cylinder(BinWord c) {
  ClosedCode t = clopen({c}, "cyl:" + c.str());
  return t;
}

ClosedCode ClosedCode::clopen(std::vector<BinWord> cells, std::string name) {
  if (cells.empty()) throw std::invalid_argument("clopen code needs at least one cell");
  ClosedCode t;
  t.kind_ = Kind::Clopen;
  std::sort(cells.begin(), cells.end());
  if (name.empty()) {
    name = "clopen:";
    for (std::size_t i = 0; i < cells.size(); ++i) name += (i ? "," : "") + cells[i].str();
  }
  t.name_ = std::move(name);
  t.cells_ = std::move(cells);
  return t;
}

ClosedCode ClosedCode::single_branch(CantorPoint p) {
  if (!p.is_periodic()) throw std::invalid_argument("single_branch needs an eventually periodic point");
  ClosedCode t;
  t.kind_ = Kind::Branch;
  t.name_ = "branch:" + p.literal();
  t.point_ = std::move(p);
  return t;
}

ClosedCode ClosedCode::positions_zero(Nat modulus, Nat residue) {
  ClosedCode t;
  t.kind_ = Kind::PositionsZero;
  t.modulus_ = modulus;
  t.residue_ = modulus == 0 ? residue : residue % modulus;
  t.name_ = "zeros:" + std::to_string(modulus) + ":" + std::to_string(t.residue_);
  return t;
}

ClosedCode ClosedCode::random_pruned(std::uint64_t seed, unsigned depth) {
  std::mt19937_64 rng(seed);
  std::vector<BinWord> cells;
  std::vector<BinWord> stack{BinWord{}};
  while (!stack.empty()) {
    BinWord s = stack.back();
    stack.pop_back();
    if (s.size() >= depth) {
      cells.push_back(s);
      continue;
    }
    if (rng() % 2 == 0) {
      stack.push_back(s.append(1));
      stack.push_back(s.append(0));
    } else {
      stack.push_back(s.append(static_cast<std::uint8_t>(rng() % 2)));
    }
  }
  return clopen(std::move(cells), "random:" + std::to_string(seed) + ":" + std::to_string(depth));
}

ClosedCode ClosedCode::cut(const ClosedCode& base, BinWord s) {
  if (!base.admits(s)) throw std::invalid_argument("cut: cylinder misses the tree");
  ClosedCode t;
  t.kind_ = Kind::Cut;
  t.name_ = base.name_ + "|" + s.str();
  t.word_ = std::move(s);
  t.base_ = std::make_shared<const ClosedCode>(base);
  return t;
}

namespace {
std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}
}  // namespace

ClosedCode ClosedCode::by_name(const std::string& ref) {
  if (ref == "full") return full();
  const auto colon = ref.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("unknown tree code '" + ref + "'");
  const std::string kind = ref.substr(0, colon);
  const std::string rest = ref.substr(colon + 1);
  if (kind == "cyl") return cylinder(BinWord::parse(rest));
  if (kind == "clopen") {
    std::vector<BinWord> cells;
    for (const auto& w : split(rest, ',')) cells.push_back(BinWord::parse(w));
    return clopen(std::move(cells));
  }
  if (kind == "branch") return single_branch(CantorPoint::parse(rest));
  auto parts = split(rest, ':');
  if (kind == "zeros" && parts.size() == 2) return positions_zero(std::stoull(parts[0]), std::stoull(parts[1]));
  if (kind == "random" && parts.size() == 2) {
    return random_pruned(std::stoull(parts[0]), static_cast<unsigned>(std::stoul(parts[1])));
  }
  throw std::invalid_argument("unknown tree code '" + ref + "'");
}

bool ClosedCode::admits(const BinWord& s) const {
  switch (kind_) {
    case Kind::Full: return true;
    case Kind::Clopen:
      for (const auto& c : cells_) {
        if (compatible(c, s)) return true;
      }
      return false;
    case Kind::Branch:
      for (Nat i = 0; i < s.size(); ++i) {
        if (point_.bit(i) != s[i]) return false;
      }
      return true;
    case Kind::PositionsZero:
      if (modulus_ == 0) return s.size() <= residue_ || s[residue_] == 0;
      for (Nat i = residue_; i < s.size(); i += modulus_) {
        if (s[i] != 0) return false;
      }
      return true;
    case Kind::Cut:
      if (!compatible(s, word_)) return false;
      return base_->admits(s.size() >= word_.size() ? s : word_);
  }
  return false;
}

std::vector<std::uint8_t> ClosedCode::admitted_children(const BinWord& s) const {
  std::vector<std::uint8_t> out;
  for (std::uint8_t b = 0; b < 2; ++b) {
    if (admits(s.append(b))) out.push_back(b);
  }
  return out;
}

CantorPoint ClosedCode::leftmost_completion(const BinWord& s) const {
  if (!admits(s)) throw std::invalid_argument("leftmost_completion: " + s.str() + " is not in " + name_);
  switch (kind_) {
    case Kind::Full:
    case Kind::PositionsZero: return CantorPoint::padded(s);
    case Kind::Branch: return point_;
    case Kind::Clopen: {
      BinWord u = s;
      for (;;) {
        for (const auto& c : cells_) {
          if (c.is_prefix_of(u)) return CantorPoint::padded(u);
        }
        u = u.append(admits(u.append(0)) ? 0 : 1);
      }
    }
    case Kind::Cut: return base_->leftmost_completion(s.size() >= word_.size() ? s : word_);
  }
  return CantorPoint::padded(s);
}

Membership ClosedCode::contains(const CantorPoint& x) const {
  if (!x.is_periodic()) return Membership::Unknown;
  switch (kind_) {
    case Kind::Full: return Membership::In;
    case Kind::Clopen:
      for (const auto& c : cells_) {
        if (x.prefix(c.size()) == c) return Membership::In;
      }
      return Membership::Out;
    case Kind::Branch: return x == point_ ? Membership::In : Membership::Out;
    case Kind::PositionsZero: {
      if (modulus_ == 0) return x.bit(residue_) == 0 ? Membership::In : Membership::Out;
      const Nat bound = x.head().size() + std::lcm<Nat>(x.period().size(), modulus_) + modulus_;
      for (Nat i = residue_; i < bound; i += modulus_) {
        if (x.bit(i) != 0) return Membership::Out;
      }
      return Membership::In;
    }
    case Kind::Cut:
      if (x.prefix(word_.size()) != word_) return Membership::Out;
      return base_->contains(x);
  }
  return Membership::Unknown;
}

bool ClosedCode::check_pruned(unsigned depth) const {
  if (!admits(BinWord{})) return false;
  std::vector<BinWord> frontier{BinWord{}};
  for (unsigned d = 0; d < depth; ++d) {
    std::vector<BinWord> next;
    for (const auto& s : frontier) {
      auto ch = admitted_children(s);
      if (ch.empty()) return false;
      for (auto b : ch) next.push_back(s.append(b));
    }
    frontier = std::move(next);
    if (frontier.size() > (1U << 16)) break;
  }
  return true;
}

Membership closed_membership(const ClosedCode& t, const CantorPoint& x, Nat depth) {
  const Nat defined = std::min(depth, x.horizon());
  std::vector<std::uint8_t> bits;
  if (!t.admits(BinWord{})) return Membership::Out;
  for (Nat i = 0; i < defined; ++i) {
    bits.push_back(x.bit(i));
    if (!t.admits(BinWord(bits))) return Membership::Out;
  }
  if (x.is_periodic()) return t.contains(x);
  return Membership::Unknown;
}

// ---------------------------------------------------------------- surjection

BinWord surject_prefix(const ClosedCode& t, const std::vector<Nat>& y) {
  BinWord s;
  for (Nat v : y) {
    auto ch = t.admitted_children(s);
    if (ch.empty()) throw std::invalid_argument("tree_surjection: tree is not pruned at " + s.str());
    s = s.append(ch[v % ch.size()]);
  }
  return s;
}

CantorPoint surject_finite(const ClosedCode& t, const std::vector<Nat>& y) {
  if (!t.admits(BinWord{})) throw std::invalid_argument("tree_surjection: empty tree");
  return t.leftmost_completion(surject_prefix(t, y));
}

CantorPoint surject_lazy(const ClosedCode& t, std::function<Nat(Nat)> y, Nat horizon) {
  if (!t.admits(BinWord{})) throw std::invalid_argument("tree_surjection: empty tree");
  struct Walk {
    std::mutex mu;
    BinWord s;
  };
  auto walk = std::make_shared<Walk>();
  auto tree = std::make_shared<const ClosedCode>(t);
  auto oracle = [walk, tree, y](Nat i) -> std::uint8_t {
    std::lock_guard<std::mutex> lock(walk->mu);
    while (walk->s.size() <= i) {
      auto ch = tree->admitted_children(walk->s);
      if (ch.empty()) throw std::invalid_argument("tree_surjection: tree is not pruned");
      walk->s = walk->s.append(ch[y(walk->s.size()) % ch.size()]);
    }
    return walk->s[i];
  };
  return CantorPoint::lazy(oracle, horizon, "surjection:" + t.name());
}

std::vector<Nat> surject_inverse(const ClosedCode& t, const BinWord& s) {
  if (!t.admits(s)) throw std::invalid_argument("surject_inverse: " + s.str() + " is not in " + t.name());
  std::vector<Nat> y;
  for (Nat i = 0; i < s.size(); ++i) {
    auto ch = t.admitted_children(s.prefix(i));
    auto it = std::find(ch.begin(), ch.end(), s[i]);
    y.push_back(static_cast<Nat>(it - ch.begin()));
  }
  return y;
}

CantorPoint point_xor(const CantorPoint& x, const CantorPoint& y) {
  if (x.is_periodic() && y.is_periodic()) {
    const Nat head = std::max(x.head().size(), y.head().size());
    const Nat period = std::lcm(x.period().size(), y.period().size());
    std::vector<std::uint8_t> h(head);
    std::vector<std::uint8_t> p(period);
    for (Nat i = 0; i < head; ++i) h[i] = x.bit(i) ^ y.bit(i);
    for (Nat i = 0; i < period; ++i) p[i] = x.bit(head + i) ^ y.bit(head + i);
    return CantorPoint::periodic(BinWord(std::move(h)), BinWord(std::move(p)));
  }
  return CantorPoint::lazy([x, y](Nat i) { return static_cast<std::uint8_t>(x.bit(i) ^ y.bit(i)); },
                           std::min(x.horizon(), y.horizon()), x.literal() + "^" + y.literal());
}

// ---------------------------------------------------------------- limsup decomposition

SigmaDeltaCode infinitely_many_zeros_code() {
  SigmaDeltaCode c;
  c.name = "inf-zeros";
  c.part = [](Nat n) { return ClosedCode::positions_zero(0, n); };
  // every cylinder extends by 0^inf
  c.meets = [](Nat, const BinWord&) { return Tri::Yes; };
  c.contains = [](const CantorPoint& x) {
    if (!x.is_periodic()) return Membership::Unknown;
    return x.period().count_ones() < x.period().size() ? Membership::In : Membership::Out;
  };
  c.cylinder_cells = true;
  c.leftmost_in = [](const BinWord& s) { return std::optional<CantorPoint>(CantorPoint::padded(s)); };
  return c;
}

SigmaDeltaCode whole_space_code() {
  SigmaDeltaCode c;
  c.name = "whole";
  c.part = [](Nat) { return ClosedCode::full(); };
  c.meets = [](Nat, const BinWord&) { return Tri::Yes; };
  c.contains = [](const CantorPoint&) { return Membership::In; };
  c.cylinder_cells = true;
  c.leftmost_in = [](const BinWord& s) { return std::optional<CantorPoint>(CantorPoint::padded(s)); };
  return c;
}

struct LimsupStream::State {
  std::mutex mu;
  std::deque<std::vector<LimsupCell>> levels;
  std::vector<Nat> offsets;
  std::vector<std::string> dropped;
};

LimsupStream::LimsupStream(SigmaDeltaCode code) : code_(std::move(code)), state_(std::make_shared<State>()) {}

const std::vector<LimsupCell>& LimsupStream::level(Nat n) const {
  if (n > 20) throw ResourceLimit("limsup_decompose: level above 20");
  std::lock_guard<std::mutex> lock(state_->mu);
  while (state_->levels.size() <= n) {
    const Nat lvl = state_->levels.size();
    const Nat len = lvl + 1;
    const ClosedCode part = code_.part(lvl);
    std::vector<LimsupCell> cells;
    for (Nat v = 0; v < (Nat{1} << len); ++v) {
      std::vector<std::uint8_t> bits(len);
      for (Nat i = 0; i < len; ++i) bits[i] = static_cast<std::uint8_t>((v >> (len - 1 - i)) & 1U);
      BinWord s(std::move(bits));
      if (!part.admits(s)) continue;
      const Tri m = code_.meets(lvl, s);
      if (m == Tri::Yes) {
        cells.push_back(LimsupCell{lvl, s, ClosedCode::cut(part, s)});
      } else if (m == Tri::Unknown) {
        state_->dropped.push_back("level " + std::to_string(lvl) + " cylinder " + s.str());
      }
    }
    const Nat offset = state_->offsets.empty() ? 0 : state_->offsets.back() + state_->levels.back().size();
    state_->offsets.push_back(offset);
    state_->levels.push_back(std::move(cells));
  }
  return state_->levels[n];
}

Nat LimsupStream::level_offset(Nat n) const {
  level(n);
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->offsets[n];
}

const LimsupCell& LimsupStream::at(Nat k) const {
  for (Nat n = 0;; ++n) {
    const auto& cells = level(n);
    const Nat off = level_offset(n);
    if (k < off + cells.size()) return cells[k - off];
  }
}

std::vector<std::string> LimsupStream::dropped() const {
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->dropped;
}

// ---------------------------------------------------------------- Souslin codes

std::string baire_str(const BaireWord& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

BinWord wirr_word(const BaireWord& t) {
  BinWord w;
  for (Nat gap : t) w = w.concat(BinWord::zeros(gap)).append(1);
  return w;
}

SouslinCode wirr_souslin() {
  SouslinCode c;
  c.name = "wirr";
  c.cell_cylinder = wirr_word;
  c.cell = [](const BaireWord& t) { return ClosedCode::cylinder(wirr_word(t)); };
  c.limit = [](const BaireWord& t) { return CantorPoint::periodic(wirr_word(t), BinWord::ones(1)); };
  return c;
}

bool check_souslin(const SouslinCode& code, unsigned depth, Nat width, std::string* failure) {
  if (!code.cell_cylinder) {
    if (failure) *failure = "souslin code without cylinder cells";
    return false;
  }
  std::vector<BaireWord> frontier{BaireWord{}};
  for (unsigned d = 0; d <= depth; ++d) {
    std::vector<BaireWord> next;
    for (const auto& t : frontier) {
      const BinWord cyl = code.cell_cylinder(t);
      if (cyl.size() < t.size()) {
        if (failure) *failure = "diameter above 2^-|t| at " + baire_str(t);
        return false;
      }
      if (!t.empty()) {
        BaireWord parent(t.begin(), t.end() - 1);
        if (!code.cell_cylinder(parent).is_prefix_of(cyl)) {
          if (failure) *failure = "cell not nested in its parent at " + baire_str(t);
          return false;
        }
      }
      if (d < depth) {
        for (Nat j = 0; j < width; ++j) {
          BaireWord c = t;
          c.push_back(j);
          next.push_back(std::move(c));
        }
      }
    }
    frontier = std::move(next);
  }
  return true;
}

}  // namespace idealpts

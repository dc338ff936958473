#include "idealpts/natsets.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace idealpts {

std::string rational_str(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

const char* to_string(Finiteness f) {
  switch (f) {
    case Finiteness::Finite: return "finite";
    case Finiteness::Infinite: return "infinite";
    case Finiteness::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::No: return "no";
    case Tri::Yes: return "yes";
    case Tri::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(SectionClass c) {
  switch (c) {
    case SectionClass::AllFinite: return "all-finite";
    case SectionClass::AllCofinite: return "all-cofinite";
    case SectionClass::AllInfinite: return "all-infinite";
    case SectionClass::Unknown: return "unknown";
  }
  return "unknown";
}

// ---------------------------------------------------------------- construction

namespace {
std::shared_ptr<SetNode> fresh(SetKind k) {
  auto n = std::make_shared<SetNode>();
  n->kind = k;
  return n;
}

bool is_all(const DescribedSet& s) {
  const auto& n = s.node();
  return n.kind == SetKind::Interval && n.values[0] == 0 && !n.upper;
}

bool is_none(const DescribedSet& s) {
  const auto& n = s.node();
  return n.kind == SetKind::Finite && n.values.empty();
}
}  // namespace

DescribedSet DescribedSet::finite(std::vector<Nat> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  auto n = fresh(SetKind::Finite);
  n->values = std::move(elements);
  return DescribedSet(n);
}

DescribedSet DescribedSet::interval(Nat lo, std::optional<Nat> hi) {
  auto n = fresh(SetKind::Interval);
  n->values = {lo};
  n->upper = hi;
  return DescribedSet(n);
}

DescribedSet DescribedSet::all() { return interval(0, std::nullopt); }
DescribedSet DescribedSet::none() { return finite({}); }

DescribedSet DescribedSet::residue(Nat a, Nat m) {
  if (m == 0) throw std::invalid_argument("residue: modulus must be positive");
  auto n = fresh(SetKind::Residue);
  n->values = {a % m, m};
  return DescribedSet(n);
}

DescribedSet DescribedSet::enumerated(std::shared_ptr<const Enumeration> e) {
  if (!e || !e->at) throw std::invalid_argument("enumerated: missing generator");
  auto n = fresh(SetKind::Enumerated);
  n->enumeration = std::move(e);
  return DescribedSet(n);
}

DescribedSet DescribedSet::blocks(Nat base, Nat mul, Nat add) {
  if (base < 2) throw std::invalid_argument("blocks: base must be at least 2");
  // blocks must stay disjoint: mul k + add <= base^(k+1) - base^k for every k
  BigInt pk = 1;
  for (Nat k = 0; k < 64; ++k) {
    BigInt room = pk * (base - 1);
    if (BigInt(mul) * k + add > room) throw std::invalid_argument("blocks: consecutive blocks overlap");
    pk *= base;
  }
  auto n = fresh(SetKind::Blocks);
  n->values = {base, mul, add};
  return DescribedSet(n);
}

DescribedSet DescribedSet::levels(DescribedSet k) {
  auto n = fresh(SetKind::Levels);
  n->children = {std::move(k)};
  return DescribedSet(n);
}

DescribedSet DescribedSet::subtree(BinWord s) {
  if (s.size() > 60) throw std::invalid_argument("subtree: word too long");
  auto n = fresh(SetKind::Subtree);
  n->word = std::move(s);
  return DescribedSet(n);
}

DescribedSet DescribedSet::bits(unsigned lo, BinWord p) {
  if (lo + p.size() > 62) throw std::invalid_argument("bits: positions beyond 62");
  auto n = fresh(SetKind::Bits);
  n->values = {lo};
  n->word = std::move(p);
  return DescribedSet(n);
}

DescribedSet DescribedSet::column(Nat c) {
  auto n = fresh(SetKind::Column);
  n->values = {c};
  return DescribedSet(n);
}

DescribedSet DescribedSet::row(Nat r) {
  auto n = fresh(SetKind::Row);
  n->values = {r};
  return DescribedSet(n);
}

DescribedSet DescribedSet::rect(DescribedSet cols, DescribedSet rows) {
  auto n = fresh(SetKind::Rect);
  n->children = {std::move(cols), std::move(rows)};
  return DescribedSet(n);
}

DescribedSet DescribedSet::under(Nat a, Nat b) {
  auto n = fresh(SetKind::Under);
  n->values = {a, b};
  return DescribedSet(n);
}

DescribedSet DescribedSet::column_family(std::shared_ptr<const ColumnFamily> f) {
  if (!f || !f->columns || !f->section) throw std::invalid_argument("column_family: incomplete family");
  auto n = fresh(SetKind::ColumnFamily);
  n->family = std::move(f);
  return DescribedSet(n);
}

DescribedSet DescribedSet::indexed_union(std::shared_ptr<const IndexedFamily> f, DescribedSet index) {
  if (!f || !f->part) throw std::invalid_argument("indexed_union: incomplete family");
  auto n = fresh(SetKind::IndexedUnion);
  n->indexed = std::move(f);
  n->children = {std::move(index)};
  return DescribedSet(n);
}

DescribedSet DescribedSet::make_union(DescribedSet a, DescribedSet b) {
  auto n = fresh(SetKind::Union);
  n->children = {std::move(a), std::move(b)};
  return DescribedSet(n);
}

DescribedSet DescribedSet::make_intersection(DescribedSet a, DescribedSet b) {
  auto n = fresh(SetKind::Intersection);
  n->children = {std::move(a), std::move(b)};
  return DescribedSet(n);
}

DescribedSet DescribedSet::make_difference(DescribedSet a, DescribedSet b) {
  auto n = fresh(SetKind::Difference);
  n->children = {std::move(a), std::move(b)};
  return DescribedSet(n);
}

DescribedSet DescribedSet::make_complement(DescribedSet a) {
  auto n = fresh(SetKind::Complement);
  n->children = {std::move(a)};
  return DescribedSet(n);
}

SetKind DescribedSet::kind() const { return node_->kind; }

// ---------------------------------------------------------------- membership

namespace {

bool enumeration_contains(const Enumeration& e, Nat n) {
  if (e.contains) return e.contains(n);
  // strictly increasing naturals satisfy a_i >= i, so the index of n is at most n
  Nat lo = 0;
  Nat hi = n;
  while (lo <= hi) {
    Nat mid = lo + (hi - lo) / 2;
    Nat v = e.at(mid);
    if (v == n) return true;
    if (v < n) {
      lo = mid + 1;
    } else {
      if (mid == 0) break;
      hi = mid - 1;
    }
  }
  return false;
}

std::optional<Nat> enumeration_index(const Enumeration& e, Nat n) {
  Nat lo = 0;
  Nat hi = n;
  while (lo <= hi) {
    Nat mid = lo + (hi - lo) / 2;
    Nat v = e.at(mid);
    if (v == n) return mid;
    if (v < n) {
      lo = mid + 1;
    } else {
      if (mid == 0) break;
      hi = mid - 1;
    }
  }
  return std::nullopt;
}

bool blocks_contains(Nat base, Nat mul, Nat add, const BigInt& n) {
  // largest k with base^k <= n
  if (n < 1) return false;
  BigInt pk = 1;
  Nat k = 0;
  while (pk * base <= n) {
    pk *= base;
    ++k;
  }
  return n - pk < BigInt(mul) * k + add;
}

// bit j of (2k + 1) * 2^n - 1
unsigned code_bit(Nat n, Nat k, Nat j) {
  if (j < n) return 1;
  if (j == n) return 0;
  Nat p = j - n - 1;
  return p < 64 ? static_cast<unsigned>((k >> p) & 1U) : 0;
}

// bit j of (2k + 1) * 2^n  (the code plus one)
unsigned code_plus_one_bit(Nat n, Nat k, Nat j) {
  if (j < n) return 0;
  Nat p = j - n;
  if (p == 0) return 1;
  return p - 1 < 64 ? static_cast<unsigned>((k >> (p - 1)) & 1U) : 0;
}

bool contains_big_pair(const SetNode& node, Nat col, Nat row);

}  // namespace

bool DescribedSet::contains(Nat n) const {
  const SetNode& nd = *node_;
  switch (nd.kind) {
    case SetKind::Finite: return std::binary_search(nd.values.begin(), nd.values.end(), n);
    case SetKind::Interval: return n >= nd.values[0] && (!nd.upper || n <= *nd.upper);
    case SetKind::Residue: return n % nd.values[1] == nd.values[0];
    case SetKind::Enumerated: return enumeration_contains(*nd.enumeration, n);
    case SetKind::Blocks: return blocks_contains(nd.values[0], nd.values[1], nd.values[2], BigInt(n));
    case SetKind::Levels: return nd.children[0].contains(level_of(n));
    case SetKind::Subtree: {
      if (level_of(n) < nd.word.size()) return false;
      return nd.word.is_prefix_of(word_from_index(n));
    }
    case SetKind::Bits: {
      const Nat lo = nd.values[0];
      for (std::size_t i = 0; i < nd.word.size(); ++i) {
        if (((n >> (lo + i)) & 1U) != nd.word[i]) return false;
      }
      return true;
    }
    case SetKind::Column:
    case SetKind::Row:
    case SetKind::Rect:
    case SetKind::Under:
    case SetKind::ColumnFamily: {
      auto [c, k] = unpair(n);
      return contains_pair(c, k);
    }
    case SetKind::IndexedUnion: {
      const auto& f = *nd.indexed;
      std::optional<Nat> j;
      if (f.locate) {
        j = f.locate(n);
      } else if (f.locate_pair) {
        auto [c, k] = unpair(n);
        j = f.locate_pair(c, k);
      } else {
        throw std::logic_error("indexed union without a locator");
      }
      return j && nd.children[0].contains(*j) && f.part(*j).contains(n);
    }
    case SetKind::Union: return nd.children[0].contains(n) || nd.children[1].contains(n);
    case SetKind::Intersection: return nd.children[0].contains(n) && nd.children[1].contains(n);
    case SetKind::Difference: return nd.children[0].contains(n) && !nd.children[1].contains(n);
    case SetKind::Complement: return !nd.children[0].contains(n);
  }
  return false;
}

bool DescribedSet::contains_pair(Nat col, Nat row) const {
  const SetNode& nd = *node_;
  switch (nd.kind) {
    case SetKind::Column: return col == nd.values[0];
    case SetKind::Row: return row == nd.values[0];
    case SetKind::Rect: return nd.children[0].contains(col) && nd.children[1].contains(row);
    case SetKind::Under: {
      unsigned __int128 bound = static_cast<unsigned __int128>(nd.values[0]) * col + nd.values[1];
      return row <= bound;
    }
    case SetKind::ColumnFamily: {
      auto j = enumeration_index(*nd.family->columns, col);
      return j && nd.family->section(*j).contains(row);
    }
    case SetKind::IndexedUnion: {
      const auto& f = *nd.indexed;
      std::optional<Nat> j;
      if (f.locate_pair) {
        j = f.locate_pair(col, row);
      } else if (pair_fits(col, row)) {
        return contains(pair(col, row));
      } else {
        return false;
      }
      return j && nd.children[0].contains(*j) && f.part(*j).contains_pair(col, row);
    }
    case SetKind::Union: return nd.children[0].contains_pair(col, row) || nd.children[1].contains_pair(col, row);
    case SetKind::Intersection:
      return nd.children[0].contains_pair(col, row) && nd.children[1].contains_pair(col, row);
    case SetKind::Difference:
      return nd.children[0].contains_pair(col, row) && !nd.children[1].contains_pair(col, row);
    case SetKind::Complement: return !nd.children[0].contains_pair(col, row);
    default: break;
  }
  if (pair_fits(col, row)) return contains(pair(col, row));
  return contains_big_pair(nd, col, row);
}

namespace {
bool contains_big_pair(const SetNode& nd, Nat col, Nat row) {
  switch (nd.kind) {
    case SetKind::Finite:
    case SetKind::Enumerated: return false;  // members of these leaves are below 2^64
    case SetKind::Interval: return !nd.upper;
    case SetKind::Residue: {
      const Nat m = nd.values[1];
      const Nat odd = static_cast<Nat>((static_cast<unsigned __int128>(row) * 2 + 1) % m);
      const Nat v = (mul_mod(pow2_mod(col, m), odd, m) + m - 1 % m) % m;
      return v == nd.values[0];
    }
    case SetKind::Blocks: {
      if (col > 4096) throw ResourceLimit("blocks membership for a code beyond 2^4096");
      BigInt code = (BigInt(1) << col) * (BigInt(row) * 2 + 1) - 1;
      return blocks_contains(nd.values[0], nd.values[1], nd.values[2], code);
    }
    case SetKind::Levels: {
      const Nat lvl = col + bit_length(row * 2 + 1) - 1;
      return nd.children[0].contains(lvl);
    }
    case SetKind::Subtree: {
      const Nat total = col + bit_length(row * 2 + 1);  // bit length of code + 1
      if (total - 1 < nd.word.size()) return false;
      for (std::size_t i = 0; i < nd.word.size(); ++i) {
        if (code_plus_one_bit(col, row, total - 2 - i) != nd.word[i]) return false;
      }
      return true;
    }
    case SetKind::Bits: {
      const Nat lo = nd.values[0];
      for (std::size_t i = 0; i < nd.word.size(); ++i) {
        if (code_bit(col, row, lo + i) != nd.word[i]) return false;
      }
      return true;
    }
    default: break;
  }
  throw std::logic_error("contains_big_pair: unexpected node kind");
}
}  // namespace

bool member(const DescribedSet& s, Nat n) { return s.contains(n); }

// ---------------------------------------------------------------- normal form

namespace {
std::optional<Pattern> compute_pattern(const SetNode& nd) {
  switch (nd.kind) {
    case SetKind::Finite: return Pattern::finite(nd.values);
    case SetKind::Interval: return Pattern::interval(nd.values[0], nd.upper);
    case SetKind::Residue: return Pattern::residue(nd.values[0], nd.values[1]);
    case SetKind::Levels: {
      const auto& k = nd.children[0].pattern();
      if (!k) return std::nullopt;
      return Pattern::level_set(*k);
    }
    case SetKind::Subtree: return Pattern::subtree(nd.word);
    case SetKind::Bits: return Pattern::bit_match(static_cast<unsigned>(nd.values[0]), nd.word);
    case SetKind::Column: {
      const Nat c = nd.values[0];
      if (c > 20) return std::nullopt;
      return Pattern::residue((Nat{1} << c) - 1, Nat{1} << (c + 1));
    }
    case SetKind::IndexedUnion: {
      if (!nd.indexed->closed_form) return std::nullopt;
      auto cf = nd.indexed->closed_form(nd.children[0]);
      if (!cf) return std::nullopt;
      return cf->pattern();
    }
    case SetKind::Union:
    case SetKind::Intersection:
    case SetKind::Difference: {
      const auto& a = nd.children[0].pattern();
      if (!a) return std::nullopt;
      const auto& b = nd.children[1].pattern();
      if (!b) return std::nullopt;
      BoolOp op = nd.kind == SetKind::Union          ? BoolOp::Union
                  : nd.kind == SetKind::Intersection ? BoolOp::Intersection
                                                     : BoolOp::Difference;
      return a->combine(op, *b);
    }
    case SetKind::Complement: {
      const auto& a = nd.children[0].pattern();
      if (!a) return std::nullopt;
      return a->complement();
    }
    default: return std::nullopt;
  }
}
}  // namespace

const std::optional<Pattern>& DescribedSet::pattern() const {
  std::call_once(node_->pattern_once, [this] { node_->pattern_cache = compute_pattern(*node_); });
  return node_->pattern_cache;
}

// ---------------------------------------------------------------- printing

std::string DescribedSet::term() const {
  const SetNode& nd = *node_;
  std::ostringstream os;
  switch (nd.kind) {
    case SetKind::Finite:
      os << "(fin";
      for (Nat v : nd.values) os << ' ' << v;
      os << ')';
      break;
    case SetKind::Interval:
      os << "(ival " << nd.values[0] << ' ';
      if (nd.upper) {
        os << *nd.upper;
      } else {
        os << '*';
      }
      os << ')';
      break;
    case SetKind::Residue: os << "(res " << nd.values[0] << ' ' << nd.values[1] << ')'; break;
    case SetKind::Enumerated: os << nd.enumeration->term; break;
    case SetKind::Blocks: os << "(blocks " << nd.values[0] << ' ' << nd.values[1] << ' ' << nd.values[2] << ')'; break;
    case SetKind::Levels: os << "(levels " << nd.children[0].term() << ')'; break;
    case SetKind::Subtree: os << "(tree " << nd.word.str() << ')'; break;
    case SetKind::Bits: os << "(bits " << nd.values[0] << ' ' << nd.word.str() << ')'; break;
    case SetKind::Column: os << "(col " << nd.values[0] << ')'; break;
    case SetKind::Row: os << "(row " << nd.values[0] << ')'; break;
    case SetKind::Rect: os << "(rect " << nd.children[0].term() << ' ' << nd.children[1].term() << ')'; break;
    case SetKind::Under: os << "(under " << nd.values[0] << ' ' << nd.values[1] << ')'; break;
    case SetKind::ColumnFamily: os << nd.family->term; break;
    case SetKind::IndexedUnion: os << "(iunion " << nd.indexed->name << ' ' << nd.children[0].term() << ')'; break;
    case SetKind::Union: os << "(union " << nd.children[0].term() << ' ' << nd.children[1].term() << ')'; break;
    case SetKind::Intersection:
      os << "(inter " << nd.children[0].term() << ' ' << nd.children[1].term() << ')';
      break;
    case SetKind::Difference: os << "(diff " << nd.children[0].term() << ' ' << nd.children[1].term() << ')'; break;
    case SetKind::Complement: os << "(compl " << nd.children[0].term() << ')'; break;
  }
  return os.str();
}

std::string print_set(const DescribedSet& s) { return s.term(); }

// ---------------------------------------------------------------- Boolean algebra

DescribedSet combine(SetOp op, const DescribedSet& s, const DescribedSet& t) {
  if (op == SetOp::Complement) return complement(s);
  // same disjoint family on both sides: work on the index sets
  if (s.kind() == SetKind::IndexedUnion && t.kind() == SetKind::IndexedUnion &&
      s.node().indexed == t.node().indexed) {
    return DescribedSet::indexed_union(s.node().indexed, combine(op, s.node().children[0], t.node().children[0]));
  }
  switch (op) {
    case SetOp::Union:
      if (is_none(s) || is_all(t) || s.same_node(t)) return t;
      if (is_none(t) || is_all(s)) return s;
      return DescribedSet::make_union(s, t);
    case SetOp::Intersection:
      if (is_all(s) || is_none(t) || s.same_node(t)) return t;
      if (is_all(t) || is_none(s)) return s;
      return DescribedSet::make_intersection(s, t);
    case SetOp::Difference:
      if (s.same_node(t) || is_none(s) || is_all(t)) return DescribedSet::none();
      if (is_none(t)) return s;
      return DescribedSet::make_difference(s, t);
    case SetOp::Complement: break;
  }
  return complement(s);
}

DescribedSet complement(const DescribedSet& s) {
  if (is_all(s)) return DescribedSet::none();
  if (is_none(s)) return DescribedSet::all();
  if (s.kind() == SetKind::Complement) return s.node().children[0];
  return DescribedSet::make_complement(s);
}

// ---------------------------------------------------------------- column analysis

std::optional<std::pair<Nat, Nat>> solve_linear_congruence(Nat a, Nat b, Nat m) {
  a %= m;
  b %= m;
  Nat g = gcd_nat(a, m);
  if (g == 0) g = m;
  if (b % g != 0) return std::nullopt;
  const Nat mm = m / g;
  if (mm == 1) return std::pair<Nat, Nat>{0, 1};
  // inverse of a/g modulo mm via extended Euclid
  __int128 r0 = static_cast<__int128>(mm);
  __int128 r1 = static_cast<__int128>((a / g) % mm);
  __int128 t0 = 0;
  __int128 t1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    __int128 tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  __int128 inv = t0 % static_cast<__int128>(mm);
  if (inv < 0) inv += mm;
  Nat k0 = mul_mod(b / g % mm, static_cast<Nat>(inv), mm);
  return std::pair<Nat, Nat>{k0, mm};
}


namespace {

Nat multiplicative_order_of_two(Nat odd, Nat cap) {
  if (odd == 1) return 1;
  Nat v = 2 % odd;
  for (Nat p = 1; p <= cap; ++p) {
    if (v == 1) return p;
    v = mul_mod(v, 2, odd);
  }
  return 0;
}

Section fixed_section(DescribedSet s) {
  Section sec;
  sec.fixed = std::move(s);
  return sec;
}

SectionClass negate(SectionClass c) {
  switch (c) {
    case SectionClass::AllFinite: return SectionClass::AllCofinite;
    case SectionClass::AllCofinite: return SectionClass::AllFinite;
    default: return SectionClass::Unknown;
  }
}

SectionClass class_union(SectionClass a, SectionClass b) {
  using C = SectionClass;
  if (a == C::AllCofinite || b == C::AllCofinite) return C::AllCofinite;
  if (a == C::AllFinite && b == C::AllFinite) return C::AllFinite;
  if (a == C::AllInfinite || b == C::AllInfinite) return C::AllInfinite;
  return C::Unknown;
}

SectionClass class_intersection(SectionClass a, SectionClass b) {
  using C = SectionClass;
  if (a == C::AllFinite || b == C::AllFinite) return C::AllFinite;
  if (a == C::AllCofinite && b == C::AllCofinite) return C::AllCofinite;
  if ((a == C::AllCofinite && b == C::AllInfinite) || (a == C::AllInfinite && b == C::AllCofinite)) {
    return C::AllInfinite;
  }
  return C::Unknown;
}

Section combine_sections(SetOp op, const Section& a, const Section& b) {
  if (a.fixed && b.fixed) return fixed_section(combine(op, *a.fixed, *b.fixed));
  const SectionClass ca = classify_section(a);
  const SectionClass cb = classify_section(b);
  Section out;
  auto fa = a;
  auto fb = b;
  out.varying = [fa, fb, op](Nat col) { return combine(op, fa.at(col), fb.at(col)); };
  switch (op) {
    case SetOp::Union:
      out.cls = class_union(ca, cb);
      out.all_nonempty = a.all_nonempty || b.all_nonempty;
      break;
    case SetOp::Intersection: out.cls = class_intersection(ca, cb); break;
    case SetOp::Difference: out.cls = class_intersection(ca, negate(cb)); break;
    case SetOp::Complement: break;
  }
  if (out.cls == SectionClass::AllCofinite || out.cls == SectionClass::AllInfinite) out.all_nonempty = true;
  return out;
}

Section complement_section(const Section& a) {
  if (a.fixed) return fixed_section(complement(*a.fixed));
  Section out;
  auto fa = a;
  out.varying = [fa](Nat col) { return complement(fa.at(col)); };
  out.cls = negate(classify_section(a));
  out.all_nonempty = out.cls == SectionClass::AllCofinite;
  return out;
}

void add_piece(ColumnProfile& p, DescribedSet cols, Section sec) {
  p.push_back(ProfilePiece{std::move(cols), std::move(sec)});
}

ColumnProfile normalize(ColumnProfile in) {
  ColumnProfile out;
  for (auto& piece : in) {
    const auto& cp = piece.columns.pattern();
    if (cp && cp->is_empty()) continue;
    bool merged = false;
    if (piece.section.fixed) {
      const auto& sp = piece.section.fixed->pattern();
      for (auto& existing : out) {
        if (!existing.section.fixed) continue;
        bool same = existing.section.fixed->same_node(*piece.section.fixed);
        if (!same && sp) {
          const auto& ep = existing.section.fixed->pattern();
          same = ep && ep->equals(*sp);
        }
        if (same) {
          existing.columns = combine(SetOp::Union, existing.columns, piece.columns);
          merged = true;
          break;
        }
      }
    }
    if (!merged) out.push_back(std::move(piece));
  }
  return out;
}

std::optional<ColumnProfile> combine_profiles(SetOp op, const ColumnProfile& a, const ColumnProfile& b) {
  ColumnProfile out;
  for (const auto& pa : a) {
    for (const auto& pb : b) {
      DescribedSet cols = combine(SetOp::Intersection, pa.columns, pb.columns);
      const auto& cp = cols.pattern();
      if (cp && cp->is_empty()) continue;
      add_piece(out, cols, combine_sections(op, pa.section, pb.section));
    }
  }
  if (out.size() > 4096) return std::nullopt;
  return normalize(std::move(out));
}

std::optional<ColumnProfile> residue_profile(Nat a, Nat m) {
  Nat e = 0;
  Nat o = m;
  while (o % 2 == 0) {
    o /= 2;
    ++e;
  }
  const Nat period = multiplicative_order_of_two(o, 4096);
  if (period == 0) return std::nullopt;
  ColumnProfile p;
  auto section_for = [&](Nat n) -> DescribedSet {
    const Nat lhs = pow2_mod(n + 1, m);
    const Nat rhs = (a % m + 1 % m + m - pow2_mod(n, m)) % m;
    auto sol = solve_linear_congruence(lhs, rhs, m);
    if (!sol) return DescribedSet::none();
    if (sol->second == 1) return DescribedSet::all();
    return DescribedSet::residue(sol->first, sol->second);
  };
  for (Nat n = 0; n < e; ++n) add_piece(p, DescribedSet::finite({n}), fixed_section(section_for(n)));
  for (Nat r = 0; r < period; ++r) {
    Nat rep = e + ((r + period - e % period) % period);
    DescribedSet cols = period == 1 ? DescribedSet::interval(e, std::nullopt)
                                    : combine(SetOp::Intersection, DescribedSet::residue(r, period),
                                              DescribedSet::interval(e, std::nullopt));
    add_piece(p, cols, fixed_section(section_for(rep)));
  }
  return normalize(std::move(p));
}

std::optional<ColumnProfile> interval_profile(Nat lo, std::optional<Nat> hi) {
  const Nat top = hi ? std::max(lo, *hi) : lo;
  const Nat n0 = bit_length(top) + 1;
  ColumnProfile p;
  for (Nat n = 0; n < n0 && n < 64; ++n) {
    const unsigned __int128 scale = static_cast<unsigned __int128>(1) << n;
    // lo <= scale (2k + 1) - 1 <= hi
    unsigned __int128 need = (static_cast<unsigned __int128>(lo) + 1 + scale - 1) / scale;  // ceil
    Nat kmin = need <= 1 ? 0 : static_cast<Nat>((need - 1 + 1) / 2);
    if (!hi) {
      add_piece(p, DescribedSet::finite({n}), fixed_section(DescribedSet::interval(kmin, std::nullopt)));
      continue;
    }
    unsigned __int128 cap = (static_cast<unsigned __int128>(*hi) + 1) / scale;  // floor
    if (cap < 1) {
      add_piece(p, DescribedSet::finite({n}), fixed_section(DescribedSet::none()));
      continue;
    }
    Nat kmax = static_cast<Nat>((cap - 1) / 2);
    add_piece(p, DescribedSet::finite({n}),
              fixed_section(kmin > kmax ? DescribedSet::none() : DescribedSet::interval(kmin, kmax)));
  }
  add_piece(p, DescribedSet::interval(n0, std::nullopt),
            fixed_section(hi ? DescribedSet::none() : DescribedSet::all()));
  return normalize(std::move(p));
}

std::optional<ColumnProfile> profile_of(const DescribedSet& s) {
  const SetNode& nd = s.node();
  ColumnProfile p;
  switch (nd.kind) {
    case SetKind::Finite: {
      std::vector<std::pair<Nat, Nat>> cells;
      for (Nat v : nd.values) cells.push_back(unpair(v));
      std::sort(cells.begin(), cells.end());
      std::vector<Nat> cols;
      for (std::size_t i = 0; i < cells.size();) {
        Nat c = cells[i].first;
        std::vector<Nat> rows;
        while (i < cells.size() && cells[i].first == c) rows.push_back(cells[i++].second);
        cols.push_back(c);
        add_piece(p, DescribedSet::finite({c}), fixed_section(DescribedSet::finite(rows)));
      }
      add_piece(p, complement(DescribedSet::finite(cols)), fixed_section(DescribedSet::none()));
      return normalize(std::move(p));
    }
    case SetKind::Interval: return interval_profile(nd.values[0], nd.upper);
    case SetKind::Residue: return residue_profile(nd.values[0], nd.values[1]);
    case SetKind::Column:
      add_piece(p, DescribedSet::finite({nd.values[0]}), fixed_section(DescribedSet::all()));
      add_piece(p, complement(DescribedSet::finite({nd.values[0]})), fixed_section(DescribedSet::none()));
      return p;
    case SetKind::Row:
      add_piece(p, DescribedSet::all(), fixed_section(DescribedSet::finite({nd.values[0]})));
      return p;
    case SetKind::Rect:
      add_piece(p, nd.children[0], fixed_section(nd.children[1]));
      add_piece(p, complement(nd.children[0]), fixed_section(DescribedSet::none()));
      return normalize(std::move(p));
    case SetKind::Under: {
      Section sec;
      const Nat a = nd.values[0];
      const Nat b = nd.values[1];
      sec.cls = SectionClass::AllFinite;
      sec.all_nonempty = true;
      sec.varying = [a, b](Nat col) {
        unsigned __int128 top = static_cast<unsigned __int128>(a) * col + b;
        return DescribedSet::interval(0, top > kNatMax ? kNatMax : static_cast<Nat>(top));
      };
      add_piece(p, DescribedSet::all(), sec);
      return p;
    }
    case SetKind::ColumnFamily: {
      auto fam = nd.family;
      Section sec;
      sec.cls = SectionClass::AllInfinite;
      sec.all_nonempty = true;
      sec.varying = [fam](Nat col) {
        auto j = enumeration_index(*fam->columns, col);
        return j ? fam->section(*j) : DescribedSet::none();
      };
      DescribedSet cols = DescribedSet::enumerated(fam->columns);
      add_piece(p, cols, sec);
      add_piece(p, complement(cols), fixed_section(DescribedSet::none()));
      return p;
    }
    case SetKind::IndexedUnion: {
      if (!nd.indexed->closed_form) return std::nullopt;
      auto cf = nd.indexed->closed_form(nd.children[0]);
      if (!cf) return std::nullopt;
      return column_profile(*cf);
    }
    case SetKind::Union:
    case SetKind::Intersection:
    case SetKind::Difference: {
      auto a = column_profile(nd.children[0]);
      if (!a) return std::nullopt;
      auto b = column_profile(nd.children[1]);
      if (!b) return std::nullopt;
      SetOp op = nd.kind == SetKind::Union          ? SetOp::Union
                 : nd.kind == SetKind::Intersection ? SetOp::Intersection
                                                    : SetOp::Difference;
      return combine_profiles(op, *a, *b);
    }
    case SetKind::Complement: {
      auto a = column_profile(nd.children[0]);
      if (!a) return std::nullopt;
      for (auto& piece : *a) piece.section = complement_section(piece.section);
      return normalize(std::move(*a));
    }
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<ColumnProfile> column_profile(const DescribedSet& s) { return profile_of(s); }

SectionClass classify_section(const Section& s) {
  if (!s.fixed) return s.cls;
  const Finiteness f = is_finite(*s.fixed);
  if (f == Finiteness::Finite) return SectionClass::AllFinite;
  const Finiteness g = is_finite(complement(*s.fixed));
  if (g == Finiteness::Finite) return SectionClass::AllCofinite;
  if (f == Finiteness::Infinite) return SectionClass::AllInfinite;
  return SectionClass::Unknown;
}

std::optional<DescribedSet> section_of(const DescribedSet& s, Nat col) {
  auto p = column_profile(s);
  if (!p) return std::nullopt;
  for (const auto& piece : *p) {
    if (piece.columns.contains(col)) return piece.section.at(col);
  }
  return DescribedSet::none();
}

// ---------------------------------------------------------------- finiteness and emptiness

namespace {

Tri section_empty(const Section& sec) {
  if (sec.fixed) return is_empty(*sec.fixed);
  if (sec.all_nonempty) return Tri::No;
  return Tri::Unknown;
}

Finiteness planar_finiteness(const ColumnProfile& p) {
  bool unknown = false;
  for (const auto& piece : p) {
    const Tri cols_empty = is_empty(piece.columns);
    if (cols_empty == Tri::Yes) continue;
    const SectionClass cls = classify_section(piece.section);
    if (cls == SectionClass::AllInfinite || cls == SectionClass::AllCofinite) {
      if (cols_empty == Tri::No) return Finiteness::Infinite;
      unknown = true;
      continue;
    }
    if (cls == SectionClass::AllFinite) {
      const Tri sec_empty = section_empty(piece.section);
      if (sec_empty == Tri::Yes) continue;
      const Finiteness cf = is_finite(piece.columns);
      if (cf == Finiteness::Finite) continue;
      if (cf == Finiteness::Infinite && sec_empty == Tri::No) return Finiteness::Infinite;
      unknown = true;
      continue;
    }
    unknown = true;
  }
  return unknown ? Finiteness::Unknown : Finiteness::Finite;
}

Tri planar_empty(const ColumnProfile& p) {
  bool unknown = false;
  for (const auto& piece : p) {
    const Tri ce = is_empty(piece.columns);
    if (ce == Tri::Yes) continue;
    const Tri se = section_empty(piece.section);
    if (se == Tri::Yes) continue;
    if (ce == Tri::No && se == Tri::No) return Tri::No;
    unknown = true;
  }
  return unknown ? Tri::Unknown : Tri::Yes;
}

}  // namespace

Finiteness is_finite(const DescribedSet& s) {
  if (const auto& p = s.pattern()) return p->is_finite() ? Finiteness::Finite : Finiteness::Infinite;
  const SetNode& nd = s.node();
  switch (nd.kind) {
    case SetKind::Finite: return Finiteness::Finite;
    case SetKind::Interval: return nd.upper ? Finiteness::Finite : Finiteness::Infinite;
    case SetKind::Residue:
    case SetKind::Enumerated:
    case SetKind::Subtree:
    case SetKind::Bits:
    case SetKind::Column:
    case SetKind::Row:
    case SetKind::Under:
    case SetKind::ColumnFamily: return Finiteness::Infinite;
    case SetKind::Blocks:
      return (nd.values[1] > 0 || nd.values[2] > 0) ? Finiteness::Infinite : Finiteness::Finite;
    case SetKind::Levels: {
      const Finiteness k = is_finite(nd.children[0]);
      if (k == Finiteness::Finite) return Finiteness::Finite;
      if (k == Finiteness::Infinite) return Finiteness::Infinite;
      return Finiteness::Unknown;
    }
    case SetKind::Rect: {
      const Tri ce = is_empty(nd.children[0]);
      const Tri re = is_empty(nd.children[1]);
      if (ce == Tri::Yes || re == Tri::Yes) return Finiteness::Finite;
      const Finiteness cf = is_finite(nd.children[0]);
      const Finiteness rf = is_finite(nd.children[1]);
      if (cf == Finiteness::Finite && rf == Finiteness::Finite) return Finiteness::Finite;
      if ((cf == Finiteness::Infinite && re == Tri::No) || (rf == Finiteness::Infinite && ce == Tri::No)) {
        return Finiteness::Infinite;
      }
      return Finiteness::Unknown;
    }
    case SetKind::IndexedUnion: {
      const Tri ke = is_empty(nd.children[0]);
      if (ke == Tri::Yes) return Finiteness::Finite;
      if (nd.indexed->closed_form) {
        if (auto cf = nd.indexed->closed_form(nd.children[0])) return is_finite(*cf);
      }
      if (ke == Tri::No) {
        auto first = first_member(nd.children[0], 0, 1U << 20);
        if (first && is_finite(nd.indexed->part(*first)) == Finiteness::Infinite) return Finiteness::Infinite;
      }
      return Finiteness::Unknown;
    }
    case SetKind::Union: {
      const Finiteness a = is_finite(nd.children[0]);
      const Finiteness b = is_finite(nd.children[1]);
      if (a == Finiteness::Infinite || b == Finiteness::Infinite) return Finiteness::Infinite;
      if (a == Finiteness::Finite && b == Finiteness::Finite) return Finiteness::Finite;
      break;
    }
    case SetKind::Intersection: {
      if (is_finite(nd.children[0]) == Finiteness::Finite || is_finite(nd.children[1]) == Finiteness::Finite) {
        return Finiteness::Finite;
      }
      break;
    }
    case SetKind::Difference: {
      const Finiteness a = is_finite(nd.children[0]);
      if (a == Finiteness::Finite) return Finiteness::Finite;
      if (a == Finiteness::Infinite && is_finite(nd.children[1]) == Finiteness::Finite) return Finiteness::Infinite;
      break;
    }
    case SetKind::Complement: {
      if (is_finite(nd.children[0]) == Finiteness::Finite) return Finiteness::Infinite;
      break;
    }
  }
  if (auto lf = level_form(s)) {
    if (is_finite(lf->k) == Finiteness::Finite || is_empty(lf->q) == Tri::Yes) return Finiteness::Finite;
    if (lf->q.pattern()->is_finite()) return Finiteness::Finite;
    if (level_form_dense(*lf)) return Finiteness::Infinite;
  }
  if (auto prof = column_profile(s)) return planar_finiteness(*prof);
  return Finiteness::Unknown;
}

Tri is_empty(const DescribedSet& s) {
  if (const auto& p = s.pattern()) return p->is_empty() ? Tri::Yes : Tri::No;
  const SetNode& nd = s.node();
  switch (nd.kind) {
    case SetKind::Finite: return nd.values.empty() ? Tri::Yes : Tri::No;
    case SetKind::Interval: return (nd.upper && *nd.upper < nd.values[0]) ? Tri::Yes : Tri::No;
    case SetKind::Residue:
    case SetKind::Enumerated:
    case SetKind::Subtree:
    case SetKind::Bits:
    case SetKind::Column:
    case SetKind::Row:
    case SetKind::Under:
    case SetKind::ColumnFamily: return Tri::No;
    case SetKind::Blocks: return (nd.values[1] > 0 || nd.values[2] > 0) ? Tri::No : Tri::Yes;
    case SetKind::Levels: return is_empty(nd.children[0]);
    case SetKind::Rect: {
      const Tri a = is_empty(nd.children[0]);
      const Tri b = is_empty(nd.children[1]);
      if (a == Tri::Yes || b == Tri::Yes) return Tri::Yes;
      if (a == Tri::No && b == Tri::No) return Tri::No;
      return Tri::Unknown;
    }
    case SetKind::IndexedUnion: return is_empty(nd.children[0]);
    case SetKind::Union: {
      const Tri a = is_empty(nd.children[0]);
      const Tri b = is_empty(nd.children[1]);
      if (a == Tri::No || b == Tri::No) return Tri::No;
      if (a == Tri::Yes && b == Tri::Yes) return Tri::Yes;
      break;
    }
    case SetKind::Intersection: {
      if (is_empty(nd.children[0]) == Tri::Yes || is_empty(nd.children[1]) == Tri::Yes) return Tri::Yes;
      break;
    }
    case SetKind::Difference: {
      if (is_empty(nd.children[0]) == Tri::Yes) return Tri::Yes;
      if (is_finite(nd.children[0]) == Finiteness::Infinite && is_finite(nd.children[1]) == Finiteness::Finite) {
        return Tri::No;
      }
      break;
    }
    case SetKind::Complement: {
      if (is_finite(nd.children[0]) == Finiteness::Finite) return Tri::No;
      break;
    }
  }
  if (auto lf = level_form(s)) {
    if (is_empty(lf->k) == Tri::Yes || is_empty(lf->q) == Tri::Yes) return Tri::Yes;
    if (level_form_dense(*lf)) return Tri::No;
  }
  if (auto prof = column_profile(s)) return planar_empty(*prof);
  return Tri::Unknown;
}

std::optional<LevelForm> level_form(const DescribedSet& s) {
  const SetNode& nd = s.node();
  if (nd.kind == SetKind::Levels) return LevelForm{DescribedSet::all(), nd.children[0]};
  if (s.pattern()) return LevelForm{s, DescribedSet::all()};
  if (nd.kind != SetKind::Intersection && nd.kind != SetKind::Difference) return std::nullopt;
  auto a = level_form(nd.children[0]);
  if (!a) return std::nullopt;
  auto b = level_form(nd.children[1]);
  if (!b) return std::nullopt;
  auto checked = [](LevelForm f) -> std::optional<LevelForm> {
    if (!f.q.pattern()) return std::nullopt;
    return f;
  };
  if (nd.kind == SetKind::Intersection) {
    return checked({combine(SetOp::Intersection, a->q, b->q), combine(SetOp::Intersection, a->k, b->k)});
  }
  // Q1 L(K1) minus Q2 L(K2) is Q1 L(K1 \ K2) when Q1 is inside Q2, and (Q1 \ Q2) L(K1) when K1 is inside K2.
  if (is_empty(combine(SetOp::Difference, a->q, b->q)) == Tri::Yes) {
    return LevelForm{a->q, combine(SetOp::Difference, a->k, b->k)};
  }
  if (is_empty(combine(SetOp::Difference, a->k, b->k)) == Tri::Yes) {
    return checked({combine(SetOp::Difference, a->q, b->q), a->k});
  }
  return std::nullopt;
}

bool level_form_dense(const LevelForm& f) {
  const auto& p = f.q.pattern();
  return p && !p->is_finite() && p->meets_every_level() && is_finite(f.k) == Finiteness::Infinite;
}

std::optional<Nat> first_member(const DescribedSet& s, Nat from, Nat limit) {
  if (const auto& p = s.pattern()) return p->first_at_or_after(from);
  if (s.kind() == SetKind::Enumerated) {
    const auto& e = *s.node().enumeration;
    for (Nat i = 0;; ++i) {
      Nat v = e.at(i);
      if (v == kNatMax) return std::nullopt;
      if (v >= from) return v;
    }
  }
  for (Nat n = from; n <= limit; ++n) {
    if (s.contains(n)) return n;
    if (n == kNatMax) break;
  }
  return std::nullopt;
}

std::vector<Nat> elements_upto(const DescribedSet& s, Nat bound) {
  std::vector<Nat> out;
  if (s.kind() == SetKind::Enumerated) {
    const auto& e = *s.node().enumeration;
    for (Nat i = 0;; ++i) {
      Nat v = e.at(i);
      if (v > bound || v == kNatMax) break;
      out.push_back(v);
    }
    return out;
  }
  if (const auto& p = s.pattern()) {
    Nat n = 0;
    while (n <= bound) {
      auto next = p->first_at_or_after(n);
      if (!next || *next > bound) break;
      out.push_back(*next);
      n = *next + 1;
    }
    return out;
  }
  if (s.kind() == SetKind::Finite) {
    for (Nat v : s.node().values) {
      if (v <= bound) out.push_back(v);
    }
    return out;
  }
  if (s.kind() == SetKind::Intersection || s.kind() == SetKind::Difference) {
    const auto& ch = s.node().children;
    auto sparse = [](const DescribedSet& c) { return c.kind() == SetKind::Enumerated || c.kind() == SetKind::Finite; };
    const bool inside = s.kind() == SetKind::Intersection;
    if (sparse(ch[0]) || (inside && sparse(ch[1]))) {
      const DescribedSet& lead = sparse(ch[0]) ? ch[0] : ch[1];
      const DescribedSet& other = sparse(ch[0]) ? ch[1] : ch[0];
      for (Nat v : elements_upto(lead, bound)) {
        if (other.contains(v) == inside) out.push_back(v);
      }
      return out;
    }
  }
  for (Nat n = 0; n <= bound; ++n) {
    if (s.contains(n)) out.push_back(n);
  }
  return out;
}

std::vector<std::pair<Nat, Nat>> pairs_upto(const DescribedSet& s, Nat bound) {
  using Cell = std::pair<Nat, Nat>;
  std::vector<Cell> out;
  const SetNode& nd = s.node();
  switch (nd.kind) {
    case SetKind::Rect: {
      auto cols = elements_upto(nd.children[0], bound);
      auto rows = elements_upto(nd.children[1], bound);
      for (Nat c : cols) {
        for (Nat r : rows) out.emplace_back(c, r);
      }
      return out;
    }
    case SetKind::Column:
      if (nd.values[0] <= bound) {
        for (Nat r = 0; r <= bound; ++r) out.emplace_back(nd.values[0], r);
      }
      return out;
    case SetKind::ColumnFamily: {
      const auto& fam = *nd.family;
      for (Nat j = 0;; ++j) {
        Nat c = fam.columns->at(j);
        if (c > bound || c == kNatMax) break;
        for (Nat r : elements_upto(fam.section(j), bound)) out.emplace_back(c, r);
      }
      return out;
    }
    case SetKind::Union: {
      auto a = pairs_upto(nd.children[0], bound);
      auto b = pairs_upto(nd.children[1], bound);
      std::vector<Cell> merged;
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
      return merged;
    }
    case SetKind::Intersection:
    case SetKind::Difference: {
      const bool keep_inside = nd.kind == SetKind::Intersection;
      for (const auto& [c, r] : pairs_upto(nd.children[0], bound)) {
        if (nd.children[1].contains_pair(c, r) == keep_inside) out.emplace_back(c, r);
      }
      return out;
    }
    default: break;
  }
  auto prof = column_profile(s);
  if (!prof) {
    if (bound > 2048) throw ResourceLimit("pairs_upto: unstructured planar set with a large bound");
    for (Nat c = 0; c <= bound; ++c) {
      for (Nat r = 0; r <= bound; ++r) {
        if (s.contains_pair(c, r)) out.emplace_back(c, r);
      }
    }
    return out;
  }
  for (Nat c = 0; c <= bound; ++c) {
    for (const auto& piece : *prof) {
      if (!piece.columns.contains(c)) continue;
      for (Nat r : elements_upto(piece.section.at(c), bound)) out.emplace_back(c, r);
      break;
    }
  }
  return out;
}

std::optional<Rational> periodic_density(const DescribedSet& s) {
  const auto& p = s.pattern();
  if (!p || !p->is_periodic()) return std::nullopt;
  return Rational(p->periodic_count(), p->modulus());
}

// ---------------------------------------------------------------- statistics

namespace {
std::vector<std::uint8_t> indicator(const CharFn& chi, Nat n) {
  std::vector<std::uint8_t> bits(n);
  for (Nat i = 0; i < n; ++i) bits[i] = chi(i) ? 1 : 0;
  return bits;
}

Nat window_max(const std::vector<std::uint8_t>& bits, Nat w) {
  Nat cur = 0;
  for (Nat i = 0; i < w; ++i) cur += bits[i];
  Nat best = cur;
  for (Nat k = 1; k + w <= bits.size(); ++k) {
    cur += bits[k + w - 1];
    cur -= bits[k - 1];
    best = std::max(best, cur);
  }
  return best;
}

SetStats stats_from_bits(const std::vector<std::uint8_t>& bits, Nat n, Nat w, const StatsLimits& limits) {
  SetStats st;
  st.n = n;
  st.w = w;
  for (auto b : bits) st.count += b;
  st.density = Rational(st.count, n);
  st.banach_window = Rational(window_max(bits, w), w);
  if (st.count <= limits.max_recip_terms) {
    Rational sum = 0;
    for (Nat i = 0; i < n; ++i) {
      if (bits[i]) sum += Rational(1, i + 1);
    }
    st.recip_sum = sum;
  }
  return st;
}

void check_args(Nat n, Nat w, const StatsLimits& limits) {
  if (w < 1 || n < w) throw std::invalid_argument("stats: need N >= w >= 1");
  if (n > limits.max_n) throw ResourceLimit("stats: N exceeds the configured maximum");
}
}  // namespace

SetStats stats(const CharFn& chi, Nat n, Nat w, const StatsLimits& limits) {
  check_args(n, w, limits);
  return stats_from_bits(indicator(chi, n), n, w, limits);
}

SetStats stats(const DescribedSet& s, Nat n, Nat w, const StatsLimits& limits) {
  check_args(n, w, limits);
  std::vector<std::uint8_t> bits(n, 0);
  if (s.kind() == SetKind::Enumerated) {
    for (Nat v : elements_upto(s, n - 1)) bits[v] = 1;
  } else {
    for (Nat i = 0; i < n; ++i) bits[i] = s.contains(i) ? 1 : 0;
  }
  return stats_from_bits(bits, n, w, limits);
}

Nat count_upto(const DescribedSet& s, Nat n) {
  if (n == 0) return 0;
  if (s.kind() == SetKind::Enumerated) return elements_upto(s, n - 1).size();
  Nat c = 0;
  for (Nat i = 0; i < n; ++i) c += s.contains(i) ? 1 : 0;
  return c;
}

Rational density_upto(const DescribedSet& s, Nat n) {
  if (n == 0) throw std::invalid_argument("density_upto: N must be positive");
  return Rational(count_upto(s, n), n);
}

Rational banach_window(const DescribedSet& s, Nat n, Nat w, const StatsLimits& limits) {
  check_args(n, w, limits);
  std::vector<std::uint8_t> bits(n);
  for (Nat i = 0; i < n; ++i) bits[i] = s.contains(i) ? 1 : 0;
  return Rational(window_max(bits, w), w);
}

Rational recip_sum_upto(const DescribedSet& s, Nat n, const StatsLimits& limits) {
  std::vector<Nat> members;
  if (s.kind() == SetKind::Enumerated) {
    if (n > 0) members = elements_upto(s, n - 1);
  } else {
    for (Nat i = 0; i < n; ++i) {
      if (s.contains(i)) {
        members.push_back(i);
        if (members.size() > limits.max_recip_terms) break;
      }
    }
  }
  if (members.size() > limits.max_recip_terms) throw ResourceLimit("recip_sum_upto: too many terms for an exact sum");
  Rational sum = 0;
  for (Nat v : members) sum += Rational(1, v + 1);
  return sum;
}

// ---------------------------------------------------------------- registered enumerations

std::shared_ptr<const Enumeration> powers_enumeration(Nat base) {
  if (base < 2) throw std::invalid_argument("powers_enumeration: base must be at least 2");
  auto e = std::make_shared<Enumeration>();
  e->term = "(enum pow " + std::to_string(base) + ")";
  e->at = [base](Nat i) {
    unsigned __int128 v = 1;
    for (Nat j = 0; j < i; ++j) {
      v *= base;
      if (v > kNatMax) return kNatMax;
    }
    return static_cast<Nat>(v);
  };
  Growth g;
  g.cls = GrowthClass::Exponential;
  g.param = static_cast<unsigned>(base);
  g.lower = e->at;
  g.min_gap = [base](Nat i) {
    unsigned __int128 v = base - 1;
    for (Nat j = 0; j < i; ++j) {
      v *= base;
      if (v > kNatMax) return kNatMax;
    }
    return static_cast<Nat>(v);
  };
  e->growth = g;
  e->contains = [base](Nat n) {
    if (n == 0) return false;
    while (n % base == 0) n /= base;
    return n == 1;
  };
  return e;
}

std::shared_ptr<const Enumeration> polynomial_enumeration(unsigned degree) {
  if (degree < 1) throw std::invalid_argument("polynomial_enumeration: degree must be positive");
  auto e = std::make_shared<Enumeration>();
  e->term = "(enum poly " + std::to_string(degree) + ")";
  e->at = [degree](Nat i) {
    unsigned __int128 v = 1;
    for (unsigned j = 0; j < degree; ++j) {
      v *= i;
      if (v > kNatMax) return kNatMax;
    }
    return static_cast<Nat>(v);
  };
  Growth g;
  g.cls = degree == 1 ? GrowthClass::Linear : GrowthClass::Polynomial;
  g.param = degree;
  g.lower = e->at;
  if (degree >= 2) {
    // (i+1)^d - i^d >= d i^(d-1) >= i
    g.min_gap = [](Nat i) { return i; };
  }
  e->growth = g;
  return e;
}

std::shared_ptr<const Enumeration> qprefix_enumeration(const BinWord& motif) {
  if (motif.empty() || motif.back() != 1) throw std::invalid_argument("qprefix: motif must end with 1");
  auto e = std::make_shared<Enumeration>();
  e->term = "(enum qprefix " + motif.str() + ")";
  // a_i = the q_enum index of (motif)^(i+1) followed by zeros
  e->at = [motif](Nat i) {
    BinWord w;
    for (Nat r = 0; r <= i; ++r) {
      w = w.concat(motif);
      if (w.size() > 60) return kNatMax;
    }
    return 1 + word_index(w.prefix(w.size() - 1));
  };
  Growth g;
  g.cls = GrowthClass::Exponential;
  g.param = 2;
  const Nat len = motif.size();
  g.lower = [len](Nat i) {
    const Nat bits = len * (i + 1) - 1;
    return bits >= 63 ? kNatMax : (Nat{1} << bits);
  };
  e->growth = g;
  e->accumulates_at = ":" + motif.str();
  return e;
}

bool growth_witness_holds(const Enumeration& e, Nat samples) {
  if (!e.growth) return true;
  for (Nat i = 0; i < samples; ++i) {
    const Nat a = e.at(i);
    if (a == kNatMax) break;
    if (e.growth->lower && e.growth->lower(i) > a) return false;
    if (i > 0 && e.at(i - 1) >= a) return false;
    if (e.growth->min_gap) {
      const Nat next = e.at(i + 1);
      if (next != kNatMax && next - a < e.growth->min_gap(i)) return false;
      if (i > 0 && e.growth->min_gap(i) < e.growth->min_gap(i - 1)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- parser

namespace {

struct Parser {
  std::vector<std::string> tokens;
  std::size_t pos = 0;

  explicit Parser(const std::string& text) {
    std::string cur;
    for (char c : text) {
      if (c == '(' || c == ')') {
        if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
        tokens.emplace_back(1, c);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
  }

  const std::string& next() {
    if (pos >= tokens.size()) throw ParseError("unexpected end of set term");
    return tokens[pos++];
  }
  void expect(const std::string& t) {
    if (next() != t) throw ParseError("expected '" + t + "' in set term");
  }
  bool peek_close() const { return pos < tokens.size() && tokens[pos] == ")"; }

  static Nat number(const std::string& t) {
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw ParseError("expected a natural number, got '" + t + "'");
    }
    try {
      return std::stoull(t);
    } catch (const std::exception&) {
      throw ParseError("number out of range: '" + t + "'");
    }
  }

  DescribedSet term() {
    expect("(");
    const std::string head = next();
    DescribedSet out = DescribedSet::none();
    if (head == "fin") {
      std::vector<Nat> v;
      while (!peek_close()) v.push_back(number(next()));
      out = DescribedSet::finite(v);
    } else if (head == "ival") {
      Nat lo = number(next());
      const std::string& hi = next();
      out = DescribedSet::interval(lo, hi == "*" ? std::nullopt : std::optional<Nat>(number(hi)));
    } else if (head == "res") {
      Nat a = number(next());
      Nat m = number(next());
      if (m == 0) throw ParseError("residue modulus must be positive");
      out = DescribedSet::residue(a, m);
    } else if (head == "enum") {
      const std::string kind = next();
      if (kind == "pow") {
        out = DescribedSet::enumerated(powers_enumeration(number(next())));
      } else if (kind == "poly") {
        out = DescribedSet::enumerated(polynomial_enumeration(static_cast<unsigned>(number(next()))));
      } else if (kind == "qprefix") {
        out = DescribedSet::enumerated(qprefix_enumeration(BinWord::parse(next())));
      } else {
        throw ParseError("unknown enumeration '" + kind + "'");
      }
    } else if (head == "blocks") {
      Nat b = number(next());
      Nat a = number(next());
      Nat c = number(next());
      out = DescribedSet::blocks(b, a, c);
    } else if (head == "levels") {
      out = DescribedSet::levels(term());
    } else if (head == "tree") {
      out = DescribedSet::subtree(BinWord::parse(next()));
    } else if (head == "bits") {
      Nat lo = number(next());
      out = DescribedSet::bits(static_cast<unsigned>(lo), BinWord::parse(next()));
    } else if (head == "col") {
      out = DescribedSet::column(number(next()));
    } else if (head == "row") {
      out = DescribedSet::row(number(next()));
    } else if (head == "rect") {
      auto c = term();
      auto r = term();
      out = DescribedSet::rect(c, r);
    } else if (head == "under") {
      Nat a = number(next());
      Nat b = number(next());
      out = DescribedSet::under(a, b);
    } else if (head == "union" || head == "inter" || head == "diff") {
      auto a = term();
      auto b = term();
      out = head == "union"   ? DescribedSet::make_union(a, b)
            : head == "inter" ? DescribedSet::make_intersection(a, b)
                              : DescribedSet::make_difference(a, b);
    } else if (head == "compl") {
      out = DescribedSet::make_complement(term());
    } else {
      throw ParseError("unknown set constructor '" + head + "'");
    }
    expect(")");
    return out;
  }
};

}  // namespace

DescribedSet parse_set(const std::string& text) {
  Parser p(text);
  DescribedSet s = p.term();
  if (p.pos != p.tokens.size()) throw ParseError("trailing input after set term");
  return s;
}

}  // namespace idealpts

#include "idealpts/ideals.hpp"

#include <cctype>
#include <map>
#include <random>
#include <set>

namespace idealpts {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::In: return "in";
    case Verdict::Positive: return "positive";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Carrier c) { return c == Carrier::Omega ? "omega" : "omega2"; }

const char* to_string(PKind k) {
  switch (k) {
    case PKind::Pplus: return "P+";
    case PKind::Pminus: return "P-";
    case PKind::Pprime: return "P|";
  }
  return "?";
}

Json decision_json(const Decision& d) {
  Json j;
  j["verdict"] = to_string(d.verdict);
  j["trace"] = d.trace;
  return j;
}

namespace {

Decision verdict(Verdict v, std::string why) {
  Decision d;
  d.verdict = v;
  d.trace.push_back(std::move(why));
  return d;
}

Decision unknown(std::string why) { return verdict(Verdict::Unknown, std::move(why)); }

Decision nest(Decision inner, const std::string& step) {
  inner.trace.insert(inner.trace.begin(), step);
  return inner;
}

bool has_plane_leaf(const DescribedSet& s) {
  const auto& nd = s.node();
  switch (nd.kind) {
    case SetKind::Rect:
    case SetKind::Under:
    case SetKind::ColumnFamily: return true;
    case SetKind::IndexedUnion: return nd.indexed->planar;
    case SetKind::Union:
    case SetKind::Intersection:
    case SetKind::Difference:
    case SetKind::Complement:
      for (const auto& c : nd.children) {
        if (has_plane_leaf(c)) return true;
      }
      return false;
    default: return false;
  }
}

}  // namespace

Ideal::Ideal(std::string name, Carrier carrier, int nesting, Decider core)
    : name_(std::move(name)), carrier_(carrier), nesting_(nesting), core_(std::move(core)) {}

Decision Ideal::decide(const DescribedSet& s) const {
  if (carrier_ == Carrier::Omega && has_plane_leaf(s)) {
    throw CarrierMismatch("ideal " + name_ + " lives on omega but the set uses planar leaves");
  }
  if (admissible && is_finite(s) == Finiteness::Finite) return verdict(Verdict::In, "finite set");
  Decision core = core_(s);
  if (core.verdict != Verdict::Unknown) return core;

  const auto& nd = s.node();
  switch (nd.kind) {
    case SetKind::Union: {
      Decision a = decide(nd.children[0]);
      if (a.verdict == Verdict::Positive) return nest(a, "union: left part positive");
      Decision b = decide(nd.children[1]);
      if (b.verdict == Verdict::Positive) return nest(b, "union: right part positive");
      if (a.verdict == Verdict::In && b.verdict == Verdict::In) return verdict(Verdict::In, "union of two members");
      break;
    }
    case SetKind::Intersection: {
      Decision a = decide(nd.children[0]);
      if (a.verdict == Verdict::In) return nest(a, "intersection: left part in ideal");
      Decision b = decide(nd.children[1]);
      if (b.verdict == Verdict::In) return nest(b, "intersection: right part in ideal");
      if (a.verdict == Verdict::Positive && decide(complement(nd.children[1])).verdict == Verdict::In) {
        return nest(a, "intersection with a co-member: left part positive");
      }
      if (b.verdict == Verdict::Positive && decide(complement(nd.children[0])).verdict == Verdict::In) {
        return nest(b, "intersection with a co-member: right part positive");
      }
      break;
    }
    case SetKind::Difference: {
      Decision a = decide(nd.children[0]);
      if (a.verdict == Verdict::In) return nest(a, "difference: minuend in ideal");
      if (a.verdict == Verdict::Positive) {
        Decision b = decide(nd.children[1]);
        if (b.verdict == Verdict::In) return nest(a, "difference of a positive set and a member");
      }
      break;
    }
    case SetKind::Complement: {
      Decision a = decide(nd.children[0]);
      if (a.verdict == Verdict::In) {
        return verdict(Verdict::Positive, "complement of a member is positive (proper ideal)");
      }
      break;
    }
    case SetKind::IndexedUnion: {
      const auto& idx = nd.children[0];
      if (nd.indexed->closed_form) {
        if (auto cf = nd.indexed->closed_form(idx)) return nest(decide(*cf), "indexed union: closed form");
      }
      const bool finite_index = is_finite(idx) == Finiteness::Finite;
      bool all_in = true;
      Nat probed = 0;
      for (Nat from = 0; probed < 64; ++probed) {
        auto j = first_member(idx, from, from + 4096);
        if (!j) break;
        Decision part = decide(nd.indexed->part(*j));
        if (part.verdict == Verdict::Positive) {
          return nest(part, "indexed union: part " + std::to_string(*j) + " positive");
        }
        if (part.verdict != Verdict::In) all_in = false;
        from = *j + 1;
      }
      if (finite_index && all_in && probed < 64) return verdict(Verdict::In, "finite union of members");
      break;
    }
    default: break;
  }
  return core;
}

Decision decide(const IdealHandle& ideal, const DescribedSet& s) { return ideal->decide(s); }

// ---------------------------------------------------------------- base ideals on omega

namespace {

enum class Base { Fin, Z, Summable, Banach };

const char* base_name(Base b) {
  switch (b) {
    case Base::Fin: return "fin";
    case Base::Z: return "z";
    case Base::Summable: return "summable";
    case Base::Banach: return "banach";
  }
  return "?";
}

Decision decide_enumerated(Base base, const Enumeration& e) {
  if (base == Base::Fin) return verdict(Verdict::Positive, "enumerated set is infinite");
  if (!e.growth) return unknown("enumerated set without growth witness");
  if (!growth_witness_holds(e, 64)) return unknown("growth witness failed its sample check");
  const Growth& g = *e.growth;
  const bool superlinear =
      g.cls == GrowthClass::Exponential || (g.cls == GrowthClass::Polynomial && g.param >= 2);
  switch (base) {
    case Base::Summable:
      if (superlinear) {
        return verdict(Verdict::In, "comparison test: a_i >= g(i) with sum 1/(g(i)+1) convergent");
      }
      return unknown("linear growth witness does not decide summability");
    case Base::Z:
      if (superlinear) return verdict(Verdict::In, "superlinear growth witness: counting function o(N)");
      return unknown("linear growth witness does not decide density");
    case Base::Banach:
      if (g.min_gap) return verdict(Verdict::In, "unbounded nondecreasing gap witness: Banach density 0");
      return unknown("no gap witness for Banach density");
    case Base::Fin: break;
  }
  return unknown("enumerated set");
}

Decision base_core(Base base, const DescribedSet& s) {
  const Finiteness fin = is_finite(s);
  if (fin == Finiteness::Finite) return verdict(Verdict::In, "finite set");
  if (base == Base::Fin) {
    if (fin == Finiteness::Infinite) return verdict(Verdict::Positive, "infinite set");
    return unknown("finiteness not decided");
  }
  if (const auto& p = s.pattern()) {
    if (!p->is_finite()) {
      Decision d = verdict(Verdict::Positive, "normal form has a switched-on cell: positive upper density");
      if (auto dens = periodic_density(s)) d.trace.push_back("exact density " + rational_str(*dens));
      return d;
    }
  }
  if (auto lf = level_form(s); lf && level_form_dense(*lf)) {
    return verdict(Verdict::Positive, "periodic set meeting every long level, on infinitely many levels");
  }
  const auto& nd = s.node();
  switch (nd.kind) {
    case SetKind::Residue:
      return verdict(Verdict::Positive, "residue class of density 1/" + std::to_string(nd.values[1]));
    case SetKind::Subtree:
      return verdict(Verdict::Positive, "cone of words with a fixed prefix has positive upper density");
    case SetKind::Bits: return verdict(Verdict::Positive, "bit-pattern set has positive density");
    case SetKind::Column: return verdict(Verdict::Positive, "column is a residue class");
    case SetKind::Row:
      return verdict(Verdict::In, "row codes 2^n (2r+1) - 1 grow exponentially with unbounded gaps");
    case SetKind::Enumerated: return decide_enumerated(base, *nd.enumeration);
    case SetKind::Blocks: {
      const Nat mul = nd.values[1];
      switch (base) {
        case Base::Z: return verdict(Verdict::In, "block count O(k^2) below base^k: density 0");
        case Base::Summable: return verdict(Verdict::In, "sum over blocks of (mul k + add) / base^k converges");
        case Base::Banach:
          if (mul > 0) return verdict(Verdict::Positive, "block lengths unbounded: full windows inside blocks");
          return verdict(Verdict::In, "bounded blocks with growing gaps: Banach density 0");
        case Base::Fin: break;
      }
      break;
    }
    case SetKind::Levels: {
      if (is_finite(nd.children[0]) == Finiteness::Infinite) {
        return verdict(Verdict::Positive, "infinitely many full levels: upper density >= 1/2");
      }
      break;
    }
    default: break;
  }
  return unknown(std::string(base_name(base)) + ": no decision rule for this shape");
}

std::shared_ptr<Ideal> make_base(Base base, const std::string& name) {
  auto h = std::make_shared<Ideal>(name, Carrier::Omega, 0, [base](const DescribedSet& s) { return base_core(base, s); });
  h->infinite_is_positive = base == Base::Fin;
  return h;
}

struct ColumnSplit {
  DescribedSet bad = DescribedSet::none();
  DescribedSet maybe = DescribedSet::none();
  std::vector<std::string> notes;
};

// Splits the columns of s by a per-section verdict.
std::optional<ColumnSplit> split_columns(const DescribedSet& s, const std::function<Verdict(const Section&)>& judge) {
  auto prof = column_profile(s);
  if (!prof) return std::nullopt;
  ColumnSplit out;
  for (const auto& piece : *prof) {
    if (is_empty(piece.columns) == Tri::Yes) continue;
    switch (judge(piece.section)) {
      case Verdict::In: break;
      case Verdict::Positive: out.bad = combine(SetOp::Union, out.bad, piece.columns); break;
      case Verdict::Unknown: out.maybe = combine(SetOp::Union, out.maybe, piece.columns); break;
    }
  }
  return out;
}

Decision fin2_core(const DescribedSet& s) {
  auto split = split_columns(s, [](const Section& sec) {
    switch (classify_section(sec)) {
      case SectionClass::AllFinite: return Verdict::In;
      case SectionClass::AllCofinite:
      case SectionClass::AllInfinite: return Verdict::Positive;
      case SectionClass::Unknown: break;
    }
    return Verdict::Unknown;
  });
  if (!split) return unknown("fin2: set outside the planar column fragment");
  const DescribedSet upper = combine(SetOp::Union, split->bad, split->maybe);
  if (is_finite(upper) == Finiteness::Finite) {
    return verdict(Verdict::In, "column analysis: finitely many infinite columns");
  }
  if (is_finite(split->bad) == Finiteness::Infinite) {
    return verdict(Verdict::Positive, "column analysis: infinitely many infinite columns");
  }
  return unknown("column analysis: undecided column classes");
}

Verdict section_verdict(const Ideal& inner, const Section& sec) {
  if (sec.fixed) return inner.decide(*sec.fixed).verdict;
  const SectionClass cls = sec.cls;
  if (!inner.admissible) {
    if (sec.all_nonempty || cls == SectionClass::AllCofinite || cls == SectionClass::AllInfinite) {
      return Verdict::Positive;
    }
    return Verdict::Unknown;
  }
  switch (cls) {
    case SectionClass::AllFinite: return Verdict::In;
    case SectionClass::AllCofinite: return Verdict::Positive;
    case SectionClass::AllInfinite: return inner.infinite_is_positive ? Verdict::Positive : Verdict::Unknown;
    case SectionClass::Unknown: break;
  }
  return Verdict::Unknown;
}

}  // namespace

IdealHandle fin_ideal() {
  static const IdealHandle h = [] {
    auto i = (make_base(Base::Fin, "fin"));
    i->tags = CatalogTags{true, true, true, "Sigma^0_2"};
    return IdealHandle(i);
  }();
  return h;
}

IdealHandle density_zero_ideal() {
  static const IdealHandle h = [] {
    auto i = (make_base(Base::Z, "z"));
    i->tags = CatalogTags{false, true, false, "Pi^0_3"};
    return IdealHandle(i);
  }();
  return h;
}

IdealHandle summable_ideal() {
  static const IdealHandle h = [] {
    auto i = (make_base(Base::Summable, "summable"));
    i->tags = CatalogTags{true, true, true, "Sigma^0_2"};
    return IdealHandle(i);
  }();
  return h;
}

IdealHandle banach_ideal() {
  static const IdealHandle h = make_base(Base::Banach, "banach");
  return h;
}

IdealHandle trivial_ideal() {
  static const IdealHandle h = [] {
    auto i = std::make_shared<Ideal>("empty", Carrier::Omega, 0, [](const DescribedSet& s) {
      switch (is_empty(s)) {
        case Tri::Yes: return verdict(Verdict::In, "empty set");
        case Tri::No: return verdict(Verdict::Positive, "nonempty set");
        case Tri::Unknown: break;
      }
      return unknown("emptiness not decided");
    });
    i->admissible = false;
    i->infinite_is_positive = true;
    return IdealHandle(i);
  }();
  return h;
}

IdealHandle fin2_ideal() {
  static const IdealHandle h = [] {
    auto i = std::make_shared<Ideal>("fin2", Carrier::Plane, 1, fin2_core);
    i->tags = CatalogTags{false, false, false, "Sigma^0_4"};
    return IdealHandle(i);
  }();
  return h;
}

IdealHandle iw_ideal() {
  static const IdealHandle h = std::make_shared<Ideal>("iw", Carrier::Omega, 0, [](const DescribedSet& s) {
    const auto& nd = s.node();
    if (nd.kind == SetKind::Enumerated && nd.enumeration->accumulates_at) {
      const std::string& lit = *nd.enumeration->accumulates_at;
      const auto colon = lit.find(':');
      const std::string period = colon == std::string::npos ? lit : lit.substr(colon + 1);
      if (period.find('1') != std::string::npos) {
        return verdict(Verdict::Positive, "q_enum image accumulates at " + lit + ", which has infinitely many ones");
      }
    }
    return unknown("iw: accumulation points of the indexed rational points not certified");
  });
  return h;
}

IdealHandle fubini_product(const IdealHandle& outer, const IdealHandle& inner) {
  const int nesting = std::max(outer->nesting(), inner->nesting()) + 1;
  if (nesting > 3) throw std::invalid_argument("fubini_product: nesting depth above 3");
  const std::string name = "prod(" + outer->name() + "," + inner->name() + ")";
  auto core = [outer, inner](const DescribedSet& s) -> Decision {
    auto split = split_columns(s, [&](const Section& sec) { return section_verdict(*inner, sec); });
    if (!split) return unknown("product: set outside the planar column fragment");
    const DescribedSet upper = combine(SetOp::Union, split->bad, split->maybe);
    Decision up = outer->decide(upper);
    if (up.verdict == Verdict::In) return nest(up, "product: columns with positive or undecided sections form a member");
    Decision low = outer->decide(split->bad);
    if (low.verdict == Verdict::Positive) return nest(low, "product: columns with positive sections form a positive set");
    return unknown("product: outer decision on bad columns undecided");
  };
  auto h = std::make_shared<Ideal>(name, Carrier::Plane, nesting, core);
  h->admissible = inner->admissible || outer->admissible;
  if (outer->name() == "empty" && inner->name() == "fin") h->tags = CatalogTags{false, true, false, "Pi^0_3"};
  if (outer->name() == "fin" && inner->name() == "fin") h->tags = fin2_ideal()->tags;
  return h;
}

IdealHandle fubini_sum(const IdealHandle& left, const IdealHandle& right) {
  const int nesting = std::max(left->nesting(), right->nesting()) + 1;
  if (nesting > 3) throw std::invalid_argument("fubini_sum: nesting depth above 3");
  const std::string name = "sum(" + left->name() + "," + right->name() + ")";
  auto core = [left, right](const DescribedSet& s) -> Decision {
    DescribedSet l = DescribedSet::none();
    DescribedSet r = DescribedSet::none();
    try {
      l = pullback(ReductionMap::affine(2, 0), s);
      r = pullback(ReductionMap::affine(2, 1), s);
    } catch (const UnsupportedMap& e) {
      return unknown(std::string("sum: ") + e.what());
    }
    Decision dl = left->decide(l);
    if (dl.verdict == Verdict::Positive) return nest(dl, "sum: left component positive");
    Decision dr = right->decide(r);
    if (dr.verdict == Verdict::Positive) return nest(dr, "sum: right component positive");
    if (dl.verdict == Verdict::In && dr.verdict == Verdict::In) return verdict(Verdict::In, "sum: both components members");
    return unknown("sum: a component is undecided");
  };
  auto h = std::make_shared<Ideal>(name, Carrier::Omega, nesting, core);
  h->admissible = left->admissible && right->admissible;
  return h;
}

IdealHandle restrict_ideal(const IdealHandle& ideal, const DescribedSet& a) {
  Decision d = ideal->decide(a);
  if (d.verdict == Verdict::In) {
    throw std::invalid_argument("restrict: " + a.term() + " is in " + ideal->name() + ", restriction is improper");
  }
  const std::string name = "restrict(" + ideal->name() + "," + a.term() + ")";
  auto core = [ideal, a](const DescribedSet& s) {
    return nest(ideal->decide(combine(SetOp::Intersection, s, a)), "restriction: decide S intersected with A");
  };
  auto h = std::make_shared<Ideal>(name, ideal->carrier(), ideal->nesting(), core);
  h->admissible = ideal->admissible;
  h->infinite_is_positive = false;
  return h;
}

namespace {

struct NameParser {
  std::string text;
  std::size_t pos = 0;

  IdealHandle parse() {
    std::string word;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      word.push_back(text[pos++]);
    }
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      IdealHandle a = parse();
      expect(',');
      IdealHandle b = parse();
      expect(')');
      if (word == "prod") return fubini_product(a, b);
      if (word == "sum") return fubini_sum(a, b);
      throw std::invalid_argument("unknown ideal operator '" + word + "'");
    }
    if (word == "fin") return fin_ideal();
    if (word == "z") return density_zero_ideal();
    if (word == "summable" || word == "i1n") return summable_ideal();
    if (word == "banach" || word == "b") return banach_ideal();
    if (word == "empty") return trivial_ideal();
    if (word == "fin2") return fin2_ideal();
    if (word == "etf") return fubini_product(trivial_ideal(), fin_ideal());
    if (word == "fin3") return fubini_product(fin_ideal(), fin2_ideal());
    if (word == "iw") return iw_ideal();
    throw std::invalid_argument("unknown ideal '" + word + "'");
  }

  void expect(char c) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size() || text[pos] != c) throw std::invalid_argument(std::string("ideal name: expected '") + c + "'");
    ++pos;
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }
};

}  // namespace

IdealHandle ideal_by_name(const std::string& name) {
  NameParser p{name};
  IdealHandle h = p.parse();
  if (p.pos != name.size()) throw std::invalid_argument("ideal name: trailing input in '" + name + "'");
  return h;
}

// ---------------------------------------------------------------- maps

ReductionMap ReductionMap::identity() {
  ReductionMap f;
  f.fiber_bound = [](Nat) { return Nat{1}; };
  return f;
}

ReductionMap ReductionMap::affine(Nat a, Nat b) {
  if (a == 0) throw std::invalid_argument("affine map needs a positive slope");
  ReductionMap f;
  f.kind = MapKind::Affine;
  f.a = a;
  f.b = b;
  f.fiber_bound = [](Nat) { return Nat{1}; };
  return f;
}

ReductionMap ReductionMap::proj1() {
  ReductionMap f;
  f.kind = MapKind::Proj1;
  f.finite_to_one = false;
  return f;
}

ReductionMap ReductionMap::proj2() {
  ReductionMap f;
  f.kind = MapKind::Proj2;
  f.finite_to_one = false;
  return f;
}

std::optional<Nat> ReductionMap::apply(Nat n) const {
  switch (kind) {
    case MapKind::Identity: return n;
    case MapKind::Affine: {
      unsigned __int128 v = static_cast<unsigned __int128>(a) * n + b;
      if (v > kNatMax) return std::nullopt;
      return static_cast<Nat>(v);
    }
    case MapKind::Proj1: return unpair(n).first;
    case MapKind::Proj2: return unpair(n).second;
  }
  return std::nullopt;
}

std::string ReductionMap::describe() const {
  switch (kind) {
    case MapKind::Identity: return "identity";
    case MapKind::Affine: return "n -> " + std::to_string(a) + "n + " + std::to_string(b);
    case MapKind::Proj1: return "first projection";
    case MapKind::Proj2: return "second projection";
  }
  return "?";
}

namespace {

// Finite union of residue classes equal to a periodic normal form.
DescribedSet periodic_as_residues(const Pattern& p) {
  std::vector<Nat> head;
  for (Nat n = 0; n < p.head_len(); ++n) {
    if (p.head_bit(n)) head.push_back(n);
  }
  DescribedSet tail = DescribedSet::none();
  for (Nat r = 0; r < p.modulus(); ++r) {
    if (p.cell(0, 0, r)) tail = combine(SetOp::Union, tail, DescribedSet::residue(r, p.modulus()));
  }
  tail = combine(SetOp::Intersection, tail, DescribedSet::interval(p.head_len(), std::nullopt));
  return combine(SetOp::Union, DescribedSet::finite(head), tail);
}

DescribedSet affine_preimage(Nat a, Nat b, const DescribedSet& s) {
  const auto& nd = s.node();
  switch (nd.kind) {
    case SetKind::Finite: {
      std::vector<Nat> out;
      for (Nat v : nd.values) {
        if (v >= b && (v - b) % a == 0) out.push_back((v - b) / a);
      }
      return DescribedSet::finite(out);
    }
    case SetKind::Interval: {
      const Nat lo = nd.values[0] <= b ? 0 : (nd.values[0] - b + a - 1) / a;
      if (!nd.upper) return DescribedSet::interval(lo, std::nullopt);
      if (*nd.upper < b) return DescribedSet::none();
      const Nat hi = (*nd.upper - b) / a;
      return hi < lo ? DescribedSet::none() : DescribedSet::interval(lo, hi);
    }
    case SetKind::Residue: {
      const Nat m = nd.values[1];
      const Nat rhs = (nd.values[0] + m - b % m) % m;
      auto sol = solve_linear_congruence(a % m, rhs, m);
      if (!sol) return DescribedSet::none();
      if (sol->second == 1) return DescribedSet::all();
      return DescribedSet::residue(sol->first, sol->second);
    }
    case SetKind::Column: {
      const Nat c = nd.values[0];
      if (c >= 62) break;
      return affine_preimage(a, b, DescribedSet::residue((Nat{1} << c) - 1, Nat{1} << (c + 1)));
    }
    case SetKind::Union:
    case SetKind::Intersection:
    case SetKind::Difference: {
      SetOp op = nd.kind == SetKind::Union          ? SetOp::Union
                 : nd.kind == SetKind::Intersection ? SetOp::Intersection
                                                    : SetOp::Difference;
      return combine(op, affine_preimage(a, b, nd.children[0]), affine_preimage(a, b, nd.children[1]));
    }
    case SetKind::Complement: return complement(affine_preimage(a, b, nd.children[0]));
    case SetKind::IndexedUnion:
      if (nd.indexed->closed_form) {
        if (auto cf = nd.indexed->closed_form(nd.children[0])) return affine_preimage(a, b, *cf);
      }
      break;
    default: break;
  }
  if (const auto& p = s.pattern(); p && p->is_periodic()) return affine_preimage(a, b, periodic_as_residues(*p));
  throw UnsupportedMap("pullback: affine preimage of " + s.term() + " leaves the algebra");
}

}  // namespace

DescribedSet pullback(const ReductionMap& f, const DescribedSet& s) {
  switch (f.kind) {
    case MapKind::Identity: return s;
    case MapKind::Affine:
      if (f.a == 1 && f.b == 0) return s;
      return affine_preimage(f.a, f.b, s);
    case MapKind::Proj1: return DescribedSet::rect(s, DescribedSet::all());
    case MapKind::Proj2: return DescribedSet::rect(DescribedSet::all(), s);
  }
  throw UnsupportedMap("pullback: unknown map");
}

Json ReductionReport::to_json() const {
  Json j;
  j["violations"] = violations;
  j["unknown_pairs"] = unknown_pairs;
  j["fiber_ok"] = fiber_ok;
  j["fiber_note"] = fiber_note;
  Json rows_json = Json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"set", r.set},
                         {"source", to_string(r.source)},
                         {"target", to_string(r.target)},
                         {"violation", r.violation}});
  }
  j["rows"] = rows_json;
  return j;
}

ReductionReport check_reduction(const ReductionMap& f, const IdealHandle& source, const IdealHandle& target,
                                const std::vector<DescribedSet>& samples, ReductionMode mode, Nat fiber_horizon) {
  ReductionReport rep;
  for (const auto& s : samples) {
    ReductionRow row;
    row.set = s.term();
    row.source = source->decide(s).verdict;
    try {
      row.target = target->decide(pullback(f, s)).verdict;
    } catch (const UnsupportedMap&) {
      row.target = Verdict::Unknown;
    }
    if (row.source == Verdict::Unknown || row.target == Verdict::Unknown) {
      ++rep.unknown_pairs;
    } else if (row.source == Verdict::In && row.target == Verdict::Positive) {
      row.violation = true;
    } else if (mode == ReductionMode::RudinBlass && row.source == Verdict::Positive && row.target == Verdict::In) {
      row.violation = true;
    }
    if (row.violation) ++rep.violations;
    rep.rows.push_back(std::move(row));
  }
  if (mode == ReductionMode::RudinBlass) {
    std::map<Nat, Nat> fibers;
    for (Nat m = 0; m < fiber_horizon; ++m) {
      if (auto v = f.apply(m)) ++fibers[*v];
    }
    if (!f.finite_to_one || !f.fiber_bound) {
      rep.fiber_ok = false;
      rep.fiber_note = f.describe() + " is not declared finite-to-one; |f^-1(0) below " +
                       std::to_string(fiber_horizon) + "| = " + std::to_string(fibers[0]);
    } else {
      for (const auto& [value, count] : fibers) {
        if (count > f.fiber_bound(value)) {
          rep.fiber_ok = false;
          rep.fiber_note = "fiber of " + std::to_string(value) + " has " + std::to_string(count) +
                           " points, declared bound " + std::to_string(f.fiber_bound(value));
          break;
        }
      }
      if (rep.fiber_ok) rep.fiber_note = "declared fiber bounds hold below " + std::to_string(fiber_horizon);
    }
    if (!rep.fiber_ok) ++rep.violations;
  } else {
    rep.fiber_note = "Katetov mode: fibers unconstrained";
  }
  return rep;
}

// ---------------------------------------------------------------- P-like witnesses

std::optional<std::size_t> refute_candidate(const std::vector<DescribedSet>& chain, const DescribedSet& candidate) {
  for (std::size_t n = 0; n < chain.size(); ++n) {
    if (is_finite(combine(SetOp::Difference, candidate, chain[n])) == Finiteness::Infinite) return n;
  }
  return std::nullopt;
}

namespace {

ClauseVerdict from_verdict(Verdict v, Verdict wanted) {
  if (v == Verdict::Unknown) return ClauseVerdict::Inconclusive;
  return v == wanted ? ClauseVerdict::Pass : ClauseVerdict::Fail;
}

}  // namespace

Report validate_p_witness(const IdealHandle& ideal, const PWitness& w, Nat horizon) {
  if (w.chain.size() < 2) throw std::invalid_argument("validate_p_witness: chain depth must be at least 2");
  Report rep;
  rep.subject = std::string(to_string(w.kind)) + " witness for " + ideal->name();
  rep.horizons["index"] = horizon;
  rep.horizons["depth"] = w.chain.size();
  const auto& chain = w.chain;
  for (std::size_t n = 0; n + 1 < chain.size(); ++n) {
    const DescribedSet extra = combine(SetOp::Difference, chain[n + 1], chain[n]);
    const Tri e = is_empty(extra);
    Json ev = {{"link", n}};
    if (e == Tri::Yes) {
      rep.pass("decreasing_" + std::to_string(n), ev);
    } else if (e == Tri::No) {
      rep.fail("decreasing_" + std::to_string(n), ev);
    } else {
      auto hit = first_member(extra, 0, horizon);
      ev["searched_to"] = horizon;
      if (hit) {
        ev["counterexample"] = *hit;
        rep.fail("decreasing_" + std::to_string(n), ev);
      } else {
        rep.add("decreasing_" + std::to_string(n), ClauseVerdict::Inconclusive, ev);
      }
    }
  }
  for (std::size_t n = 0; n < chain.size(); ++n) {
    Decision d = ideal->decide(chain[n]);
    Json ev = decision_json(d);
    if (auto dens = periodic_density(chain[n])) ev["density"] = rational_str(*dens);
    rep.add("positive_" + std::to_string(n), from_verdict(d.verdict, Verdict::Positive), ev);
  }
  if (w.kind != PKind::Pplus) {
    const Verdict wanted = w.kind == PKind::Pminus ? Verdict::In : Verdict::Positive;
    for (std::size_t n = 0; n + 1 < chain.size(); ++n) {
      const DescribedSet step = combine(SetOp::Difference, chain[n], chain[n + 1]);
      Decision d = ideal->decide(step);
      Json ev = decision_json(d);
      if (auto dens = periodic_density(step)) ev["density"] = rational_str(*dens);
      rep.add("step_" + std::to_string(n), from_verdict(d.verdict, wanted), ev);
    }
  }
  Json densities = Json::array();
  bool all_periodic = true;
  for (const auto& a : chain) {
    if (auto dens = periodic_density(a)) {
      densities.push_back(rational_str(*dens));
    } else {
      all_periodic = false;
    }
  }
  if (all_periodic) {
    rep.notes["link_densities"] = densities;
    rep.notes["pseudo_intersection_density_bound"] = densities.back();
  }
  if (w.candidate) {
    const DescribedSet& a = *w.candidate;
    Decision d = ideal->decide(a);
    rep.add("candidate_positive", from_verdict(d.verdict, Verdict::Positive), decision_json(d));
    bool all_almost = true;
    for (std::size_t n = 0; n < chain.size(); ++n) {
      const Finiteness f = is_finite(combine(SetOp::Difference, a, chain[n]));
      ClauseVerdict v = f == Finiteness::Finite     ? ClauseVerdict::Pass
                        : f == Finiteness::Infinite ? ClauseVerdict::Fail
                                                    : ClauseVerdict::Inconclusive;
      if (v != ClauseVerdict::Pass) all_almost = false;
      rep.add("candidate_almost_in_" + std::to_string(n), v, {{"finiteness", to_string(f)}});
    }
    rep.notes["conclusion"] = all_almost && d.verdict == Verdict::Positive
                                  ? "candidate is a positive pseudo-intersection; the chain does not refute the property"
                                  : "candidate is not a certified positive pseudo-intersection";
  }
  return rep;
}

std::vector<DescribedSet> positive_candidates(const IdealHandle& ideal, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](Nat lo, Nat hi) { return std::uniform_int_distribution<Nat>(lo, hi)(rng); };
  auto res = [&](Nat max_mod) {
    Nat m = pick(1, max_mod);
    return DescribedSet::residue(pick(0, m - 1), m);
  };
  auto tail = [&](Nat max_lo) { return DescribedSet::interval(pick(0, max_lo), std::nullopt); };
  const bool planar = ideal->carrier() == Carrier::Plane;
  std::vector<DescribedSet> out;
  std::set<std::string> seen;
  std::size_t attempts = 0;
  while (out.size() < count && attempts < count * 50) {
    ++attempts;
    DescribedSet c = DescribedSet::none();
    if (planar) {
      switch (pick(0, 7)) {
        case 0: c = DescribedSet::rect(combine(SetOp::Intersection, res(8), tail(20)), res(6)); break;
        case 1: c = DescribedSet::rect(tail(40), combine(SetOp::Intersection, res(5), tail(50))); break;
        case 2: c = combine(SetOp::Union, DescribedSet::rect(res(7), res(4)), DescribedSet::column(pick(0, 12))); break;
        case 3:
          c = combine(SetOp::Difference, DescribedSet::rect(res(6), DescribedSet::all()),
                      DescribedSet::under(pick(0, 3), pick(0, 10)));
          break;
        case 4: {
          Nat m = pick(2, 16);
          c = combine(SetOp::Intersection, DescribedSet::residue(pick(0, m - 1), m),
                      DescribedSet::rect(res(5), DescribedSet::all()));
          break;
        }
        case 5: c = DescribedSet::rect(DescribedSet::finite({pick(0, 30)}), combine(SetOp::Intersection, res(6), tail(30))); break;
        case 6:
          c = combine(SetOp::Union, DescribedSet::rect(DescribedSet::finite({pick(0, 20), pick(0, 20)}), res(5)),
                      DescribedSet::finite({pick(0, 1000)}));
          break;
        default: c = combine(SetOp::Union, DescribedSet::rect(res(9), res(3)), DescribedSet::finite({pick(0, 1000), pick(0, 1000)})); break;
      }
    } else {
      switch (pick(0, 5)) {
        case 0: c = combine(SetOp::Intersection, res(32), tail(500)); break;
        case 1: c = combine(SetOp::Union, res(64), DescribedSet::finite({pick(0, 100), pick(0, 100)})); break;
        case 2: c = combine(SetOp::Difference, combine(SetOp::Union, res(16), res(24)), DescribedSet::interval(0, pick(0, 300))); break;
        case 3: c = combine(SetOp::Intersection, DescribedSet::levels(res(3)), res(12)); break;
        case 4: c = DescribedSet::subtree(BinWord::parse(std::to_string(pick(0, 1)) + std::to_string(pick(0, 1)))); break;
        default: c = combine(SetOp::Intersection, res(10), complement(res(3))); break;
      }
    }
    if (seen.insert(c.term()).second && ideal->decide(c).verdict == Verdict::Positive) out.push_back(c);
  }
  return out;
}

std::vector<DescribedSet> planar_positive_candidates(std::size_t count, std::uint64_t seed) {
  return positive_candidates(fin2_ideal(), count, seed);
}

const std::vector<CatalogEntry>& ideal_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"fin", CatalogTags{true, true, true, "Sigma^0_2"}},
      {"summable", CatalogTags{true, true, true, "Sigma^0_2"}},
      {"z", CatalogTags{false, true, false, "Pi^0_3"}},
      {"fin2", CatalogTags{false, false, false, "Sigma^0_4"}},
      {"prod(empty,fin)", CatalogTags{false, true, false, "Pi^0_3"}},
  };
  return entries;
}

}  // namespace idealpts

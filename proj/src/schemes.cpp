#include "idealpts/schemes.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace idealpts {

// ---------------------------------------------------------------- sites

bool site_less(Carrier c, const Site& x, const Site& y) {
  if (c == Carrier::Omega) return x.a < y.a;
  const Nat hx = std::max(x.a, x.b);
  const Nat hy = std::max(y.a, y.b);
  if (hx != hy) return hx < hy;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

Nat site_size(Carrier c, const Site& x) { return c == Carrier::Omega ? x.a : std::max(x.a, x.b); }

bool site_in(Carrier c, const DescribedSet& s, const Site& x) {
  return c == Carrier::Omega ? s.contains(x.a) : s.contains_pair(x.a, x.b);
}

Json site_json(Carrier c, const Site& x) {
  if (c == Carrier::Omega) return Json(x.a);
  return Json::array({x.a, x.b});
}

// ---------------------------------------------------------------- helpers

namespace {

Nat sat_pow2(Nat e) { return e >= 64 ? kNatMax : Nat{1} << e; }

Nat sat_add(Nat a, Nat b) { return a > kNatMax - b ? kNatMax : a + b; }

// Little-endian binary digits of v.
BinWord bits_of(Nat v) {
  std::vector<std::uint8_t> b;
  while (v > 0) {
    b.push_back(static_cast<std::uint8_t>(v & 1U));
    v >>= 1U;
  }
  return BinWord(std::move(b));
}

BinWord suffix(const BinWord& s, std::size_t k) {
  const auto& b = s.bits();
  return BinWord(std::vector<std::uint8_t>(b.begin() + static_cast<std::ptrdiff_t>(std::min(k, b.size())), b.end()));
}

BinWord xor_words(const BinWord& s, const BinWord& t) {
  std::vector<std::uint8_t> b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) b[i] = s[i] ^ t[i];
  return BinWord(std::move(b));
}

std::size_t leading_zeros(const BinWord& s) {
  std::size_t k = 0;
  while (k < s.size() && s[k] == 0) ++k;
  return k;
}

std::optional<Nat> first_one(const CantorPoint& x) {
  const Nat limit = x.is_periodic() ? x.head().size() + x.period().size() : std::min<Nat>(x.horizon(), 4096);
  for (Nat i = 0; i < limit; ++i) {
    if (x.bit(i)) return i;
  }
  return std::nullopt;
}

bool is_zero_point(const CantorPoint& x) { return x.is_periodic() && x == CantorPoint::zeros(); }

std::vector<Site> generic_leading(const IScheme& a, const BinWord& s, std::size_t count) {
  const DescribedSet nd = a.node(s);
  std::vector<Site> out;
  if (a.carrier == Carrier::Omega) {
    Nat from = 0;
    while (out.size() < count) {
      auto v = first_member(nd, from, Nat{1} << 24);
      if (!v) break;
      out.push_back(Site{*v, 0});
      if (*v == kNatMax) break;
      from = *v + 1;
    }
    return out;
  }
  for (Nat h = 8;; h *= 2) {
    auto cells = pairs_upto(nd, h);
    if (cells.size() >= count || h >= (Nat{1} << 14)) {
      for (const auto& [c, r] : cells) out.push_back(Site{c, r});
      std::sort(out.begin(), out.end(), [](const Site& x, const Site& y) { return site_less(Carrier::Plane, x, y); });
      if (out.size() > count) out.resize(count);
      return out;
    }
  }
}

// Minimal elements of node(x|n), avoiding earlier picks (shared with realizers through leading()).
struct DiagonalState {
  CantorPoint x;
  std::mutex mu;
  std::vector<Nat> values;
};

}  // namespace

CantorPoint prepend(const BinWord& w, const CantorPoint& x) {
  if (w.empty()) return x;
  if (x.is_periodic()) return CantorPoint::periodic(w.concat(x.head()), x.period());
  const Nat n = w.size();
  return CantorPoint::lazy([w, x, n](Nat i) { return i < n ? w[i] : x.bit(i - n); },
                           x.horizon() == kNatMax ? kNatMax : x.horizon() + n, w.str() + "+" + x.literal());
}

CantorPoint drop_prefix(const CantorPoint& x, Nat n) {
  if (n == 0) return x;
  if (x.is_periodic()) {
    const Nat h = x.head().size();
    if (n <= h) return CantorPoint::periodic(suffix(x.head(), n), x.period());
    const Nat p = x.period().size();
    const Nat shift = (n - h) % p;
    std::vector<std::uint8_t> bits(p);
    for (Nat i = 0; i < p; ++i) bits[i] = x.period()[(i + shift) % p];
    return CantorPoint::periodic(BinWord{}, BinWord(std::move(bits)));
  }
  return CantorPoint::lazy([x, n](Nat i) { return x.bit(i + n); }, x.horizon() > n ? x.horizon() - n : 0,
                           x.literal() + ">>" + std::to_string(n));
}

DescribedSet fin_node(const BinWord& s) {
  if (s.empty()) return DescribedSet::all();
  if (s.size() >= 63) throw ResourceLimit("fin_node: word longer than 62");
  return DescribedSet::residue(word_value(s), Nat{1} << s.size());
}

std::shared_ptr<const Enumeration> fin_diagonal(const CantorPoint& x) {
  auto st = std::make_shared<DiagonalState>();
  st->x = x;
  auto e = std::make_shared<Enumeration>();
  e->term = "fin_diag(" + x.literal() + ")";
  e->at = [st](Nat i) {
    std::lock_guard<std::mutex> lock(st->mu);
    while (st->values.size() <= i) {
      const Nat n = st->values.size();
      if (n >= 63 || (!st->values.empty() && st->values.back() == kNatMax)) {
        st->values.push_back(kNatMax);
        continue;
      }
      const Nat step = Nat{1} << n;
      Nat cand = word_value(st->x.prefix(n));
      while (std::find(st->values.begin(), st->values.end(), cand) != st->values.end()) {
        cand = sat_add(cand, step);
        if (cand == kNatMax) break;
      }
      st->values.push_back(cand);
    }
    return st->values[i];
  };
  Growth g;
  g.cls = GrowthClass::Linear;
  g.lower = [](Nat i) { return i; };
  e->growth = g;
  return e;
}

// ---------------------------------------------------------------- Fin

SchemeHandle fin_full_scheme() {
  static const SchemeHandle h = [] {
    auto a = std::make_shared<IScheme>();
    a->name = "fin-full";
    a->carrier = Carrier::Omega;
    a->ideal = "fin";
    a->full = true;
    a->claimed_b = "empty";
    a->node = fin_node;
    a->cert_gen = [](const CantorPoint& x) -> std::optional<SchemeCertificate> {
      auto diag = fin_diagonal(x);
      SchemeCertificate c{x, DescribedSet::enumerated(diag), nullptr, nullptr,
                          "c_n = min(node(x|n) minus earlier picks); C \\ node(x|n) lies in {c_0 .. c_(n-1)}"};
      c.bound = [](Nat n) { return n; };
      c.cutoff = [diag](Nat n) { return n == 0 ? Nat{0} : sat_add(diag->at(n - 1), 1); };
      return c;
    };
    a->claims_in_b = [](const CantorPoint&) { return false; };
    a->kill_argument = "none: every branch carries a diagonal certificate";
    a->locate = [](const Site& i) -> std::optional<CantorPoint> { return CantorPoint::padded(bits_of(i.a)); };
    return SchemeHandle(a);
  }();
  return h;
}

// ---------------------------------------------------------------- (empty) x Fin

SchemeHandle empty_times_fin_scheme() {
  static const SchemeHandle h = [] {
    auto a = std::make_shared<IScheme>();
    a->name = "etf";
    a->carrier = Carrier::Plane;
    a->ideal = "etf";
    a->full = true;
    a->claimed_b = "{0^inf}";
    a->node = [](const BinWord& s) {
      const std::size_t k = leading_zeros(s);
      if (k == s.size()) return DescribedSet::rect(DescribedSet::interval(k, std::nullopt), DescribedSet::all());
      return DescribedSet::rect(DescribedSet::finite({k}), fin_node(suffix(s, k + 1)));
    };
    a->cert_gen = [](const CantorPoint& x) -> std::optional<SchemeCertificate> {
      auto one = first_one(x);
      if (!one) return std::nullopt;
      const Nat k = *one;
      auto diag = fin_diagonal(drop_prefix(x, k + 1));
      SchemeCertificate c{x, DescribedSet::rect(DescribedSet::finite({k}), DescribedSet::enumerated(diag)), nullptr,
                          nullptr, "column k carries the Fin diagonal of the branch after 0^k 1"};
      c.bound = [k](Nat n) { return n <= k + 1 ? Nat{0} : n - k - 1; };
      c.cutoff = [k, diag](Nat n) { return n <= k + 1 ? Nat{0} : sat_add(std::max(k, diag->at(n - k - 2)), 1); };
      return c;
    };
    a->claims_in_b = is_zero_point;
    a->kill_argument =
        "C \\ node(0^k) finite for all k forces every column of C to be finite, so C is in (empty) x Fin";
    a->locate = [](const Site& i) -> std::optional<CantorPoint> {
      return CantorPoint::padded(BinWord::zeros(i.a).append(1).concat(bits_of(i.b)));
    };
    return SchemeHandle(a);
  }();
  return h;
}

// ---------------------------------------------------------------- anchored Fin x Fin

namespace {

bool in_subtree(const BinWord& s, Nat col) {
  if (col == kNatMax) return false;
  return s.is_prefix_of(word_from_index(col));
}

std::vector<Site> anchored_leading(const BinWord& s, std::size_t count) {
  if (s.size() >= 60) throw ResourceLimit("anchored scheme: word longer than 59");
  std::vector<Site> cand;
  for (std::size_t p = 0; p + 1 < s.size(); ++p) {
    if (s[p] != 1) continue;
    const std::size_t lo = p + 1;
    const Nat col = word_index(s.prefix(lo));
    const Nat base = word_value(suffix(s, lo)) << lo;
    std::size_t emitted = 0;
    for (Nat high = 0; emitted < count; ++high) {
      for (Nat low = 0; low < (Nat{1} << lo) && emitted < count; ++low, ++emitted) {
        cand.push_back(Site{col, (high << s.size()) + base + low});
      }
    }
  }
  const Nat c0 = word_index(s);
  std::size_t emitted = 0;
  for (Nat h = c0; emitted < count; ++h) {
    for (Nat c = c0; c < h && emitted < count; ++c) {
      if (in_subtree(s, c)) {
        cand.push_back(Site{c, h});
        ++emitted;
      }
    }
    if (in_subtree(s, h)) {
      for (Nat r = 0; r <= h && emitted < count; ++r, ++emitted) cand.push_back(Site{h, r});
    }
  }
  std::sort(cand.begin(), cand.end(), [](const Site& x, const Site& y) { return site_less(Carrier::Plane, x, y); });
  if (cand.size() > count) cand.resize(count);
  return cand;
}

struct AnchorState {
  CantorPoint x;
  std::mutex mu;
  std::vector<Nat> ends;  // m_j: lengths of the prefixes of x ending in a one
  Nat scanned = 0;
};

// m_j, or kNatMax once it would reach 63.
Nat anchor_end(AnchorState& st, Nat j) {
  std::lock_guard<std::mutex> lock(st.mu);
  while (st.ends.size() <= j && st.scanned < 62) {
    if (st.x.bit(st.scanned)) st.ends.push_back(st.scanned + 1);
    ++st.scanned;
  }
  return j < st.ends.size() ? st.ends[j] : kNatMax;
}

}  // namespace

SchemeHandle fin2_anchored_scheme() {
  static const SchemeHandle h = [] {
    auto a = std::make_shared<IScheme>();
    a->name = "fin2-anchored";
    a->carrier = Carrier::Plane;
    a->ideal = "fin2";
    a->full = false;
    a->claimed_b = "Q(2^omega)";
    a->node = [](const BinWord& s) {
      DescribedSet acc = DescribedSet::rect(DescribedSet::subtree(s), DescribedSet::all());
      for (std::size_t p = 0; p + 1 < s.size(); ++p) {
        if (s[p] != 1) continue;
        const auto lo = static_cast<unsigned>(p + 1);
        acc = combine(SetOp::Union, acc,
                      DescribedSet::rect(DescribedSet::finite({word_index(s.prefix(lo))}), DescribedSet::bits(lo, suffix(s, lo))));
      }
      return acc;
    };
    a->cert_gen = [](const CantorPoint& x) -> std::optional<SchemeCertificate> {
      if (x.is_periodic() && x.period().is_zero()) return std::nullopt;
      auto st = std::make_shared<AnchorState>();
      st->x = x;
      auto cols = std::make_shared<Enumeration>();
      cols->term = "anchors(" + x.literal() + ")";
      cols->at = [st](Nat j) {
        const Nat m = anchor_end(*st, j);
        return m == kNatMax ? kNatMax : word_index(st->x.prefix(m));
      };
      Growth g;
      g.cls = GrowthClass::Exponential;
      g.param = 2;
      g.lower = [](Nat j) { return sat_pow2(j); };
      cols->growth = g;
      auto fam = std::make_shared<ColumnFamily>();
      fam->term = "anchored_cert(" + x.literal() + ")";
      fam->columns = cols;
      fam->section = [st, g](Nat j) {
        auto rows = std::make_shared<Enumeration>();
        rows->term = "K_" + std::to_string(j) + "(" + st->x.literal() + ")";
        rows->at = [st, j](Nat i) {
          const Nat m = anchor_end(*st, j);
          if (m == kNatMax || m + j + i >= 63) return kNatMax;
          const Nat len = m + j + i;
          return (Nat{1} << len) + word_value(st->x.prefix(len));
        };
        rows->growth = g;
        return DescribedSet::enumerated(rows);
      };
      SchemeCertificate c{x, DescribedSet::column_family(fam), nullptr, nullptr,
                          "anchor columns idx(x|m_j) with rows 2^(m_j+j+i) + (x|m_j+j+i); a row leaves node(x|n) "
                          "only when m_j+j+i < n, and then col, row < 2^n"};
      c.bound = [st](Nat n) {
        Nat total = 0;
        for (Nat j = 0;; ++j) {
          const Nat m = anchor_end(*st, j);
          if (m == kNatMax || m + j >= n) break;
          total += n - m - j;
        }
        return total;
      };
      c.cutoff = [](Nat n) { return sat_pow2(n); };
      return c;
    };
    a->claims_in_b = [](const CantorPoint& x) { return x.is_periodic() && x.period().is_zero(); };
    a->kill_argument =
        "an infinite column of a set almost inside every node must be an anchor of x; an eventually zero x has "
        "finitely many anchors, so a set with infinitely many infinite columns loses a whole column at some level";
    a->locate = [](const Site& i) -> std::optional<CantorPoint> {
      const BinWord u = word_from_index(i.a);
      if (u.empty() || u.back() != 1) return std::nullopt;
      return CantorPoint::padded(u.concat(suffix(bits_of(i.b), u.size())));
    };
    a->leading = anchored_leading;
    return SchemeHandle(a);
  }();
  return h;
}

// ---------------------------------------------------------------- Z tail scheme

SchemeHandle z_tail_scheme() {
  static const SchemeHandle h = [] {
    auto a = std::make_shared<IScheme>();
    a->name = "z-tail";
    a->carrier = Carrier::Omega;
    a->ideal = "z";
    a->full = true;
    a->claimed_b = "{0^inf}";
    a->node = [](const BinWord& s) {
      const std::size_t k = leading_zeros(s);
      if (k >= 62) throw ResourceLimit("z-tail scheme: word with more than 61 leading zeros");
      if (k == s.size()) {
        return combine(SetOp::Difference, DescribedSet::residue(0, Nat{1} << k), DescribedSet::finite({0}));
      }
      return combine(SetOp::Intersection, DescribedSet::residue(Nat{1} << k, Nat{1} << (k + 1)),
                     DescribedSet::levels(fin_node(suffix(s, k + 1))));
    };
    a->cert_gen = [](const CantorPoint& x) -> std::optional<SchemeCertificate> {
      auto one = first_one(x);
      if (!one || *one >= 62) return std::nullopt;
      const Nat k = *one;
      auto diag = fin_diagonal(drop_prefix(x, k + 1));
      SchemeCertificate c{x,
                          combine(SetOp::Intersection, DescribedSet::residue(Nat{1} << k, Nat{1} << (k + 1)),
                                  DescribedSet::levels(DescribedSet::enumerated(diag))),
                          nullptr, nullptr,
                          "S_k on the levels of the Fin diagonal after 0^k 1; C \\ node(x|n) lies on levels c_0 .. "
                          "c_(n-k-2)"};
      c.bound = [k, diag](Nat n) {
        Nat total = 0;
        for (Nat i = 0; i + k + 1 < n; ++i) total = sat_add(total, sat_pow2(diag->at(i)));
        return total;
      };
      c.cutoff = [k, diag](Nat n) {
        if (n <= k + 1) return Nat{0};
        const Nat top = diag->at(n - k - 2);
        return top >= 63 ? kNatMax : (Nat{1} << (top + 1)) - 1;
      };
      return c;
    };
    a->claims_in_b = is_zero_point;
    a->kill_argument = "node(0^k) has density 2^-k, so a set of positive upper density d leaves it infinitely "
                       "often once 2^-k < d";
    a->locate = [](const Site& i) -> std::optional<CantorPoint> {
      if (i.a == 0) return std::nullopt;
      const auto k = static_cast<std::size_t>(std::countr_zero(i.a));
      return CantorPoint::padded(BinWord::zeros(k).append(1).concat(bits_of(level_of(i.a))));
    };
    return SchemeHandle(a);
  }();
  return h;
}

// ---------------------------------------------------------------- from a partition

SchemeHandle scheme_from_partition(std::shared_ptr<const IndexedFamily> parts, const IdealHandle& ideal,
                                   std::size_t check_parts) {
  const Carrier carrier = parts->planar ? Carrier::Plane : Carrier::Omega;
  if (ideal->carrier() != carrier) throw CarrierMismatch("scheme_from_partition: carrier of the parts differs from the ideal");
  for (std::size_t i = 0; i < check_parts; ++i) {
    const DescribedSet pi = parts->part(i);
    const Verdict v = ideal->decide(pi).verdict;
    if (v != Verdict::Positive) {
      throw std::invalid_argument("scheme_from_partition: part " + std::to_string(i) + " is not decided positive");
    }
    for (std::size_t j = i + 1; j < check_parts; ++j) {
      if (is_empty(combine(SetOp::Intersection, pi, parts->part(j))) != Tri::Yes) {
        throw std::invalid_argument("scheme_from_partition: parts " + std::to_string(i) + " and " + std::to_string(j) +
                                    " are not provably disjoint");
      }
    }
  }
  auto a = std::make_shared<IScheme>();
  a->name = "partition(" + parts->name + ")";
  a->carrier = carrier;
  a->ideal = ideal->name();
  a->full = true;
  a->claimed_b = "not claimed";
  a->node = [parts](const BinWord& s) { return DescribedSet::indexed_union(parts, fin_node(s)); };
  a->claims_in_b = [](const CantorPoint&) { return false; };
  a->locate = [parts, carrier](const Site& i) -> std::optional<CantorPoint> {
    std::optional<Nat> n;
    if (carrier == Carrier::Omega && parts->locate) n = parts->locate(i.a);
    if (carrier == Carrier::Plane && parts->locate_pair) n = parts->locate_pair(i.a, i.b);
    if (!n) return std::nullopt;
    return CantorPoint::padded(bits_of(*n));
  };
  return a;
}

// ---------------------------------------------------------------- transforms

SchemeHandle fullize(const SchemeHandle& src) {
  auto a = std::make_shared<IScheme>(*src);
  a->name = "fullize(" + src->name + ")";
  a->full = true;
  a->node = [src](const BinWord& s) {
    std::size_t start = 0;  // length of the longest prefix ending in 1
    for (std::size_t i = s.size(); i > 0; --i) {
      if (s[i - 1] == 1) {
        start = i;
        break;
      }
    }
    if (start == s.size() && !s.empty()) return src->node(s);
    DescribedSet acc = start == 0 ? DescribedSet::all() : src->node(s.prefix(start));
    for (std::size_t q = start; q < s.size(); ++q) acc = combine(SetOp::Difference, acc, src->node(s.prefix(q).append(1)));
    return acc;
  };
  if (!src->full) a->locate = nullptr;
  a->leading = nullptr;
  a->source_word = nullptr;
  a->history.push_back("fullize: root set to the whole carrier, 0-children replaced by parent minus the 1-sibling");
  return a;
}

SchemeHandle shift_to_zero(const SchemeHandle& src, const CantorPoint& xstar) {
  auto a = std::make_shared<IScheme>(*src);
  a->name = "shift(" + src->name + "," + xstar.literal() + ")";
  a->node = [src, xstar](const BinWord& s) { return src->node(xor_words(s, xstar.prefix(s.size()))); };
  if (src->cert_gen) {
    a->cert_gen = [src, xstar](const CantorPoint& x) -> std::optional<SchemeCertificate> {
      auto c = src->cert_gen(point_xor(x, xstar));
      if (!c) return std::nullopt;
      c->branch = x;
      return c;
    };
  }
  if (src->claims_in_b) {
    a->claims_in_b = [src, xstar](const CantorPoint& x) { return src->claims_in_b(point_xor(x, xstar)); };
  }
  if (src->locate) {
    a->locate = [src, xstar](const Site& i) -> std::optional<CantorPoint> {
      auto y = src->locate(i);
      if (!y) return std::nullopt;
      return point_xor(*y, xstar);
    };
  }
  if (src->leading) {
    a->leading = [src, xstar](const BinWord& s, std::size_t count) {
      return src->leading(xor_words(s, xstar.prefix(s.size())), count);
    };
  }
  a->source_word = [xstar](const BinWord& s) { return xor_words(s, xstar.prefix(s.size())); };
  if (!(xstar == CantorPoint::zeros())) a->claimed_b = "(" + src->claimed_b + ") + " + xstar.literal();
  a->history.push_back("shift: node'(s) = node(s + x*|s|) with x* = " + xstar.literal());
  return a;
}

BinWord doubled_word(const BinWord& s) {
  const std::size_t z = leading_zeros(s);
  BinWord t = BinWord::zeros(2 * z);
  for (std::size_t i = z; i < s.size(); ++i) t = t.append(s[i]).append(1);
  return t;
}

namespace {

// Image of a branch x != 0^inf under the doubling map: 0^2z then (x_i, 1) from the first one on.
CantorPoint doubled_point(const CantorPoint& x, Nat z) {
  if (x.is_periodic()) {
    const Nat head = std::max<Nat>(x.head().size(), z);
    std::vector<std::uint8_t> h(2 * z, 0);
    for (Nat i = z; i < head; ++i) {
      h.push_back(x.bit(i));
      h.push_back(1);
    }
    std::vector<std::uint8_t> p;
    for (Nat i = 0; i < x.period().size(); ++i) {
      p.push_back(x.bit(head + i));
      p.push_back(1);
    }
    return CantorPoint::periodic(BinWord(std::move(h)), BinWord(std::move(p)));
  }
  return CantorPoint::lazy(
      [x, z](Nat j) -> std::uint8_t {
        if (j < 2 * z) return 0;
        const Nat r = j - 2 * z;
        return r % 2 == 0 ? x.bit(z + r / 2) : 1;
      },
      x.horizon() == kNatMax ? kNatMax : 2 * x.horizon(), "double(" + x.literal() + ")");
}

}  // namespace

SchemeHandle double_to_sigma02(const SchemeHandle& src) {
  if (src->claimed_b != "Q(2^omega)") {
    throw std::invalid_argument("double_to_sigma02: source scheme must claim B = Q(2^omega)");
  }
  auto a = std::make_shared<IScheme>(*src);
  a->name = "double(" + src->name + ")";
  a->full = false;
  a->claimed_b = "{0^inf}";
  a->node = [src](const BinWord& s) { return src->node(doubled_word(s)); };
  a->source_word = doubled_word;
  a->cert_gen = nullptr;
  if (src->cert_gen) {
    a->cert_gen = [src](const CantorPoint& x) -> std::optional<SchemeCertificate> {
      auto one = first_one(x);
      if (!one) return std::nullopt;
      auto c = src->cert_gen(doubled_point(x, *one));
      if (!c) return std::nullopt;
      auto bound = c->bound;
      auto cutoff = c->cutoff;
      c->branch = x;
      c->bound = [bound](Nat n) { return bound(2 * n); };
      c->cutoff = [cutoff](Nat n) { return cutoff(2 * n); };
      c->law += "; transported along t_(x|n) = y|2n";
      return c;
    };
  }
  a->claims_in_b = is_zero_point;
  a->kill_argument = "0^inf stays in B because node'(0^n) = node(0^2n) and 0^inf is in Q(2^omega)";
  a->locate = nullptr;
  if (src->leading) {
    a->leading = [src](const BinWord& s, std::size_t count) { return src->leading(doubled_word(s), count); };
  }
  a->history.push_back("double: t_(0^n) = 0^2n, t_(s i) = t_s (i,1) off the zero spine");
  return a;
}

namespace {

struct DensifyState {
  SchemeHandle src;
  std::function<CantorPoint(Nat)> points;
  std::mutex mu;
  std::map<std::vector<std::uint8_t>, BinWord> words;
  std::map<std::vector<std::uint8_t>, Nat> picks;
};

BinWord densify_word(DensifyState& st, const BinWord& s);

// k_s for s ending with 1: least k with x^k in [g(t_(g(s)))].
Nat densify_pick(DensifyState& st, const BinWord& s) {
  {
    std::lock_guard<std::mutex> lock(st.mu);
    auto it = st.picks.find(s.bits());
    if (it != st.picks.end()) return it->second;
  }
  const BinWord target = densify_word(st, s.flip_last()).flip_last();
  for (Nat k = 0; k < (Nat{1} << 22); ++k) {
    if (st.points(k).prefix(target.size()) == target) {
      std::lock_guard<std::mutex> lock(st.mu);
      st.picks[s.bits()] = k;
      return k;
    }
  }
  throw ResourceLimit("densify: no enumerated point in the cylinder " + target.str());
}

BinWord densify_word(DensifyState& st, const BinWord& s) {
  if (s.empty()) return s;
  {
    std::lock_guard<std::mutex> lock(st.mu);
    auto it = st.words.find(s.bits());
    if (it != st.words.end()) return it->second;
  }
  std::size_t last = s.size();
  for (std::size_t i = s.size(); i > 0; --i) {
    if (s[i - 1] == 1) {
      last = i;
      break;
    }
  }
  BinWord out;
  if (last == s.size() && s.is_zero()) {
    out = st.points(0).prefix(s.size());
  } else {
    out = st.points(densify_pick(st, s.prefix(last))).prefix(s.size());
  }
  std::lock_guard<std::mutex> lock(st.mu);
  st.words[s.bits()] = out;
  return out;
}

}  // namespace

SchemeHandle densify(const SchemeHandle& src, std::function<CantorPoint(Nat)> enumeration, std::string label,
                     std::size_t repeat_check) {
  std::set<std::string> seen;
  for (std::size_t k = 0; k < repeat_check; ++k) {
    if (!seen.insert(enumeration(k).literal()).second) {
      throw std::invalid_argument("densify: enumeration repeats at index " + std::to_string(k));
    }
  }
  auto st = std::make_shared<DensifyState>();
  st->src = src;
  st->points = std::move(enumeration);
  auto a = std::make_shared<IScheme>(*src);
  a->name = "densify(" + src->name + "," + label + ")";
  a->full = false;
  a->claimed_b = "Q(2^omega)";
  a->node = [st](const BinWord& s) { return st->src->node(densify_word(*st, s)); };
  a->source_word = [st](const BinWord& s) { return densify_word(*st, s); };
  a->cert_gen = nullptr;
  a->claims_in_b = [](const CantorPoint& x) { return x.is_periodic() && x.period().is_zero(); };
  a->kill_argument = "claimed from the re-indexing along the enumerated dense set; swept, not proved";
  a->locate = nullptr;
  if (src->leading) {
    a->leading = [st](const BinWord& s, std::size_t count) { return st->src->leading(densify_word(*st, s), count); };
  }
  a->history.push_back("densify: t_(0^n) = x^0|n, t_(s 0^n) = x^(k_s)|(|s|+n) with k_s least such that x^(k_s) "
                       "lies in [g(t_(g(s)))]; idempotence is not asserted");
  return a;
}

SchemeHandle subscheme(const SchemeHandle& src, const BinWord& w, std::string claimed_b) {
  auto a = std::make_shared<IScheme>(*src);
  a->name = src->name + "@" + w.str();
  a->claimed_b = std::move(claimed_b);
  a->node = [src, w](const BinWord& s) { return src->node(w.concat(s)); };
  if (src->cert_gen) {
    a->cert_gen = [src, w](const CantorPoint& x) -> std::optional<SchemeCertificate> {
      auto c = src->cert_gen(prepend(w, x));
      if (!c) return std::nullopt;
      const Nat shift = w.size();
      auto bound = c->bound;
      auto cutoff = c->cutoff;
      c->branch = x;
      c->bound = [bound, shift](Nat n) { return bound(n + shift); };
      c->cutoff = [cutoff, shift](Nat n) { return cutoff(n + shift); };
      return c;
    };
  }
  if (src->claims_in_b) {
    a->claims_in_b = [src, w](const CantorPoint& x) { return src->claims_in_b(prepend(w, x)); };
  }
  if (src->locate) {
    a->locate = [src, w](const Site& i) -> std::optional<CantorPoint> {
      auto y = src->locate(i);
      if (!y || !(y->prefix(w.size()) == w)) return std::nullopt;
      return drop_prefix(*y, w.size());
    };
  }
  if (src->leading) {
    a->leading = [src, w](const BinWord& s, std::size_t count) { return src->leading(w.concat(s), count); };
  }
  a->history.push_back("subscheme below " + w.str());
  return a;
}

BinWord baire_word(const BaireWord& t) {
  BinWord w;
  for (Nat k : t) w = w.concat(BinWord::zeros(k)).append(1);
  return w;
}

std::function<DescribedSet(const BaireWord&)> baire_tree_view(const SchemeHandle& a) {
  return [a](const BaireWord& t) { return a->node(baire_word(t)); };
}

std::vector<Site> leading_members(const IScheme& a, const BinWord& s, std::size_t count) {
  if (a.leading) return a.leading(s, count);
  return generic_leading(a, s, count);
}

// ---------------------------------------------------------------- checks

namespace {

ClauseVerdict from_tri_empty(Tri t) {
  switch (t) {
    case Tri::Yes: return ClauseVerdict::Pass;
    case Tri::No: return ClauseVerdict::Fail;
    case Tri::Unknown: break;
  }
  return ClauseVerdict::Inconclusive;
}

ClauseVerdict from_positive(Verdict v) {
  switch (v) {
    case Verdict::Positive: return ClauseVerdict::Pass;
    case Verdict::In: return ClauseVerdict::Fail;
    case Verdict::Unknown: break;
  }
  return ClauseVerdict::Inconclusive;
}

struct Tally {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t inconclusive = 0;
  Json first_bad = Json::array();

  void add(ClauseVerdict v, const BinWord& s) {
    switch (v) {
      case ClauseVerdict::Pass: ++pass; return;
      case ClauseVerdict::Fail: ++fail; break;
      case ClauseVerdict::Inconclusive: ++inconclusive; break;
    }
    if (first_bad.size() < 8) first_bad.push_back(s.str() + ":" + to_string(v));
  }
  ClauseVerdict verdict() const {
    if (fail > 0) return ClauseVerdict::Fail;
    return inconclusive > 0 ? ClauseVerdict::Inconclusive : ClauseVerdict::Pass;
  }
  Json json() const { return Json{{"pass", pass}, {"fail", fail}, {"inconclusive", inconclusive}, {"flagged", first_bad}}; }
};

}  // namespace

Report check_scheme(const IScheme& a, const IdealHandle& ideal, unsigned depth) {
  if (ideal->carrier() != a.carrier) throw CarrierMismatch("check_scheme: scheme and ideal live on different carriers");
  if (depth > 16) throw ResourceLimit("check_scheme: depth above 16");
  Report rep;
  rep.subject = "scheme " + a.name + " under " + ideal->name();
  rep.horizons["depth"] = depth;
  const Nat total = (Nat{1} << (depth + 1)) - 1;
  std::vector<DescribedSet> nodes;
  nodes.reserve(total);
  for (Nat i = 0; i < total; ++i) nodes.push_back(a.node(word_from_index(i)));
  Tally positive, disjoint, nested, covering;
  Json per = Json::array();
  for (Nat i = 0; i < total; ++i) {
    const BinWord s = word_from_index(i);
    Json row;
    row["s"] = s.str();
    const ClauseVerdict pv = from_positive(ideal->decide(nodes[i]).verdict);
    positive.add(pv, s);
    row["positive"] = to_string(pv);
    if (s.size() < depth) {
      const DescribedSet& c0 = nodes[2 * i + 1];
      const DescribedSet& c1 = nodes[2 * i + 2];
      const DescribedSet both = combine(SetOp::Union, c0, c1);
      const ClauseVerdict dv = from_tri_empty(is_empty(combine(SetOp::Intersection, c0, c1)));
      const ClauseVerdict nv = from_tri_empty(is_empty(combine(SetOp::Difference, both, nodes[i])));
      disjoint.add(dv, s);
      nested.add(nv, s);
      row["disjoint"] = to_string(dv);
      row["nested"] = to_string(nv);
      if (a.full) {
        const ClauseVerdict fv = from_tri_empty(is_empty(combine(SetOp::Difference, nodes[i], both)));
        covering.add(fv, s);
        row["covering"] = to_string(fv);
      }
    }
    per.push_back(std::move(row));
  }
  rep.add("positivity", positive.verdict(), positive.json());
  rep.add("disjointness", disjoint.verdict(), disjoint.json());
  rep.add("nesting", nested.verdict(), nested.json());
  if (a.full) rep.add("covering", covering.verdict(), covering.json());
  rep.notes["nodes"] = std::move(per);
  rep.notes["full"] = a.full;
  rep.notes["claimed_b"] = a.claimed_b;
  if (!a.history.empty()) rep.notes["history"] = a.history;
  return rep;
}

Report replay_certificate(const IScheme& a, const IdealHandle& ideal, const SchemeCertificate& cert, Nat depth,
                          Nat horizon) {
  Report rep;
  rep.subject = "certificate for " + cert.branch.literal() + " in " + a.name;
  rep.horizons["depth"] = depth;
  rep.horizons["index"] = horizon;
  const Decision d = ideal->decide(cert.set);
  rep.add("positive", from_positive(d.verdict), Json{{"set", cert.set.term()}, {"trace", d.trace}});
  for (Nat n = 0; n <= depth; ++n) {
    const DescribedSet extra = combine(SetOp::Difference, cert.set, a.node(cert.branch.prefix(n)));
    const Nat bound = cert.bound(n);
    const Nat cut = cert.cutoff(n);
    const Finiteness fin = is_finite(extra);
    Json ev{{"n", n}, {"bound", bound}, {"cutoff", cut}};
    if (fin == Finiteness::Infinite) {
      ev["mode"] = "algebra";
      rep.fail("level " + std::to_string(n), ev);
      continue;
    }
    ev["mode"] = fin == Finiteness::Finite ? "algebra+scan" : "law+scan";
    std::vector<Site> members;
    if (a.carrier == Carrier::Omega) {
      for (Nat v : elements_upto(extra, horizon)) members.push_back(Site{v, 0});
    } else {
      for (const auto& [c, r] : pairs_upto(extra, horizon)) members.push_back(Site{c, r});
    }
    bool ok = members.size() <= bound;
    Json above = Json::array();
    for (const auto& m : members) {
      if (site_size(a.carrier, m) >= cut) {
        ok = false;
        if (above.size() < 4) above.push_back(site_json(a.carrier, m));
      }
    }
    ev["count"] = members.size();
    if (!above.empty()) ev["above_cutoff"] = above;
    rep.check("level " + std::to_string(n), ok, ev);
  }
  rep.notes["law"] = cert.law;
  return rep;
}

Json certificate_json(const SchemeCertificate& cert, Nat depth) {
  Json bounds = Json::array();
  for (Nat n = 0; n <= depth; ++n) bounds.push_back(Json{{"n", n}, {"bound", cert.bound(n)}, {"cutoff", cert.cutoff(n)}});
  return Json{{"branch", cert.branch.literal()}, {"set", cert.set.term()}, {"law", cert.law}, {"levels", bounds}};
}

const char* to_string(ProbeOutcome o) {
  switch (o) {
    case ProbeOutcome::NotInB: return "NotInB";
    case ProbeOutcome::InB: return "InB";
    case ProbeOutcome::Unknown: return "Unknown";
  }
  return "Unknown";
}

ProbeResult b_membership_probe(const IScheme& a, const IdealHandle& ideal, const CantorPoint& x,
                               const ProbeParams& params) {
  ProbeResult res;
  res.report.subject = "B-probe of " + x.literal() + " in " + a.name + " under " + ideal->name();
  res.report.horizons["depth"] = params.depth;
  res.report.horizons["kill_depth"] = params.kill_depth;
  res.report.horizons["sweep"] = params.sweep;
  res.report.horizons["index"] = params.horizon;
  if (a.cert_gen) {
    if (auto cert = a.cert_gen(x)) {
      Report replay = replay_certificate(a, ideal, *cert, params.depth, params.horizon);
      res.report.absorb(replay, "certificate ");
      res.report.notes["route"] = "certificate";
      res.report.notes["certificate"] = certificate_json(*cert, params.depth);
      res.outcome = replay.verdict() == ClauseVerdict::Pass ? ProbeOutcome::NotInB : ProbeOutcome::Unknown;
      return res;
    }
  }
  if (a.claims_in_b && a.claims_in_b(x)) {
    res.report.notes["route"] = "kill-sweep";
    res.report.notes["argument"] = a.kill_argument;
    auto candidates = positive_candidates(ideal, params.sweep, params.seed);
    const bool enough = candidates.size() == params.sweep;
    // Adversarial additions: the nodes along the branch itself, each almost inside all shallower nodes.
    const Nat along = std::min<Nat>(params.kill_depth, 12);
    for (Nat k = 1; k <= along; ++k) candidates.push_back(a.node(x.prefix(k)));
    std::size_t refuted = 0;
    Json survivors = Json::array();
    Json levels = Json::array();
    for (const auto& c : candidates) {
      std::optional<Nat> hit;
      try {
        for (Nat n = 0; n <= params.kill_depth && !hit; ++n) {
          if (is_finite(combine(SetOp::Difference, c, a.node(x.prefix(n)))) == Finiteness::Infinite) hit = n;
        }
      } catch (const ResourceLimit&) {
        // levels past the node representation limit count as unrefuted
      }
      if (hit) {
        ++refuted;
        levels.push_back(*hit);
      } else if (survivors.size() < 8) {
        survivors.push_back(c.term());
      }
    }
    res.report.check("candidate family size", enough,
                     Json{{"generated", candidates.size() - along}, {"requested", params.sweep}, {"branch_nodes", along}});
    res.report.add("kill sweep", refuted == candidates.size() ? ClauseVerdict::Pass : ClauseVerdict::Inconclusive,
                   Json{{"candidates", candidates.size()}, {"refuted", refuted}, {"levels", levels}, {"survivors", survivors}});
    res.outcome = res.report.verdict() == ClauseVerdict::Pass ? ProbeOutcome::InB : ProbeOutcome::Unknown;
    return res;
  }
  res.report.notes["route"] = "none";
  res.report.add("route", ClauseVerdict::Inconclusive, Json{{"reason", "no certificate and no kill argument applies"}});
  return res;
}

SchemeHandle scheme_by_name(const std::string& name) {
  if (name == "fin-full") return fin_full_scheme();
  if (name == "etf") return empty_times_fin_scheme();
  if (name == "fin2-anchored") return fin2_anchored_scheme();
  if (name == "z-tail") return z_tail_scheme();
  throw std::invalid_argument("unknown scheme: " + name);
}

}  // namespace idealpts

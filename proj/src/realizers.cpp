#include "idealpts/realizers.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace idealpts {

const char* to_string(TargetKind k) {
  switch (k) {
    case TargetKind::FiniteSet: return "FiniteSet";
    case TargetKind::Closed: return "Closed";
    case TargetKind::FSigma: return "FSigma";
    case TargetKind::FSigmaDelta: return "FSigmaDelta";
    case TargetKind::Analytic: return "Analytic";
    case TargetKind::Cluster: return "Cluster";
    case TargetKind::EmptyLambda: return "EmptyLambda";
    case TargetKind::GammaNotLambda: return "GammaNotLambda";
  }
  return "Closed";
}

const char* to_string(VerificationLevel v) {
  switch (v) {
    case VerificationLevel::TwoSided: return "TwoSided";
    case VerificationLevel::RangeSided: return "RangeSided";
    case VerificationLevel::OneSided: return "OneSided";
  }
  return "OneSided";
}

std::vector<Site> first_sites(Carrier c, std::size_t count) {
  std::vector<Site> out;
  out.reserve(count);
  if (c == Carrier::Omega) {
    for (Nat i = 0; i < count; ++i) out.push_back(Site{i, 0});
    return out;
  }
  for (Nat h = 0; out.size() < count; ++h) {
    for (Nat col = 0; col < h && out.size() < count; ++col) out.push_back(Site{col, h});
    for (Nat row = 0; row <= h && out.size() < count; ++row) out.push_back(Site{h, row});
  }
  return out;
}

namespace {

constexpr Nat kLazyBits = 4096;
const Site kFarSite{kNatMax, kNatMax};

Nat sat_add(Nat a, Nat b) { return a > kNatMax - b ? kNatMax : a + b; }

// Position just after the last one of an eventually zero point (0 for 0^inf).
Nat last_one_end(const CantorPoint& x) {
  const BinWord& h = x.head();
  for (std::size_t i = h.size(); i > 0; --i) {
    if (h[i - 1] == 1) return i;
  }
  return 0;
}

// Gap lengths (t_0, .., t_k) of a word 0^t0 1 .. 0^tk 1 0^n.
BaireWord gaps_of(const BinWord& w) {
  BaireWord t;
  Nat run = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 1) {
      t.push_back(run);
      run = 0;
    } else {
      ++run;
    }
  }
  return t;
}

BaireWord baire_prefix(const std::function<Nat(Nat)>& y, Nat n) {
  BaireWord t;
  for (Nat j = 0; j < n; ++j) t.push_back(y(j));
  return t;
}

// The point 0^y0 1 0^y1 1 ...
CantorPoint gap_point(std::function<Nat(Nat)> y, std::string label) {
  struct State {
    std::function<Nat(Nat)> y;
    std::mutex mu;
    std::vector<Nat> ones;
  };
  auto st = std::make_shared<State>();
  st->y = std::move(y);
  return CantorPoint::lazy(
      [st](Nat i) -> std::uint8_t {
        std::lock_guard<std::mutex> lock(st->mu);
        while (st->ones.empty() || st->ones.back() < i) {
          const Nat start = st->ones.empty() ? 0 : st->ones.back() + 1;
          st->ones.push_back(sat_add(start, st->y(st->ones.size())));
        }
        return std::binary_search(st->ones.begin(), st->ones.end(), i) ? 1 : 0;
      },
      kLazyBits, std::move(label));
}

Nat threshold_from(Nat cut, Nat fmax) {
  if (cut == kNatMax || fmax == kNatMax) return kNatMax;
  return std::max(cut, fmax + 1);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// ---------------------------------------------------------------- Baire-tree minima

struct BaireMins {
  SchemeHandle a;
  std::mutex mu;
  std::map<BaireWord, Site> memo;

  // m_t = min(B_t minus m_(t|k), k < |t|), or kFarSite when out of reach.
  Site at(const BaireWord& t) {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(t);
      if (it != memo.end()) return it->second;
    }
    std::vector<Site> excluded;
    for (std::size_t k = 0; k < t.size(); ++k) excluded.push_back(at(BaireWord(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(k))));
    Site pick = kFarSite;
    try {
      for (const Site& s : leading_members(*a, baire_word(t), t.size() + 1)) {
        if (std::find(excluded.begin(), excluded.end(), s) == excluded.end()) {
          pick = s;
          break;
        }
      }
    } catch (const ResourceLimit&) {
      pick = kFarSite;
    }
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(t, pick);
    return pick;
  }
};

// ---------------------------------------------------------------- binary-tree picks

struct TreePicks {
  SchemeHandle a;
  std::mutex mu;
  std::map<std::vector<std::uint8_t>, Site> memo;

  // i_s = min(A_s minus i_(s|k), k < |s|), or kFarSite when out of reach.
  Site pick(const BinWord& s) {
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(s.bits());
      if (it != memo.end()) return it->second;
    }
    std::vector<Site> excluded;
    for (std::size_t k = 0; k < s.size(); ++k) excluded.push_back(pick(s.prefix(k)));
    Site chosen = kFarSite;
    try {
      for (const Site& c : leading_members(*a, s, s.size() + 1)) {
        if (std::find(excluded.begin(), excluded.end(), c) == excluded.end()) {
          chosen = c;
          break;
        }
      }
    } catch (const ResourceLimit&) {
      chosen = kFarSite;
    }
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(s.bits(), chosen);
    return chosen;
  }

  // Largest pick size over the strict prefixes of s.
  Nat prefix_pick_max(const BinWord& s) {
    Nat m = 0;
    for (std::size_t k = 0; k < s.size(); ++k) m = std::max(m, site_size(a->carrier, pick(s.prefix(k))));
    return m;
  }

  // Word s whose pick value the site inherits; nullopt off node(empty).
  // Past the last one of its branch every pick inherits the value of the last 1-ending prefix.
  std::optional<BinWord> owner(const Site& site) {
    if (!site_in(a->carrier, a->node(BinWord{}), site)) return std::nullopt;
    std::optional<CantorPoint> x;
    if (a->locate) x = a->locate(site);
    if (x) {
      if (x->eventually_zero()) {
        const Nat end = last_one_end(*x);
        for (Nat n = 0; n <= end; ++n) {
          if (pick(x->prefix(n)) == site) return x->prefix(n);
        }
        return x->prefix(end);
      }
      for (Nat n = 0; n < kLazyBits; ++n) {
        if (pick(x->prefix(n)) == site) return x->prefix(n);
      }
      throw ResourceLimit("tree assignment: site not picked within 4096 levels");
    }
    BinWord u;
    for (std::size_t depth = 0;; ++depth) {
      if (depth >= 64) throw ResourceLimit("tree assignment: leftover node deeper than 64");
      if (site_in(a->carrier, a->node(u.append(0)), site)) {
        u = u.append(0);
      } else if (site_in(a->carrier, a->node(u.append(1)), site)) {
        u = u.append(1);
      } else {
        break;
      }
    }
    for (std::size_t n = 0; n <= u.size(); ++n) {
      if (pick(u.prefix(n)) == site) return u.prefix(n);
    }
    return u;
  }
};

SchemeCertificate must_certify(const IScheme& a, const CantorPoint& x) {
  if (!a.cert_gen) throw std::invalid_argument("scheme " + a.name + " has no certificate generator");
  auto c = a.cert_gen(x);
  if (!c) throw std::invalid_argument("scheme " + a.name + " gives no certificate for " + x.literal());
  return *c;
}

std::function<Report(Nat, Nat)> replay_of(SchemeHandle a, IdealHandle ideal, SchemeCertificate cert) {
  return [a, ideal, cert](Nat depth, Nat horizon) { return replay_certificate(*a, ideal, cert, depth, horizon); };
}

}  // namespace

// ---------------------------------------------------------------- finite

RealizationHandle realize_finite(std::vector<CantorPoint> points, std::vector<DescribedSet> parts,
                                 const IdealHandle& ideal) {
  require(!points.empty() && points.size() == parts.size(), "realize_finite: need one part per point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      require(!(points[i] == points[j]), "realize_finite: points must be distinct");
      require(is_empty(combine(SetOp::Intersection, parts[i], parts[j])) == Tri::Yes,
              "realize_finite: parts " + std::to_string(i) + " and " + std::to_string(j) + " are not provably disjoint");
    }
    const Verdict v = ideal->decide(parts[i]).verdict;
    if (v == Verdict::Unknown) throw std::invalid_argument("realize_finite: positivity of part " + std::to_string(i) + " is unknown");
    require(v == Verdict::Positive, "realize_finite: part " + std::to_string(i) + " is in the ideal");
  }
  DescribedSet cover = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) cover = combine(SetOp::Union, cover, parts[i]);
  require(is_empty(complement(cover)) == Tri::Yes, "realize_finite: parts do not provably cover the carrier");

  auto r = std::make_shared<Realization>();
  r->name = "finite(" + std::to_string(points.size()) + ")";
  r->kind = TargetKind::FiniteSet;
  r->carrier = ideal->carrier();
  r->ideal = ideal;
  r->level = VerificationLevel::TwoSided;
  const Carrier carrier = r->carrier;
  r->at = [points, parts, carrier](const Site& i) {
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (site_in(carrier, parts[j], i)) return points[j];
    }
    throw std::logic_error("realize_finite: site outside every part");
  };
  r->cert_for = [points, parts](const Target& t) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (points[j] == t.point) {
        return LimitCertificate{points[j], parts[j], [](Nat) { return Nat{0}; }, Report{}, nullptr,
                                "the whole part carries the point"};
      }
    }
    throw std::invalid_argument("realize_finite: target is not one of the points");
  };
  r->range = [points](const CantorPoint& v) {
    return std::find(points.begin(), points.end(), v) != points.end() ? Membership::In : Membership::Out;
  };
  r->provenance.push_back("constant on each part of a finite positive partition");
  return r;
}

// ---------------------------------------------------------------- closed

RealizationHandle realize_closed(const SchemeHandle& a, const ClosedCode& t, const IdealHandle& ideal) {
  require(a->full, "realize_closed: scheme must be full");
  require(a->claimed_b == "empty", "realize_closed: scheme must claim B = empty");
  require(static_cast<bool>(a->locate), "realize_closed: scheme needs a site locator");
  require(ideal->carrier() == a->carrier, "realize_closed: carrier of the ideal differs from the scheme");
  require(t.admits(BinWord{}), "realize_closed: the closed set is empty");
  auto mins = std::make_shared<BaireMins>();
  mins->a = a;

  auto r = std::make_shared<Realization>();
  r->name = "closed(" + a->name + "," + t.name() + ")";
  r->kind = TargetKind::Closed;
  r->carrier = a->carrier;
  r->ideal = ideal;
  r->level = VerificationLevel::TwoSided;
  r->at = [a, t, mins](const Site& i) {
    auto x = a->locate(i);
    if (!x) throw std::out_of_range("realize_closed: site outside the scheme");
    if (x->eventually_zero()) {
      const BaireWord tw = gaps_of(x->prefix(last_one_end(*x)));
      for (std::size_t k = 0; k <= tw.size(); ++k) {
        const BaireWord pre(tw.begin(), tw.begin() + static_cast<std::ptrdiff_t>(k));
        if (mins->at(pre) == i) return surject_finite(t, pre);
      }
      return surject_finite(t, tw);  // leftover of t
    }
    BaireWord pre;
    Nat run = 0;
    for (Nat n = 0; n < kLazyBits; ++n) {
      if (mins->at(pre) == i) return surject_finite(t, pre);
      while (x->bit(n) == 0) {
        ++run;
        ++n;
      }
      pre.push_back(run);
      run = 0;
    }
    throw ResourceLimit("realize_closed: site not selected within 4096 bits of its branch");
  };
  r->range = [t](const CantorPoint& v) { return closed_membership(t, v, 12); };
  r->cert_for = [a, t, ideal, mins](const Target& target) {
    const CantorPoint eta = target.point;
    if (closed_membership(t, eta, 64) == Membership::Out) throw std::invalid_argument("realize_closed: branch not in [T]");
    std::function<Nat(Nat)> y = [t, eta](Nat j) -> Nat {
      return t.admitted_children(eta.prefix(j)).size() == 2 ? eta.bit(j) : 0;
    };
    const CantorPoint x = gap_point(y, "pullback(" + eta.literal() + ")");
    const SchemeCertificate cert = must_certify(*a, x);
    LimitCertificate lc;
    lc.point = eta;
    lc.set = cert.set;
    lc.law = "values on B_(y|m) outside the first m minima extend surject(y|m)";
    lc.threshold = [y, cert, mins, a](Nat m) {
      Nat k = 0;
      Nat fmax = 0;
      for (Nat j = 0; j < m; ++j) {
        fmax = std::max(fmax, site_size(a->carrier, mins->at(baire_prefix(y, j))));
        k = sat_add(k, y(j) + 1);
      }
      return threshold_from(cert.cutoff(k), fmax);
    };
    Json rows = Json::array();
    bool ok = true;
    for (Nat m = 0; m <= 12; ++m) {
      const bool match = surject_prefix(t, baire_prefix(y, m)) == eta.prefix(m);
      ok = ok && match;
      rows.push_back(Json{{"m", m}, {"match", match}});
    }
    lc.structure.check("surjection prefix agrees with the target", ok, rows);
    lc.replay = replay_of(a, ideal, cert);
    return lc;
  };
  r->provenance.push_back("minimum selection over the Baire-tree view; leftover of t gets f(t 0^inf)");
  r->provenance.push_back("certificate: scheme certificate along the pulled-back branch");
  return r;
}

// ---------------------------------------------------------------- cluster

RealizationHandle realize_cluster_closed(std::shared_ptr<const IndexedFamily> parts,
                                         std::function<CantorPoint(Nat)> dense, const ClosedCode& t,
                                         const IdealHandle& ideal, Nat scan) {
  const Carrier carrier = parts->planar ? Carrier::Plane : Carrier::Omega;
  require(ideal->carrier() == carrier, "realize_cluster_closed: carrier of the parts differs from the ideal");
  for (Nat i = 0; i < 8; ++i) {
    const Verdict v = ideal->decide(parts->part(i)).verdict;
    require(v == Verdict::Positive, "realize_cluster_closed: part " + std::to_string(i) + " is not decided positive");
    for (Nat j = i + 1; j < 8; ++j) {
      require(is_empty(combine(SetOp::Intersection, parts->part(i), parts->part(j))) == Tri::Yes,
              "realize_cluster_closed: parts are not provably disjoint");
    }
  }
  auto r = std::make_shared<Realization>();
  r->name = "cluster(" + parts->name + "," + t.name() + ")";
  r->kind = TargetKind::Cluster;
  r->carrier = carrier;
  r->ideal = ideal;
  r->level = VerificationLevel::TwoSided;
  r->at = [parts, dense, carrier](const Site& i) {
    std::optional<Nat> n;
    if (carrier == Carrier::Omega && parts->locate) n = parts->locate(i.a);
    if (carrier == Carrier::Plane && parts->locate_pair) n = parts->locate_pair(i.a, i.b);
    return dense(n.value_or(0));
  };
  r->range = [t](const CantorPoint& v) { return closed_membership(t, v, 12); };
  r->cluster_for = [parts, dense, scan](const CantorPoint& eta, Nat m) -> std::optional<ClusterCertificate> {
    const BinWord cell = eta.prefix(m);
    std::vector<Nat> hits;
    for (Nat n = 0; n < scan && hits.size() < 64; ++n) {
      if (dense(n).prefix(m) == cell) hits.push_back(n);
    }
    if (hits.empty()) return std::nullopt;
    return ClusterCertificate{eta, m, DescribedSet::indexed_union(parts, DescribedSet::finite(hits))};
  };
  r->provenance.push_back("value dense(n) on part n; neighbourhood certificates are unions of parts");
  return r;
}

// ---------------------------------------------------------------- F_sigma

RealizationHandle realize_fsigma(const SchemeHandle& a, std::vector<ClosedCode> targets, const IdealHandle& ideal,
                                 std::optional<CantorPoint> eta0) {
  require(a->claimed_b == "{0^inf}", "realize_fsigma: scheme must claim B = {0^inf}");
  require(!targets.empty(), "realize_fsigma: no closed pieces");
  require(static_cast<bool>(a->locate), "realize_fsigma: scheme needs a site locator");
  for (const auto& t : targets) require(t.admits(BinWord{}), "realize_fsigma: empty closed piece " + t.name());
  const CantorPoint filler = eta0.value_or(targets[0].leftmost_completion(BinWord{}));
  require(closed_membership(targets[0], filler, 64) != Membership::Out, "realize_fsigma: eta0 must lie in the first piece");

  struct Subs {
    std::mutex mu;
    std::map<Nat, RealizationHandle> memo;
  };
  auto subs = std::make_shared<Subs>();
  auto sub = [a, targets, ideal, subs](Nat n) {
    {
      std::lock_guard<std::mutex> lock(subs->mu);
      auto it = subs->memo.find(n);
      if (it != subs->memo.end()) return it->second;
    }
    auto s = subscheme(a, BinWord::zeros(n).append(1), "empty");
    auto rn = realize_closed(s, targets[n % targets.size()], ideal);
    std::lock_guard<std::mutex> lock(subs->mu);
    return subs->memo.emplace(n, rn).first->second;
  };

  auto r = std::make_shared<Realization>();
  r->name = "fsigma(" + a->name + "," + std::to_string(targets.size()) + " pieces)";
  r->kind = TargetKind::FSigma;
  r->carrier = a->carrier;
  r->ideal = ideal;
  r->level = VerificationLevel::RangeSided;
  r->at = [a, sub, filler](const Site& i) {
    auto x = a->locate(i);
    if (!x) return filler;
    const Nat limit = x->is_periodic() ? x->head().size() + x->period().size() : kLazyBits;
    for (Nat n = 0; n < limit; ++n) {
      if (x->bit(n)) return sub(n)->at(i);
    }
    return filler;
  };
  r->range = [targets, filler](const CantorPoint& v) {
    if (v == filler) return Membership::In;
    bool unknown = false;
    for (const auto& t : targets) {
      const Membership m = closed_membership(t, v, 12);
      if (m == Membership::In) return Membership::In;
      unknown = unknown || m == Membership::Unknown;
    }
    return unknown ? Membership::Unknown : Membership::Out;
  };
  r->cert_for = [targets, sub](const Target& target) {
    std::optional<std::size_t> n = target.component;
    for (std::size_t k = 0; !n && k < targets.size(); ++k) {
      if (closed_membership(targets[k], target.point, 64) != Membership::Out) n = k;
    }
    if (!n) throw std::invalid_argument("realize_fsigma: target lies in no closed piece");
    LimitCertificate lc = sub(*n)->cert_for(target);
    lc.law = "piece " + std::to_string(*n) + " below 0^" + std::to_string(*n) + " 1: " + lc.law;
    return lc;
  };
  r->provenance.push_back("piece n realized as a closed set on the subscheme below 0^n 1; filler eta0 elsewhere");
  return r;
}

// ---------------------------------------------------------------- F_sigma-delta

RealizationHandle realize_fsigmadelta(const SchemeHandle& a, SigmaDeltaCode code, const IdealHandle& ideal,
                                      std::optional<CantorPoint> p0) {
  require(a->claimed_b == "Q(2^omega)", "realize_fsigmadelta: scheme must claim B = Q(2^omega)");
  require(code.cylinder_cells && static_cast<bool>(code.leftmost_in),
          "realize_fsigmadelta: code must have cylinder cells and a leftmost-point oracle");
  auto first = code.leftmost_in(BinWord{});
  require(first.has_value(), "realize_fsigmadelta: target is empty");
  const CantorPoint base = p0.value_or(*first);
  if (code.contains) require(code.contains(base) != Membership::Out, "realize_fsigmadelta: p0 not in the target");

  struct State {
    LimsupStream stream;
    std::mutex mu;
    std::map<std::vector<std::uint8_t>, std::optional<CantorPoint>> r;
    explicit State(SigmaDeltaCode c) : stream(std::move(c)) {}
  };
  auto st = std::make_shared<State>(code);
  auto picks = std::make_shared<TreePicks>();
  picks->a = a;

  // r_s: leftmost point of the target inside the meet of the cylinders C_k with s_k = 1.
  auto r_of = [st](const BinWord& s) -> std::optional<CantorPoint> {
    {
      std::lock_guard<std::mutex> lock(st->mu);
      auto it = st->r.find(s.bits());
      if (it != st->r.end()) return it->second;
    }
    BinWord longest;
    bool compatible = true;
    for (std::size_t k = 0; k < s.size() && compatible; ++k) {
      if (s[k] != 1) continue;
      const BinWord w = st->stream.at(k).cylinder;
      if (w.size() <= longest.size()) {
        compatible = w.is_prefix_of(longest);
      } else {
        compatible = longest.is_prefix_of(w);
        longest = w;
      }
    }
    std::optional<CantorPoint> out;
    if (compatible) out = st->stream.code().leftmost_in(longest);
    std::lock_guard<std::mutex> lock(st->mu);
    st->r.emplace(s.bits(), out);
    return out;
  };
  auto value = [r_of, base](const BinWord& s) {
    for (std::size_t len = s.size(); len > 0; --len) {
      if (s[len - 1] != 1) continue;
      if (auto v = r_of(s.prefix(len))) return *v;
    }
    return base;
  };

  auto r = std::make_shared<Realization>();
  r->name = "fsigmadelta(" + a->name + "," + code.name + ")";
  r->kind = TargetKind::FSigmaDelta;
  r->carrier = a->carrier;
  r->ideal = ideal;
  r->level = VerificationLevel::RangeSided;
  r->at = [picks, value, base](const Site& i) {
    auto s = picks->owner(i);
    return s ? value(*s) : base;
  };
  if (code.contains) r->range = code.contains;
  r->cert_for = [a, ideal, st, picks](const Target& target) {
    const CantorPoint p = target.point;
    const auto& code = st->stream.code();
    if (code.contains && code.contains(p) == Membership::Out) throw std::invalid_argument("realize_fsigmadelta: target point not in P");
    auto stream = std::make_shared<LimsupStream>(st->stream);
    const CantorPoint x = CantorPoint::lazy(
        [stream, p](Nat k) -> std::uint8_t {
          const BinWord& w = stream->at(k).cylinder;
          return p.prefix(w.size()) == w ? 1 : 0;
        },
        Nat{1} << 22, "cells(" + p.literal() + ")");
    const SchemeCertificate cert = must_certify(*a, x);
    // Stream index of the first cell containing p on a level >= m - 1; its cylinder has length >= m.
    auto cell_index = [stream, p](Nat m) -> std::optional<Nat> {
      for (Nat lvl = m - 1; lvl <= 20; ++lvl) {
        const auto& cells = stream->level(lvl);
        for (std::size_t j = 0; j < cells.size(); ++j) {
          if (p.prefix(lvl + 1) == cells[j].cylinder) return stream->level_offset(lvl) + j;
        }
      }
      return std::nullopt;
    };
    LimitCertificate lc;
    lc.point = p;
    lc.set = cert.set;
    lc.law = "values on A_(x|n+1) outside the first n+1 picks lie in the cell C_n, a cylinder of length >= m";
    lc.threshold = [cert, picks, cell_index, x](Nat m) -> Nat {
      if (m == 0) return 0;
      auto n = cell_index(m);
      if (!n) return kNatMax;
      const Nat cut = cert.cutoff(*n + 1);
      if (cut == kNatMax || *n + 1 >= 60) return kNatMax;
      return threshold_from(cut, picks->prefix_pick_max(x.prefix(*n + 1)));
    };
    Json rows = Json::array();
    bool ok = true;
    for (Nat m = 1; m <= 12; ++m) {
      auto n = cell_index(m);
      const bool found = n.has_value() && x.bit(*n) == 1;
      ok = ok && found;
      rows.push_back(Json{{"m", m},
                          {"cell", n ? Json(*n) : Json(nullptr)},
                          {"cylinder_length", n ? Json(stream->at(*n).cylinder.size()) : Json(nullptr)},
                          {"contains_point", found}});
    }
    lc.structure.check("resolution cells: a cylinder of length >= m containing the point is marked in x", ok, rows);
    lc.replay = replay_of(a, ideal, cert);
    return lc;
  };
  r->provenance.push_back("picks i_s by shell-order minimum; values r_s on 1-ending nodes, inherited otherwise");
  r->provenance.push_back("r_s is the leftmost target point in the meet of the marked cylinder cells");
  return r;
}

// ---------------------------------------------------------------- analytic

RealizationHandle realize_analytic(const SchemeHandle& a, SouslinCode code, const IdealHandle& ideal,
                                   std::optional<CantorPoint> pstar) {
  require(a->claimed_b == "Q(2^omega)", "realize_analytic: scheme must claim B = Q(2^omega)");
  require(static_cast<bool>(code.cell_cylinder) && static_cast<bool>(code.limit),
          "realize_analytic: code must give cylinder cells and limit points");
  std::string failure;
  if (!check_souslin(code, 4, 4, &failure)) throw std::invalid_argument("realize_analytic: " + failure);
  const CantorPoint star = pstar.value_or(code.limit(BaireWord{}));
  auto picks = std::make_shared<TreePicks>();
  picks->a = a;
  auto value = [code](const BinWord& s) {
    for (std::size_t len = s.size(); len > 0; --len) {
      if (s[len - 1] == 1) return code.limit(gaps_of(s.prefix(len)));
    }
    return code.limit(BaireWord{});
  };

  auto r = std::make_shared<Realization>();
  r->name = "analytic(" + a->name + "," + code.name + ")";
  r->kind = TargetKind::Analytic;
  r->carrier = a->carrier;
  r->ideal = ideal;
  r->level = VerificationLevel::OneSided;
  r->at = [picks, value, star](const Site& i) {
    auto s = picks->owner(i);
    return s ? value(*s) : star;
  };
  r->cert_for = [a, ideal, code, picks](const Target& target) {
    if (!target.baire) throw std::invalid_argument("realize_analytic: target needs a Baire code y");
    const auto y = target.baire;
    auto cyl = [code, y](Nat k) { return code.cell_cylinder(baire_prefix(y, k)); };
    const CantorPoint p = CantorPoint::lazy(
        [cyl](Nat i) -> std::uint8_t {
          for (Nat k = 0; k <= i + 1; ++k) {
            const BinWord w = cyl(k);
            if (w.size() > i) return w[i];
          }
          throw InsufficientDefinedness("analytic target: cells do not shrink");
        },
        kLazyBits, target.label.empty() ? "p_y" : target.label);
    const CantorPoint t = gap_point(y, "gaps(" + (target.label.empty() ? "y" : target.label) + ")");
    const SchemeCertificate cert = must_certify(*a, t);
    // Least k with the cell of y|k a cylinder of length >= m.
    auto depth_for = [cyl](Nat m) -> std::optional<Nat> {
      for (Nat k = 0; k <= 64; ++k) {
        if (cyl(k).size() >= m) return k;
      }
      return std::nullopt;
    };
    LimitCertificate lc;
    lc.point = p;
    lc.set = cert.set;
    lc.law = "values on A_s, s = gaps(y|k), outside the first |s| picks lie in the cell P_(y|k)";
    lc.threshold = [cert, picks, depth_for, y](Nat m) -> Nat {
      auto k = depth_for(m);
      if (!k) return kNatMax;
      const BinWord s = baire_word(baire_prefix(y, *k));
      if (s.size() >= 60) return kNatMax;
      return threshold_from(cert.cutoff(s.size()), picks->prefix_pick_max(s));
    };
    Json rows = Json::array();
    bool ok = true;
    for (Nat m = 1; m <= 12; ++m) {
      auto k = depth_for(m);
      const bool good = k.has_value() && cyl(*k).is_prefix_of(p.prefix(cyl(*k).size()));
      ok = ok && good;
      rows.push_back(Json{{"m", m}, {"k", k ? Json(*k) : Json(nullptr)}, {"cell_contains_point", good}});
    }
    lc.structure.check("cells along y shrink below 2^-m around p_y", ok, rows);
    std::string failure;
    lc.structure.check("Souslin code monotone with shrinking cells (depth 4, width 4)", check_souslin(code, 4, 4, &failure),
                       Json{{"failure", failure}});
    lc.replay = replay_of(a, ideal, cert);
    return lc;
  };
  r->provenance.push_back("picks i_s as for the F_sigma-delta realizer; values p_(phi(s) 0^inf) on 1-ending nodes");
  r->provenance.push_back("only the target-inside-limit-points direction is certified");
  return r;
}

// ---------------------------------------------------------------- empty Lambda

EvidencedRealization empty_limit_sequence(const IdealHandle& ideal, std::function<DescribedSet(Nat)> chain,
                                          std::function<CantorPoint(Nat)> y, const CantorPoint& eta,
                                          const SweepParams& params) {
  constexpr Nat kChainChecks = 12;
  for (Nat n = 0; n < kChainChecks; ++n) {
    const DescribedSet an = chain(n);
    const DescribedSet next = chain(n + 1);
    require(is_empty(combine(SetOp::Difference, next, an)) == Tri::Yes, "empty_limit_sequence: chain is not decreasing at " + std::to_string(n));
    require(ideal->decide(combine(SetOp::Difference, an, next)).verdict == Verdict::In,
            "empty_limit_sequence: step " + std::to_string(n) + " is not in the ideal");
    require(ideal->decide(an).verdict == Verdict::Positive, "empty_limit_sequence: link " + std::to_string(n) + " is not positive");
  }
  const Carrier carrier = ideal->carrier();
  auto r = std::make_shared<Realization>();
  r->name = "empty-lambda(" + ideal->name() + ")";
  r->kind = TargetKind::EmptyLambda;
  r->carrier = carrier;
  r->ideal = ideal;
  r->level = VerificationLevel::OneSided;
  r->at = [chain, y, eta, carrier](const Site& i) {
    for (Nat n = 0; n < kLazyBits; ++n) {
      if (!site_in(carrier, chain(n + 1), i)) return y(n);
    }
    return eta;
  };
  r->cluster_for = [chain, y, eta](const CantorPoint& p, Nat m) -> std::optional<ClusterCertificate> {
    if (!(p.prefix(m) == eta.prefix(m))) return std::nullopt;
    for (Nat n = 0; n < 64; ++n) {
      bool tail_close = true;
      for (Nat k = n; k < n + 64 && tail_close; ++k) tail_close = y(k).prefix(m) == eta.prefix(m);
      if (tail_close) return ClusterCertificate{p, m, chain(n)};
    }
    return std::nullopt;
  };
  r->provenance.push_back("x_i = y_n on A_n minus A_(n+1); eta on the intersection");

  Report rep;
  rep.subject = "empty limit set for " + ideal->name();
  rep.horizons["resolution"] = params.resolution;
  rep.horizons["sweep"] = params.sweep;
  rep.horizons["index"] = params.horizon;
  // eta is a cluster point: the tails A_n are positive and carry values close to eta.
  Json gamma = Json::array();
  bool gamma_ok = true;
  const auto sample = first_sites(carrier, 4096);
  for (Nat m = 1; m <= params.resolution; ++m) {
    auto c = r->cluster_for(eta, m);
    bool ok = c.has_value() && ideal->decide(c->set).verdict == Verdict::Positive;
    std::size_t checked = 0;
    if (ok) {
      for (const Site& s : sample) {
        if (!site_in(carrier, c->set, s)) continue;
        ++checked;
        ok = ok && r->at(s).prefix(m) == eta.prefix(m);
      }
    }
    gamma_ok = gamma_ok && ok;
    gamma.push_back(Json{{"m", m}, {"set", c ? c->set.term() : "none"}, {"checked_sites", checked}, {"ok", ok}});
  }
  rep.check("eta is a cluster point", gamma_ok, gamma);
  // y_n is isolated: its small neighbourhood meets the sequence only on the step A_n \ A_(n+1).
  Json isolated = Json::array();
  bool iso_ok = true;
  for (Nat n = 0; n < 8; ++n) {
    const auto d = first_difference(y(n), eta);
    std::optional<Nat> radius;
    if (d) {
      radius = *d + 1;
      for (Nat k = 0; k < 64; ++k) {
        if (k != n && y(k).prefix(*radius) == y(n).prefix(*radius)) radius.reset();
        if (!radius) break;
      }
    }
    const DescribedSet step = combine(SetOp::Difference, chain(n), chain(n + 1));
    const bool ok = radius.has_value() && ideal->decide(step).verdict == Verdict::In;
    iso_ok = iso_ok && ok;
    isolated.push_back(Json{{"n", n}, {"radius_exp", radius ? Json(*radius) : Json(nullptr)}, {"step", step.term()}, {"in_ideal", ok}});
  }
  rep.check("each y_n is not a cluster point", iso_ok, isolated);
  // Lambda sweep: a positive candidate is refuted by two steps it meets infinitely often.
  const auto candidates = positive_candidates(ideal, params.sweep, params.seed);
  std::size_t refuted = 0;
  Json rows = Json::array();
  Json survivors = Json::array();
  for (const auto& c : candidates) {
    std::vector<Nat> hit;
    for (Nat n = 0; n < 64 && hit.size() < 2; ++n) {
      const DescribedSet part = combine(SetOp::Intersection, c, combine(SetOp::Difference, chain(n), chain(n + 1)));
      if (is_finite(part) == Finiteness::Infinite) hit.push_back(n);
    }
    if (hit.size() == 2) {
      ++refuted;
      const Dyadic gap = metric(y(hit[0]), y(hit[1]));
      rows.push_back(Json{{"steps", hit}, {"oscillation", gap.str()}});
    } else if (survivors.size() < 8) {
      survivors.push_back(c.term());
    }
  }
  rep.check("candidate family size", candidates.size() == params.sweep,
            Json{{"generated", candidates.size()}, {"requested", params.sweep}});
  rep.add("no swept candidate converges", refuted == candidates.size() ? ClauseVerdict::Pass : ClauseVerdict::Inconclusive,
          Json{{"candidates", candidates.size()}, {"refuted", refuted}, {"oscillations", rows}, {"survivors", survivors}});
  rep.notes["lambda"] = "empty on the swept family; a sweep is evidence, not a proof";
  return EvidencedRealization{r, rep};
}

// ---------------------------------------------------------------- Gamma but not Lambda under Z

EvidencedRealization gamma_not_lambda_z(const SweepParams& params) {
  const IdealHandle z = density_zero_ideal();
  auto y = [](Nat k) { return CantorPoint::padded(BinWord::zeros(k).append(1)); };
  auto s_k = [](Nat k) { return DescribedSet::residue(Nat{1} << k, Nat{1} << (k + 1)); };
  auto tail = [](Nat m) {
    return combine(SetOp::Difference, DescribedSet::residue(0, Nat{1} << m), DescribedSet::finite({0}));
  };
  const CantorPoint eta = CantorPoint::zeros();

  auto r = std::make_shared<Realization>();
  r->name = "gamma-not-lambda-z";
  r->kind = TargetKind::GammaNotLambda;
  r->carrier = Carrier::Omega;
  r->ideal = z;
  r->level = VerificationLevel::OneSided;
  r->at = [y, eta](const Site& i) {
    if (i.a == 0) return eta;
    return y(static_cast<Nat>(std::countr_zero(i.a)));
  };
  r->cluster_for = [s_k, tail](const CantorPoint& p, Nat m) -> std::optional<ClusterCertificate> {
    if (m == 0 || m >= 62) return std::nullopt;
    const BinWord w = p.prefix(m);
    if (w.is_zero()) return ClusterCertificate{p, m, tail(m)};
    if (w.count_ones() != 1) return std::nullopt;
    std::size_t k = 0;
    while (w[k] == 0) ++k;
    return ClusterCertificate{p, m, s_k(k)};
  };
  r->cert_for = [s_k](const Target& t) {
    const BinWord w = t.point.prefix(64);
    if (w.count_ones() == 1 && t.point == CantorPoint::padded(w.prefix(t.point.head().size()))) {
      std::size_t k = 0;
      while (w[k] == 0) ++k;
      return LimitCertificate{t.point, s_k(k), [](Nat) { return Nat{0}; }, Report{}, nullptr, "x is constant on S_k"};
    }
    throw std::invalid_argument("gamma_not_lambda_z: only the points 0^k 1 0^inf are limit points");
  };
  r->provenance.push_back("x_i = 0^k 1 0^inf on S_k, x_0 = 0^inf");

  Report rep;
  rep.subject = "0^inf is a cluster point but not a limit point under density zero";
  rep.horizons["resolution"] = params.resolution;
  rep.horizons["sweep"] = params.sweep;
  // Cluster certificates: U_m = union of S_k, k >= m, with exact density 2^-m.
  Json gamma = Json::array();
  bool gamma_ok = true;
  for (Nat m = 1; m <= params.resolution; ++m) {
    const DescribedSet u = tail(m);
    const auto dens = periodic_density(u);
    const bool exact = dens.has_value() && *dens == Rational(1, BigInt(1) << m);
    const bool positive = z->decide(u).verdict == Verdict::Positive;
    bool values = true;
    for (Nat i : elements_upto(u, std::min<Nat>(params.horizon, 1U << 16))) values = values && r->at(Site{i, 0}).prefix(m).is_zero();
    gamma_ok = gamma_ok && exact && positive && values;
    gamma.push_back(Json{{"m", m}, {"set", u.term()}, {"density", dens ? rational_str(*dens) : "unknown"}, {"positive", positive},
                         {"values_in_ball", values}});
  }
  rep.check("0^inf is a cluster point with exact density 2^-m neighbourhoods", gamma_ok, gamma);
  Json limits = Json::array();
  bool limits_ok = true;
  for (Nat k = 0; k < 8; ++k) {
    const bool ok = z->decide(s_k(k)).verdict == Verdict::Positive;
    limits_ok = limits_ok && ok;
    limits.push_back(Json{{"k", k}, {"set", s_k(k).term()}, {"positive", ok}});
  }
  rep.check("each 0^k 1 0^inf is a limit point on S_k", limits_ok, limits);
  // Lambda sweep: a witness for 0^inf must lie almost inside every U_n.
  std::vector<DescribedSet> chain;
  for (Nat n = 0; n < 62; ++n) chain.push_back(tail(n));
  auto candidates = positive_candidates(z, params.sweep, params.seed);
  for (Nat n = 1; n <= 12; ++n) candidates.push_back(tail(n));
  std::size_t refuted = 0;
  Json rows = Json::array();
  Json survivors = Json::array();
  for (const auto& c : candidates) {
    const auto level = refute_candidate(chain, c);
    if (!level) {
      if (survivors.size() < 8) survivors.push_back(c.term());
      continue;
    }
    ++refuted;
    Json row{{"set", c.term()}, {"escapes_at", *level}};
    if (*level > 12) {
      // Almost inside U_12: density at most 2^-12.
      const auto d = periodic_density(combine(SetOp::Intersection, c, tail(12)));
      row["density_inside_u12"] = d ? rational_str(*d) : "unknown";
    }
    rows.push_back(std::move(row));
  }
  rep.add("every swept candidate escapes some U_n", refuted == candidates.size() ? ClauseVerdict::Pass : ClauseVerdict::Inconclusive,
          Json{{"candidates", candidates.size()}, {"refuted", refuted}, {"rows", rows}, {"survivors", survivors}});
  rep.notes["why"] = "a set almost inside every U_n has upper density at most 2^-n for each n, so it has density zero";
  return EvidencedRealization{r, rep};
}

// ---------------------------------------------------------------- scheme from a realization

SchemeHandle scheme_from_realization(const RealizationHandle& y, std::function<BinWord(const BinWord&)> f,
                                     std::string claimed_b, Nat scan) {
  require(y->carrier == Carrier::Omega, "scheme_from_realization: only the omega carrier is supported");
  for (Nat i = 0; i < (Nat{1} << 6) - 1; ++i) {
    const BinWord s = word_from_index(i);
    const BinWord fs = f(s);
    const BinWord f0 = f(s.append(0));
    const BinWord f1 = f(s.append(1));
    const bool ok = fs.is_prefix_of(f0) && fs.is_prefix_of(f1) && !f0.is_prefix_of(f1) && !f1.is_prefix_of(f0);
    require(ok, "scheme_from_realization: f is not cylinder compatible at " + s.str());
  }
  struct Visits {
    std::mutex mu;
    std::vector<Nat> hits;
    Nat next = 0;
  };
  struct State {
    RealizationHandle y;
    std::function<BinWord(const BinWord&)> f;
    Nat scan;
    std::mutex mu;
    std::map<std::vector<std::uint8_t>, std::shared_ptr<const Enumeration>> memo;
  };
  auto st = std::make_shared<State>();
  st->y = y;
  st->f = std::move(f);
  st->scan = scan;
  auto enumeration = [st](const BinWord& s) {
    std::lock_guard<std::mutex> lock(st->mu);
    auto it = st->memo.find(s.bits());
    if (it != st->memo.end()) return it->second;
    const BinWord cell = st->f(s);
    auto visits = std::make_shared<Visits>();
    auto e = std::make_shared<Enumeration>();
    e->term = "(visits " + cell.str() + ")";
    const RealizationHandle seq = st->y;
    const Nat scan = st->scan;
    e->at = [visits, cell, seq, scan](Nat k) {
      std::lock_guard<std::mutex> lock(visits->mu);
      while (visits->hits.size() <= k && visits->next < scan) {
        const Nat i = visits->next++;
        if (seq->at(Site{i, 0}).prefix(cell.size()) == cell) visits->hits.push_back(i);
      }
      return k < visits->hits.size() ? visits->hits[k] : kNatMax;
    };
    e->contains = [seq, cell](Nat i) { return seq->at(Site{i, 0}).prefix(cell.size()) == cell; };
    st->memo.emplace(s.bits(), e);
    return std::shared_ptr<const Enumeration>(e);
  };
  for (Nat i = 0; i < (Nat{1} << 5) - 1; ++i) {
    const auto e = enumeration(word_from_index(i));
    require(e->at(7) != kNatMax, "scheme_from_realization: node " + word_from_index(i).str() + " has fewer than 8 visits within the scan");
  }
  auto a = std::make_shared<IScheme>();
  a->name = "visits(" + y->name + ")";
  a->carrier = Carrier::Omega;
  a->ideal = y->ideal ? y->ideal->name() : "";
  a->full = false;
  a->claimed_b = std::move(claimed_b);
  a->node = [enumeration](const BinWord& s) { return DescribedSet::enumerated(enumeration(s)); };
  a->claims_in_b = [](const CantorPoint&) { return false; };
  a->history.push_back("node(s) = indices whose value lies in the cylinder f(s); semi-described: infinitude of a node "
                       "is assumed, only its first visits are confirmed by scanning");
  return a;
}

}  // namespace idealpts

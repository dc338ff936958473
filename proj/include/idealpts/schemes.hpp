#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "idealpts/cantor.hpp"
#include "idealpts/ideals.hpp"
#include "idealpts/natsets.hpp"
#include "idealpts/report.hpp"

namespace idealpts {

// Index of a carrier: (n, 0) on omega, (col, row) on the plane.
struct Site {
  Nat a = 0;
  Nat b = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

// Carrier order: n on omega; shell order (max(col,row), col, row) on the plane.
bool site_less(Carrier c, const Site& x, const Site& y);
// n on omega, max(col,row) on the plane.
Nat site_size(Carrier c, const Site& x);
bool site_in(Carrier c, const DescribedSet& s, const Site& x);
Json site_json(Carrier c, const Site& x);

// A positive set almost contained in every node along a branch.
struct SchemeCertificate {
  CantorPoint branch;
  DescribedSet set;
  std::function<Nat(Nat)> bound;   // |C \ node(x|n)| <= bound(n)
  std::function<Nat(Nat)> cutoff;  // members of C \ node(x|n) have size < cutoff(n)
  std::string law;
};

struct IScheme {
  std::string name;
  Carrier carrier = Carrier::Omega;
  std::string ideal;  // name of the native ideal
  bool full = false;
  std::string claimed_b;  // "empty", "{0^inf}", "Q(2^omega)", or a note; never verified here
  std::function<DescribedSet(const BinWord&)> node;
  // Certificate for a branch outside B, when the construction provides one.
  std::function<std::optional<SchemeCertificate>(const CantorPoint&)> cert_gen;
  // Branches the construction places in B; the kill sweep is run on them.
  std::function<bool(const CantorPoint&)> claims_in_b;
  std::string kill_argument;
  // Branch x with the site in node(x|n) for every n; nullopt if the site leaves the tree.
  std::function<std::optional<CantorPoint>(const Site&)> locate;
  // First `count` members of node(s) in carrier order.
  std::function<std::vector<Site>(const BinWord&, std::size_t)> leading;
  // Word of the underlying scheme used for node(s) (transforms that re-index).
  std::function<BinWord(const BinWord&)> source_word;
  std::vector<std::string> history;
};
using SchemeHandle = std::shared_ptr<const IScheme>;

// Fin-scheme diagonal along x: c_n = min(node(x|n) \ {c_0 .. c_{n-1}}).
std::shared_ptr<const Enumeration> fin_diagonal(const CantorPoint& x);
// Node of the full Fin-scheme: Residue(sum 2^i s_i, 2^|s|), omega for the empty word.
DescribedSet fin_node(const BinWord& s);

SchemeHandle fin_full_scheme();
// Carrier omega x omega, native ideal (empty) x Fin, claimed B = {0^inf}.
SchemeHandle empty_times_fin_scheme();
// Carrier omega x omega with columns idx(u), native ideal Fin x Fin, claimed B = Q(2^omega).
SchemeHandle fin2_anchored_scheme();
// Z-scheme with B = {0^inf}: node(0^k) = union of S_j for j >= k, node(0^k 1 t) = S_k on the levels of fin_node(t).
SchemeHandle z_tail_scheme();

// node(s) = union of parts over fin_node(s). Disjointness and positivity are checked on the
// first `check_parts` parts; throws std::invalid_argument on a violation.
SchemeHandle scheme_from_partition(std::shared_ptr<const IndexedFamily> parts, const IdealHandle& ideal,
                                   std::size_t check_parts = 12);

SchemeHandle fullize(const SchemeHandle& a);
SchemeHandle shift_to_zero(const SchemeHandle& a, const CantorPoint& xstar);
// Requires claimed B = Q(2^omega).
SchemeHandle double_to_sigma02(const SchemeHandle& a);
// Re-indexes along an enumeration without repetitions of a countable dense B.
SchemeHandle densify(const SchemeHandle& a, std::function<CantorPoint(Nat)> enumeration, std::string label,
                     std::size_t repeat_check = 64);
// node'(s) = node(w s); certificates and locators are transported.
SchemeHandle subscheme(const SchemeHandle& a, const BinWord& w, std::string claimed_b);

// t_s of the doubling transform: 0^n -> 0^2n, otherwise each digit i after the first one becomes (i, 1).
BinWord doubled_word(const BinWord& s);
// (0^t0, 1, 0^t1, 1, ..., 0^tk, 1)
BinWord baire_word(const BaireWord& t);
std::function<DescribedSet(const BaireWord&)> baire_tree_view(const SchemeHandle& a);

std::vector<Site> leading_members(const IScheme& a, const BinWord& s, std::size_t count);

// Per-node positivity, sibling disjointness, nesting and (when full) exact covering.
Report check_scheme(const IScheme& a, const IdealHandle& ideal, unsigned depth);

// Positivity of C and, for n <= depth, C \ node(x|n) finite within bound(n), all members below cutoff(n).
Report replay_certificate(const IScheme& a, const IdealHandle& ideal, const SchemeCertificate& cert, Nat depth,
                          Nat horizon);
Json certificate_json(const SchemeCertificate& cert, Nat depth);

enum class ProbeOutcome { NotInB, InB, Unknown };
const char* to_string(ProbeOutcome o);

struct ProbeParams {
  Nat depth = 10;       // certificate replay depth
  Nat kill_depth = 64;  // levels searched per candidate, stopping early at representation limits
  std::size_t sweep = 100;
  std::uint64_t seed = 7;
  Nat horizon = 100000;
};

struct ProbeResult {
  ProbeOutcome outcome = ProbeOutcome::Unknown;
  Report report;
};

ProbeResult b_membership_probe(const IScheme& a, const IdealHandle& ideal, const CantorPoint& x,
                               const ProbeParams& params = {});

// fin-full | etf | fin2-anchored | z-tail
SchemeHandle scheme_by_name(const std::string& name);

// Points: prefix w followed by x; x with its first n bits dropped.
CantorPoint prepend(const BinWord& w, const CantorPoint& x);
CantorPoint drop_prefix(const CantorPoint& x, Nat n);

}  // namespace idealpts

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "idealpts/pattern.hpp"
#include "idealpts/words.hpp"

namespace idealpts {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string rational_str(const Rational& q);

struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Finiteness { Finite, Infinite, Unknown };
enum class Tri { No, Yes, Unknown };
const char* to_string(Finiteness f);
const char* to_string(Tri t);

enum class GrowthClass { Linear, Polynomial, Exponential };

// Lower-bound evidence for an enumerated set a_0 < a_1 < ...
struct Growth {
  GrowthClass cls = GrowthClass::Linear;
  unsigned param = 1;                // degree (Polynomial) or base (Exponential)
  std::function<Nat(Nat)> lower;     // g(i) <= a_i
  std::function<Nat(Nat)> min_gap;   // optional: nondecreasing, unbounded, <= a_{i+1} - a_i
};

struct Enumeration {
  std::string term;
  std::function<Nat(Nat)> at;         // strictly increasing; kNatMax once values leave 64 bits
  std::optional<Growth> growth;
  std::function<bool(Nat)> contains;  // optional fast membership test
  // Optional point literal (prefix:period) that the rational points q_enum(a_i) approach.
  std::optional<std::string> accumulates_at;
};

class DescribedSet;

// Planar set given column by column: the j-th listed column carries section(j).
// Every section is infinite by construction.
struct ColumnFamily {
  std::string term;
  std::shared_ptr<const Enumeration> columns;
  std::function<DescribedSet(Nat)> section;
};

// Family of pairwise disjoint nonempty sets indexed by naturals.
struct IndexedFamily {
  std::string name;
  bool planar = false;
  std::function<DescribedSet(Nat)> part;
  std::function<std::optional<Nat>(Nat)> locate;              // part index of a code, if any
  std::function<std::optional<Nat>(Nat, Nat)> locate_pair;    // part index of (col,row), if any
  std::function<std::optional<DescribedSet>(const DescribedSet&)> closed_form;
};

enum class SetKind {
  Finite,
  Interval,
  Residue,
  Enumerated,
  Blocks,
  Levels,
  Subtree,
  Bits,
  Column,
  Row,
  Rect,
  Under,
  ColumnFamily,
  IndexedUnion,
  Union,
  Intersection,
  Difference,
  Complement
};

struct SetNode;

// Immutable, shareable description of a subset of omega. Planar leaves describe
// subsets of omega x omega transported through the pairing 2^n (2k + 1) - 1.
class DescribedSet {
 public:
  static DescribedSet finite(std::vector<Nat> elements);
  static DescribedSet interval(Nat lo, std::optional<Nat> hi);  // hi inclusive, nullopt = unbounded
  static DescribedSet all();
  static DescribedSet none();
  static DescribedSet residue(Nat a, Nat m);
  static DescribedSet enumerated(std::shared_ptr<const Enumeration> e);
  static DescribedSet blocks(Nat base, Nat mul, Nat add);  // union of [base^k, base^k + mul k + add)
  static DescribedSet levels(DescribedSet k);              // {n : floor(log2(n+1)) in k}
  static DescribedSet subtree(BinWord s);                  // {idx(u) : u extends s}
  static DescribedSet bits(unsigned lo, BinWord p);        // {n : bits lo.. of n spell p}
  static DescribedSet column(Nat c);
  static DescribedSet row(Nat r);
  static DescribedSet rect(DescribedSet cols, DescribedSet rows);
  static DescribedSet under(Nat a, Nat b);  // {(n,k) : k <= a n + b}
  static DescribedSet column_family(std::shared_ptr<const ColumnFamily> f);
  static DescribedSet indexed_union(std::shared_ptr<const IndexedFamily> f, DescribedSet index);
  static DescribedSet make_union(DescribedSet a, DescribedSet b);
  static DescribedSet make_intersection(DescribedSet a, DescribedSet b);
  static DescribedSet make_difference(DescribedSet a, DescribedSet b);
  static DescribedSet make_complement(DescribedSet a);

  SetKind kind() const;
  const SetNode& node() const { return *node_; }
  bool same_node(const DescribedSet& other) const { return node_ == other.node_; }

  bool contains(Nat n) const;
  bool contains_pair(Nat col, Nat row) const;
  // Exact normal form when the set lies in the block-regular fragment.
  const std::optional<Pattern>& pattern() const;
  std::string term() const;

 private:
  explicit DescribedSet(std::shared_ptr<const SetNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const SetNode> node_;
};

struct SetNode {
  SetKind kind;
  std::vector<Nat> values;  // Finite elements, or leaf parameters
  std::optional<Nat> upper;  // Interval upper bound
  BinWord word;
  std::vector<DescribedSet> children;
  std::shared_ptr<const Enumeration> enumeration;
  std::shared_ptr<const ColumnFamily> family;
  std::shared_ptr<const IndexedFamily> indexed;

  mutable std::once_flag pattern_once;
  mutable std::optional<Pattern> pattern_cache;
};

// Operation kinds accepted by combine().
enum class SetOp { Union, Intersection, Difference, Complement };

bool member(const DescribedSet& s, Nat n);
DescribedSet combine(SetOp op, const DescribedSet& s, const DescribedSet& t);
DescribedSet complement(const DescribedSet& s);

Finiteness is_finite(const DescribedSet& s);
Tri is_empty(const DescribedSet& s);
// Smallest member >= from, searched up to `limit` for sets outside the exact fragment.
std::optional<Nat> first_member(const DescribedSet& s, Nat from, Nat limit);
// Members below or equal to `bound`, ascending.
std::vector<Nat> elements_upto(const DescribedSet& s, Nat bound);
// Planar members (col,row) with max(col,row) <= bound, in (col,row) order.
std::vector<std::pair<Nat, Nat>> pairs_upto(const DescribedSet& s, Nat bound);
// Exact density of an eventually periodic set.
std::optional<Rational> periodic_density(const DescribedSet& s);

// S = Q intersected with Levels(K), Q inside the pattern fragment.
struct LevelForm {
  DescribedSet q;
  DescribedSet k;
};
std::optional<LevelForm> level_form(const DescribedSet& s);
// Q meets every long level, K is infinite: then Q n Levels(K) has positive upper density.
bool level_form_dense(const LevelForm& f);

// Solutions of a k == b (mod m) as (k0, modulus of the class), or nullopt.
std::optional<std::pair<Nat, Nat>> solve_linear_congruence(Nat a, Nat b, Nat m);

// ---- column analysis on omega x omega ----
enum class SectionClass { AllFinite, AllCofinite, AllInfinite, Unknown };
const char* to_string(SectionClass c);

struct Section {
  std::optional<DescribedSet> fixed;  // the same section in every column of the piece
  SectionClass cls = SectionClass::Unknown;
  bool all_nonempty = false;
  std::function<DescribedSet(Nat)> varying;  // column -> section when not fixed
  DescribedSet at(Nat col) const { return fixed ? *fixed : varying(col); }
};

struct ProfilePiece {
  DescribedSet columns;
  Section section;
};
using ColumnProfile = std::vector<ProfilePiece>;

// Finite partition of the column indices with a uniform section description per
// block, or nullopt when the set is outside the supported planar fragment.
std::optional<ColumnProfile> column_profile(const DescribedSet& s);
SectionClass classify_section(const Section& s);
std::optional<DescribedSet> section_of(const DescribedSet& s, Nat col);

// ---- statistics ----
struct StatsLimits {
  Nat max_n = Nat{1} << 24;
  Nat max_recip_terms = 4096;
};

struct SetStats {
  Nat n = 0;
  Nat w = 0;
  Nat count = 0;
  Rational density;
  Rational banach_window;
  std::optional<Rational> recip_sum;  // nullopt when the exact sum exceeds the term budget
};

using CharFn = std::function<bool(Nat)>;
SetStats stats(const DescribedSet& s, Nat n, Nat w, const StatsLimits& limits = {});
SetStats stats(const CharFn& chi, Nat n, Nat w, const StatsLimits& limits = {});
Nat count_upto(const DescribedSet& s, Nat n);
Rational density_upto(const DescribedSet& s, Nat n);
Rational banach_window(const DescribedSet& s, Nat n, Nat w, const StatsLimits& limits = {});
Rational recip_sum_upto(const DescribedSet& s, Nat n, const StatsLimits& limits = {});

// ---- registered enumerations and text grammar ----
std::shared_ptr<const Enumeration> powers_enumeration(Nat base);
std::shared_ptr<const Enumeration> polynomial_enumeration(unsigned degree);
std::shared_ptr<const Enumeration> qprefix_enumeration(const BinWord& motif);
// Sample-check the growth witness of an enumeration on the first `samples` indices.
bool growth_witness_holds(const Enumeration& e, Nat samples);

DescribedSet parse_set(const std::string& text);
std::string print_set(const DescribedSet& s);

}  // namespace idealpts

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "idealpts/natsets.hpp"
#include "idealpts/words.hpp"

namespace idealpts {

struct InsufficientDefinedness : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 0 or 2^-exp.
struct Dyadic {
  std::optional<Nat> exp;  // nullopt means zero
  static Dyadic zero() { return Dyadic{}; }
  static Dyadic pow2(Nat e) { return Dyadic{e}; }
  bool is_zero() const { return !exp; }
  bool at_most(Nat m) const { return !exp || *exp >= m; }  // value <= 2^-m
  std::string str() const;
  friend bool operator==(const Dyadic&, const Dyadic&) = default;
};

// Point of 2^omega: eventually periodic (exact) or lazy (bit oracle with a horizon).
class CantorPoint {
 public:
  CantorPoint() : period_(BinWord::zeros(1)) {}  // 0^inf
  static CantorPoint periodic(BinWord head, BinWord period);
  static CantorPoint lazy(std::function<std::uint8_t(Nat)> oracle, Nat horizon, std::string label);
  // "prefix:period", e.g. "01:0"; an empty side may be written "-" or left blank.
  static CantorPoint parse(const std::string& literal);
  static CantorPoint zeros() { return periodic(BinWord{}, BinWord::zeros(1)); }
  static CantorPoint ones() { return periodic(BinWord{}, BinWord::ones(1)); }
  // s followed by 0^inf.
  static CantorPoint padded(const BinWord& s) { return periodic(s, BinWord::zeros(1)); }

  bool is_periodic() const { return !lazy_; }
  Nat horizon() const;  // number of defined bits (kNatMax when periodic)
  std::uint8_t bit(Nat i) const;  // throws InsufficientDefinedness past the horizon
  BinWord prefix(Nat n) const;
  const BinWord& head() const { return head_; }
  const BinWord& period() const { return period_; }
  bool eventually_zero() const { return is_periodic() && period_.is_zero(); }
  bool has_infinitely_many_ones() const { return is_periodic() && !period_.is_zero(); }
  std::string literal() const;  // canonical literal, or "lazy:<label>"

  friend bool operator==(const CantorPoint& a, const CantorPoint& b);

 private:
  struct LazyState;
  BinWord head_;
  BinWord period_;
  std::shared_ptr<LazyState> lazy_;
};

// Coordinatewise sum mod 2.
CantorPoint point_xor(const CantorPoint& x, const CantorPoint& y);

Dyadic metric(const CantorPoint& x, const CantorPoint& y);
// Distance from x to the cylinder [s].
Dyadic cylinder_dist(const CantorPoint& x, const BinWord& s);
// Index of the first difference of x and y, or nullopt when equal.
std::optional<Nat> first_difference(const CantorPoint& x, const CantorPoint& y);

// Bijection omega -> eventually-zero points: 0 -> 0^inf, n -> word_from_index(n-1) 1 0^inf.
CantorPoint q_enum(Nat n);
std::optional<Nat> q_index(const CantorPoint& x);

enum class Membership { In, Out, Unknown };
const char* to_string(Membership m);

// Pruned binary tree T, [T] the closed set of its branches.
class ClosedCode {
 public:
  static ClosedCode full();
  static ClosedCode cylinder(BinWord c);
  // Union of finitely many cylinders (a clopen set).
  static ClosedCode clopen(std::vector<BinWord> cells, std::string name = "");
  static ClosedCode single_branch(CantorPoint p);  // p eventually periodic
  // {x : x_i = 0 for every i = residue mod modulus}
  static ClosedCode positions_zero(Nat modulus, Nat residue);
  // Random pruned tree of the given depth: every node keeps both children with probability 1/2,
  // otherwise one random child; full below `depth`.
  static ClosedCode random_pruned(std::uint64_t seed, unsigned depth);
  // T intersected with the cylinder [s] (requires s in T).
  static ClosedCode cut(const ClosedCode& base, BinWord s);
  // full | cyl:<w> | clopen:<w>,<w>.. | branch:<literal> | zeros:<m>:<r> | random:<seed>:<depth>
  static ClosedCode by_name(const std::string& ref);

  const std::string& name() const { return name_; }
  bool admits(const BinWord& s) const;
  std::vector<std::uint8_t> admitted_children(const BinWord& s) const;
  // Leftmost branch of [T] through s; exact eventually periodic point.
  CantorPoint leftmost_completion(const BinWord& s) const;
  // Exact test for eventually periodic points.
  Membership contains(const CantorPoint& x) const;
  // Every admitted node of length < depth has an admitted child.
  bool check_pruned(unsigned depth) const;

 private:
  enum class Kind { Full, Clopen, Branch, PositionsZero, Cut };
  Kind kind_ = Kind::Full;
  std::string name_;
  std::vector<BinWord> cells_;
  CantorPoint point_;
  Nat modulus_ = 1;
  Nat residue_ = 0;
  BinWord word_;
  std::shared_ptr<const ClosedCode> base_;
};

Membership closed_membership(const ClosedCode& t, const CantorPoint& x, Nat depth);

// ---- tree surjection omega^omega -> [T] ----
// Each step reads y_i mod c, c the number of admitted children of the current node.
BinWord surject_prefix(const ClosedCode& t, const std::vector<Nat>& y);
// f(t ^ 0^inf): exact point (the continuation always takes the leftmost child).
CantorPoint surject_finite(const ClosedCode& t, const std::vector<Nat>& y);
// f(y) as a lazy point defined on the first `horizon` bits.
CantorPoint surject_lazy(const ClosedCode& t, std::function<Nat(Nat)> y, Nat horizon);
// A finite y with surject_prefix(t, y) == s.
std::vector<Nat> surject_inverse(const ClosedCode& t, const BinWord& s);

// ---- F_sigma-delta codes and the limsup decomposition ----
struct SigmaDeltaCode {
  std::string name;
  std::function<ClosedCode(Nat)> part;  // P_n; the target is limsup_n P_n
  // Does the cell P_n cut by [s] meet the target? Yes/No/Unknown.
  std::function<Tri(Nat level, const BinWord& s)> meets;
  // Exact membership of an eventually periodic point in the target, when available.
  std::function<Membership(const CantorPoint&)> contains;
  // Every cell P_n cut by a cylinder equals that cylinder.
  bool cylinder_cells = false;
  // Leftmost point of the target inside [s], when it exists.
  std::function<std::optional<CantorPoint>(const BinWord&)> leftmost_in;
};

// P_n = {x : x_n = 0}; the target is the set of points with infinitely many zeros.
SigmaDeltaCode infinitely_many_zeros_code();
// P_n = 2^omega for all n.
SigmaDeltaCode whole_space_code();

struct LimsupCell {
  Nat level = 0;
  BinWord cylinder;  // length level + 1
  ClosedCode cell;   // P_level cut by the cylinder
};

// Cells P_n cut by the cylinders of length n + 1, level by level in lexicographic
// order, keeping those that meet the target. Memoised and thread safe.
class LimsupStream {
 public:
  explicit LimsupStream(SigmaDeltaCode code);
  const SigmaDeltaCode& code() const { return code_; }
  // Cells of one level.
  const std::vector<LimsupCell>& level(Nat n) const;
  // k-th emitted cell overall.
  const LimsupCell& at(Nat k) const;
  // Global index of the first cell of a level.
  Nat level_offset(Nat n) const;
  // Candidates dropped because the meets test was Unknown.
  std::vector<std::string> dropped() const;

 private:
  struct State;
  SigmaDeltaCode code_;
  std::shared_ptr<State> state_;
};

// ---- Souslin codes ----
using BaireWord = std::vector<Nat>;
std::string baire_str(const BaireWord& t);

struct SouslinCode {
  std::string name;
  std::function<ClosedCode(const BaireWord&)> cell;        // P_t
  std::function<BinWord(const BaireWord&)> cell_cylinder;  // when P_t is a cylinder
  std::function<CantorPoint(const BaireWord&)> limit;      // the point of the nested cells P_{t ^ 0^n}
};

// P_t = [0^t0 1 0^t1 1 ... 0^tk 1]; limit(t) = w(t) 1^inf.
SouslinCode wirr_souslin();
BinWord wirr_word(const BaireWord& t);
// Monotonicity and diameter <= 2^-|t| on all t with |t| <= depth and entries < width.
bool check_souslin(const SouslinCode& code, unsigned depth, Nat width, std::string* failure = nullptr);

}  // namespace idealpts

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "idealpts/natsets.hpp"
#include "idealpts/report.hpp"

namespace idealpts {

enum class Verdict { In, Positive, Unknown };
const char* to_string(Verdict v);

struct Decision {
  Verdict verdict = Verdict::Unknown;
  std::vector<std::string> trace;  // decision path, outermost step first
};

enum class Carrier { Omega, Plane };
const char* to_string(Carrier c);

struct CarrierMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Static catalog facts about a named ideal. Never consulted by deciders.
struct CatalogTags {
  std::optional<bool> p_plus;
  std::optional<bool> p_minus;
  std::optional<bool> p_prime;
  std::string borel_note;
};

class Ideal;
using IdealHandle = std::shared_ptr<const Ideal>;
using Decider = std::function<Decision(const DescribedSet&)>;

class Ideal {
 public:
  Ideal(std::string name, Carrier carrier, int nesting, Decider core);

  const std::string& name() const { return name_; }
  Carrier carrier() const { return carrier_; }
  int nesting() const { return nesting_; }
  // Contains every finite set (false only for the trivial ideal {emptyset}).
  bool admissible = true;
  // Every infinite set is positive (Fin and the trivial ideal).
  bool infinite_is_positive = false;
  CatalogTags tags;

  // Core decision first; Boolean nodes left Unknown are resolved with the ideal
  // laws (closure under finite unions and subsets, properness).
  Decision decide(const DescribedSet& s) const;

 private:
  std::string name_;
  Carrier carrier_;
  int nesting_;
  Decider core_;
};

IdealHandle fin_ideal();
IdealHandle density_zero_ideal();   // Z
IdealHandle summable_ideal();       // I_{1/n}
IdealHandle banach_ideal();         // B
IdealHandle trivial_ideal();        // {emptyset}
IdealHandle fin2_ideal();           // built-in Fin x Fin with its own column analysis
IdealHandle iw_ideal();             // q_enum-indexed sets avoiding accumulation in W_irr

// Names: fin, z, summable (i1n), banach (b), empty, fin2, etf, iw, prod(X,Y), sum(X,Y).
IdealHandle ideal_by_name(const std::string& name);

// {S : {n : S_n not in J} in I} on the pairing-coded plane. Nesting above 3 is rejected.
IdealHandle fubini_product(const IdealHandle& outer, const IdealHandle& inner);
// Evens carry the left component (n -> 2n), odds the right one (n -> 2n + 1).
IdealHandle fubini_sum(const IdealHandle& left, const IdealHandle& right);
// I restricted to A; throws if A decides In.
IdealHandle restrict_ideal(const IdealHandle& ideal, const DescribedSet& a);

Decision decide(const IdealHandle& ideal, const DescribedSet& s);

// ---- maps between carriers ----
enum class MapKind { Identity, Affine, Proj1, Proj2 };

struct ReductionMap {
  MapKind kind = MapKind::Identity;
  Nat a = 1;  // Affine: n -> a n + b
  Nat b = 0;
  bool finite_to_one = true;
  std::function<Nat(Nat)> fiber_bound;  // declared |f^-1(n)| bound, when finite_to_one

  static ReductionMap identity();
  static ReductionMap affine(Nat a, Nat b);
  static ReductionMap proj1();
  static ReductionMap proj2();

  std::optional<Nat> apply(Nat n) const;  // nullopt if the value leaves 64 bits
  std::string describe() const;
};

struct UnsupportedMap : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Extensional preimage f^-1[S]; throws UnsupportedMap when it leaves the algebra.
DescribedSet pullback(const ReductionMap& f, const DescribedSet& s);

enum class ReductionMode { RudinBlass, Katetov };

struct ReductionRow {
  std::string set;
  Verdict source = Verdict::Unknown;  // decision in I
  Verdict target = Verdict::Unknown;  // decision of the preimage in J
  bool violation = false;
};

struct ReductionReport {
  std::vector<ReductionRow> rows;
  bool fiber_ok = true;
  std::string fiber_note;
  std::size_t violations = 0;
  std::size_t unknown_pairs = 0;
  Json to_json() const;
};

// Checks "S in I iff f^-1[S] in J" (Katetov mode: only the forward direction) and,
// in RB mode, that fibers of f stay within the declared bound on [0, fiber_horizon).
ReductionReport check_reduction(const ReductionMap& f, const IdealHandle& source, const IdealHandle& target,
                                const std::vector<DescribedSet>& samples, ReductionMode mode,
                                Nat fiber_horizon = 1U << 14);

// ---- P-like witnesses ----
enum class PKind { Pplus, Pminus, Pprime };
const char* to_string(PKind k);

struct PWitness {
  PKind kind = PKind::Pplus;
  std::vector<DescribedSet> chain;
  std::optional<DescribedSet> candidate;
};

// Clauses: decreasing chain, positivity of each link, the step rule of the kind,
// candidate checks (positive, almost contained in each link), density evidence.
Report validate_p_witness(const IdealHandle& ideal, const PWitness& w, Nat horizon);

// Index n < chain.size() with candidate \ chain[n] infinite, if the algebra proves one.
std::optional<std::size_t> refute_candidate(const std::vector<DescribedSet>& chain, const DescribedSet& candidate);

// Deterministic family of sets the ideal decides Positive, shaped for its carrier.
std::vector<DescribedSet> positive_candidates(const IdealHandle& ideal, std::size_t count, std::uint64_t seed);
// Fin x Fin positive planar sets (infinitely many infinite columns).
std::vector<DescribedSet> planar_positive_candidates(std::size_t count, std::uint64_t seed);

struct CatalogEntry {
  std::string ideal;
  CatalogTags tags;
};
const std::vector<CatalogEntry>& ideal_catalog();

Json decision_json(const Decision& d);

}  // namespace idealpts

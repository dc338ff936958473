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
#include "idealpts/schemes.hpp"

namespace idealpts {

enum class TargetKind { FiniteSet, Closed, FSigma, FSigmaDelta, Analytic, Cluster, EmptyLambda, GammaNotLambda };
const char* to_string(TargetKind k);

// TwoSided: target inside the limit points and values in a closed target.
// RangeSided: target inside the limit points and values in the target.
// OneSided: only the target inside the limit points is certified.
enum class VerificationLevel { TwoSided, RangeSided, OneSided };
const char* to_string(VerificationLevel v);

struct Target {
  CantorPoint point;
  std::function<Nat(Nat)> baire;         // analytic targets: y with point = p_y
  std::optional<std::size_t> component;  // F_sigma targets: index of the closed piece
  std::string label;
};

struct LimitCertificate {
  CantorPoint point;
  DescribedSet set = DescribedSet::none();
  // Sites of the set with size >= threshold(m) carry values within 2^-m of the point.
  std::function<Nat(Nat)> threshold;
  Report structure;  // exact side conditions of the construction
  // Replay of the underlying scheme certificate, when there is one.
  std::function<Report(Nat depth, Nat horizon)> replay;
  std::string law;
};

struct ClusterCertificate {
  CantorPoint point;
  Nat resolution = 0;
  DescribedSet set;  // every site of the set carries a value within 2^-resolution of the point
};

struct Realization {
  std::string name;
  TargetKind kind = TargetKind::Closed;
  Carrier carrier = Carrier::Omega;
  IdealHandle ideal;
  VerificationLevel level = VerificationLevel::OneSided;
  std::function<CantorPoint(const Site&)> at;
  std::function<LimitCertificate(const Target&)> cert_for;  // may be empty
  std::function<std::optional<ClusterCertificate>(const CantorPoint&, Nat)> cluster_for;  // may be empty
  // Exact test that a value lies in the target (or its closure for closed targets).
  std::function<Membership(const CantorPoint&)> range;
  std::vector<std::string> provenance;
};
using RealizationHandle = std::shared_ptr<const Realization>;

// x_i = points[j] on parts[j]; each parts[j] certifies points[j] with threshold 0.
RealizationHandle realize_finite(std::vector<CantorPoint> points, std::vector<DescribedSet> parts,
                                 const IdealHandle& ideal);

// Full scheme with claimed B = empty and a locator; values f(t ^ 0^inf) of the tree surjection onto [T].
RealizationHandle realize_closed(const SchemeHandle& a, const ClosedCode& t, const IdealHandle& ideal);

// x_i = dense(n) on parts[n] (dense(0) off the parts); cluster certificates are finite unions of parts.
RealizationHandle realize_cluster_closed(std::shared_ptr<const IndexedFamily> parts,
                                         std::function<CantorPoint(Nat)> dense, const ClosedCode& t,
                                         const IdealHandle& ideal, Nat scan = 4096);

// Scheme with claimed B = {0^inf}; piece n of the union is realized below 0^n 1 against targets[n mod N].
RealizationHandle realize_fsigma(const SchemeHandle& a, std::vector<ClosedCode> targets, const IdealHandle& ideal,
                                 std::optional<CantorPoint> eta0 = std::nullopt);

// Scheme with claimed B = Q(2^omega) and a code with cylinder cells.
RealizationHandle realize_fsigmadelta(const SchemeHandle& a, SigmaDeltaCode code, const IdealHandle& ideal,
                                      std::optional<CantorPoint> p0 = std::nullopt);

// Scheme with claimed B = Q(2^omega); always OneSided on shipped instances.
RealizationHandle realize_analytic(const SchemeHandle& a, SouslinCode code, const IdealHandle& ideal,
                                   std::optional<CantorPoint> pstar = std::nullopt);

struct SweepParams {
  std::size_t sweep = 100;
  std::uint64_t seed = 7;
  Nat resolution = 10;  // largest m for neighbourhood certificates
  Nat horizon = 100000;
};

struct EvidencedRealization {
  RealizationHandle realization;
  Report report;
};

// x_i = y(n) on chain(n) \ chain(n + 1), eta on the intersection. The report certifies eta as a
// cluster point, the y(n) as non-cluster points, and refutes every swept candidate as a limit witness.
EvidencedRealization empty_limit_sequence(const IdealHandle& ideal, std::function<DescribedSet(Nat)> chain,
                                          std::function<CantorPoint(Nat)> y, const CantorPoint& eta,
                                          const SweepParams& params = {});

// Density-zero ideal: x_0 = 0^inf, x_i = 0^k 1 0^inf on S_k = {n : 2^(k+1) divides n - 2^k}.
EvidencedRealization gamma_not_lambda_z(const SweepParams& params = {});

// node(s) = {i : at(i) in [f(s)]} on the omega carrier, enumerated by scanning up to `scan`.
// f must be prefix monotone with incompatible sibling images (checked to depth 6).
SchemeHandle scheme_from_realization(const RealizationHandle& y, std::function<BinWord(const BinWord&)> f,
                                     std::string claimed_b, Nat scan = Nat{1} << 20);

// The first `count` sites of a carrier in carrier order.
std::vector<Site> first_sites(Carrier c, std::size_t count);

}  // namespace idealpts

#pragma once

// Regression corpus of set terms with hand-derived truths per ideal.
#include <map>
#include <random>
#include <string>
#include <vector>

#include "idealpts/ideals.hpp"

namespace corpus {

using idealpts::Verdict;

struct Item {
  std::string term;
  std::string family;
  std::map<std::string, Verdict> truth;  // ideal name -> true verdict
};

inline constexpr Verdict In = Verdict::In;
inline constexpr Verdict Pos = Verdict::Positive;

// Omega sets: truths for fin, summable, z, banach.
inline Item omega(std::string term, std::string family, Verdict fin, Verdict summable, Verdict z, Verdict banach) {
  return Item{std::move(term), std::move(family), {{"fin", fin}, {"summable", summable}, {"z", z}, {"banach", banach}}};
}
// Planar sets: truths for fin2 and etf (Fin x Fin and empty x Fin).
inline Item plane(std::string term, std::string family, Verdict fin2, Verdict etf) {
  return Item{std::move(term), std::move(family), {{"fin2", fin2}, {"etf", etf}}};
}

inline std::string n(std::uint64_t v) { return std::to_string(v); }

inline std::vector<Item> build() {
  std::mt19937_64 rng(2024);
  std::vector<Item> out;
  auto fin_term = [&rng](int count, std::uint64_t range) {
    std::string t = "(fin";
    for (int i = 0; i < count; ++i) t += " " + n(rng() % range);
    return t + ")";
  };
  // Finite sets lie in every ideal.
  for (int i = 0; i < 30; ++i) out.push_back(omega(fin_term(1 + i % 6, 1000), "finite", In, In, In, In));
  // A residue class has density 1/m, so it is positive for every ideal here.
  for (int i = 0; i < 30; ++i) {
    const std::uint64_t m = 1 + rng() % 12;
    out.push_back(omega("(res " + n(rng() % m) + " " + n(m) + ")", "residue", Pos, Pos, Pos, Pos));
  }
  for (int i = 0; i < 10; ++i) out.push_back(omega("(ival " + n(rng() % 5000) + " *)", "ray", Pos, Pos, Pos, Pos));
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t lo = rng() % 5000;
    out.push_back(omega("(ival " + n(lo) + " " + n(lo + rng() % 500) + ")", "bounded interval", In, In, In, In));
  }
  // Powers and polynomial sequences: infinite, with a convergent reciprocal sum and no long runs.
  for (int b = 2; b <= 6; ++b) out.push_back(omega("(enum pow " + n(b) + ")", "powers", Pos, In, In, In));
  for (int d = 2; d <= 4; ++d) out.push_back(omega("(enum poly " + n(d) + ")", "polynomial", Pos, In, In, In));
  // Blocks [b^k, b^k + mul k + add): reciprocal sum of order sum k / b^k; runs grow iff mul > 0.
  out.push_back(omega("(blocks 2 1 0)", "blocks", Pos, In, In, Pos));
  out.push_back(omega("(blocks 2 1 1)", "blocks", Pos, In, In, Pos));
  out.push_back(omega("(blocks 3 1 2)", "blocks", Pos, In, In, Pos));
  out.push_back(omega("(blocks 3 2 1)", "blocks", Pos, In, In, Pos));
  out.push_back(omega("(blocks 2 0 1)", "blocks", Pos, In, In, In));
  // Level sets over a residue class of levels: upper density at least 1/2.
  for (int a = 0; a < 3; ++a) out.push_back(omega("(levels (res " + n(a) + " 3))", "levels", Pos, Pos, Pos, Pos));
  for (int a = 0; a < 2; ++a) out.push_back(omega("(levels (res " + n(a) + " 2))", "levels", Pos, Pos, Pos, Pos));
  // Cones {idx(u) : u extends s} fill a 2^-|s| share of every level.
  for (int i = 0; i < 15; ++i) {
    std::string s;
    for (unsigned k = 1 + rng() % 4; k > 0; --k) s.push_back(rng() & 1U ? '1' : '0');
    out.push_back(omega("(tree " + s + ")", "cone", Pos, Pos, Pos, Pos));
  }
  for (int i = 0; i < 10; ++i) out.push_back(omega("(compl " + fin_term(1 + i % 5, 300) + ")", "cofinite", Pos, Pos, Pos, Pos));
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t m = 1 + rng() % 9;
    out.push_back(omega("(union (enum pow 2) (res " + n(rng() % m) + " " + n(m) + "))", "powers or residue", Pos, Pos, Pos, Pos));
  }
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t m = 1 + rng() % 9;
    out.push_back(omega("(diff (res " + n(rng() % m) + " " + n(m) + ") " + fin_term(3, 100) + ")", "residue minus finite", Pos, Pos,
                        Pos, Pos));
  }
  for (int b = 2; b <= 6; ++b) out.push_back(omega("(union " + fin_term(3, 50) + " (enum pow " + n(b) + "))", "finite or powers", Pos, In, In, In));
  for (int k = 1; k <= 4; ++k) {
    out.push_back(omega("(inter (res 0 " + n(std::uint64_t{1} << k) + ") (enum pow 2))", "even powers", Pos, In, In, In));
  }
  out.push_back(omega("(inter (res 1 2) (enum pow 2))", "odd powers", In, In, In, In));
  for (int i = 0; i < 6; ++i) {
    const std::uint64_t lo = rng() % 1000;
    out.push_back(omega("(diff (ival " + n(lo) + " *) (res 0 2))", "odd ray", Pos, Pos, Pos, Pos));
  }

  // Planar sets on omega x omega.
  for (int i = 0; i < 5; ++i) {
    const std::uint64_t m = 1 + rng() % 6;
    out.push_back(plane("(rect (res " + n(rng() % m) + " " + n(m) + ") (ival " + n(rng() % 50) + " *))", "rect residue x ray", Pos, Pos));
  }
  for (int i = 0; i < 5; ++i) out.push_back(plane("(rect " + fin_term(3, 40) + " (ival 0 *))", "finitely many full columns", In, Pos));
  for (int i = 0; i < 5; ++i) out.push_back(plane("(rect (ival 0 *) " + fin_term(3, 40) + ")", "finitely many rows", In, In));
  for (int i = 0; i < 5; ++i) out.push_back(plane("(under " + n(rng() % 4) + " " + n(rng() % 10) + ")", "under a line", In, In));
  for (int i = 0; i < 4; ++i) out.push_back(plane("(row " + n(rng() % 30) + ")", "row", In, In));
  for (int i = 0; i < 4; ++i) out.push_back(plane("(col " + n(rng() % 30) + ")", "column", In, Pos));
  for (int i = 0; i < 4; ++i) {
    out.push_back(plane("(diff (rect (ival 0 *) (ival 0 *)) (under " + n(rng() % 4) + " " + n(rng() % 10) + "))", "above a line", Pos, Pos));
  }
  for (int i = 0; i < 4; ++i) {
    out.push_back(plane("(union (col " + n(rng() % 30) + ") (under " + n(rng() % 3) + " " + n(rng() % 5) + "))", "column and under",
                        In, Pos));
  }
  for (int i = 0; i < 4; ++i) {
    const std::uint64_t m = 2 + rng() % 4;
    out.push_back(plane("(rect (res 0 " + n(m) + ") (res 1 " + n(m) + "))", "rect residue x residue", Pos, Pos));
  }
  for (int i = 0; i < 4; ++i) {
    const std::uint64_t lo = rng() % 30;
    out.push_back(plane("(rect (ival " + n(lo) + " " + n(lo + 5) + ") (ival 0 *))", "band of columns", In, Pos));
  }
  return out;
}

}  // namespace corpus

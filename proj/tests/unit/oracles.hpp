#pragma once

// Independent reference semantics for set terms, used as brute-force oracles.
#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "idealpts/words.hpp"

namespace oracle {

using idealpts::Nat;

struct Term {
  std::string text;
  std::function<bool(Nat)> member;
};

inline unsigned floor_log2(Nat v) {
  unsigned l = 0;
  while (v >>= 1) ++l;
  return l;
}

// Bits of n + 1 after its leading one, most significant first.
inline std::vector<int> tree_word(Nat n) {
  const Nat v = n + 1;
  std::vector<int> w;
  for (int i = static_cast<int>(floor_log2(v)) - 1; i >= 0; --i) w.push_back(static_cast<int>((v >> i) & 1U));
  return w;
}

inline Term finite(std::vector<Nat> xs) {
  std::string t = "(fin";
  for (Nat x : xs) t += " " + std::to_string(x);
  return {t + ")", [xs](Nat n) { return std::find(xs.begin(), xs.end(), n) != xs.end(); }};
}
inline Term interval(Nat lo, Nat hi) {
  return {"(ival " + std::to_string(lo) + " " + std::to_string(hi) + ")", [lo, hi](Nat n) { return lo <= n && n <= hi; }};
}
inline Term ray(Nat lo) {
  return {"(ival " + std::to_string(lo) + " *)", [lo](Nat n) { return n >= lo; }};
}
inline Term residue(Nat a, Nat m) {
  return {"(res " + std::to_string(a) + " " + std::to_string(m) + ")", [a, m](Nat n) { return n % m == a % m; }};
}
inline Term blocks(Nat base, Nat mul, Nat add) {
  return {"(blocks " + std::to_string(base) + " " + std::to_string(mul) + " " + std::to_string(add) + ")",
          [base, mul, add](Nat n) {
            Nat p = 1;
            for (Nat k = 0; p <= n; ++k, p *= base) {
              if (n < p + mul * k + add) return true;
              if (p > n / base) break;
            }
            return false;
          }};
}
inline Term levels(const Term& k) {
  return {"(levels " + k.text + ")", [k](Nat n) { return k.member(floor_log2(n + 1)); }};
}
inline Term subtree(const std::string& s) {
  return {"(tree " + (s.empty() ? std::string("-") : s) + ")", [s](Nat n) {
            const auto w = tree_word(n);
            if (w.size() < s.size()) return false;
            for (std::size_t i = 0; i < s.size(); ++i) {
              if (w[i] != s[i] - '0') return false;
            }
            return true;
          }};
}
inline Term unite(const Term& a, const Term& b) {
  return {"(union " + a.text + " " + b.text + ")", [a, b](Nat n) { return a.member(n) || b.member(n); }};
}
inline Term meet(const Term& a, const Term& b) {
  return {"(inter " + a.text + " " + b.text + ")", [a, b](Nat n) { return a.member(n) && b.member(n); }};
}
inline Term minus(const Term& a, const Term& b) {
  return {"(diff " + a.text + " " + b.text + ")", [a, b](Nat n) { return a.member(n) && !b.member(n); }};
}
inline Term compl_(const Term& a) {
  return {"(compl " + a.text + ")", [a](Nat n) { return !a.member(n); }};
}

inline Term random_leaf(std::mt19937_64& rng) {
  switch (rng() % 7) {
    case 0: {
      std::vector<Nat> xs(rng() % 5);
      for (auto& x : xs) x = rng() % 200;
      std::sort(xs.begin(), xs.end());
      xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
      return finite(xs);
    }
    case 1: {
      const Nat lo = rng() % 300;
      return interval(lo, lo + rng() % 300);
    }
    case 2: return ray(rng() % 500);
    case 3: {
      const Nat m = 1 + rng() % 12;
      return residue(rng() % m, m);
    }
    case 4: {
      // Parameters whose blocks never overlap.
      static const Nat params[][3] = {{2, 1, 0}, {2, 1, 1}, {2, 0, 1}, {3, 1, 2}, {3, 2, 1}};
      const auto& p = params[rng() % 5];
      return blocks(p[0], p[1], p[2]);
    }
    case 5: return levels(residue(rng() % 3, 3));
    default: {
      std::string s;
      for (unsigned i = rng() % 4; i > 0; --i) s.push_back(rng() & 1U ? '1' : '0');
      return subtree(s);
    }
  }
}

inline Term random_term(std::mt19937_64& rng, unsigned depth) {
  if (depth == 0 || rng() % 3 == 0) return random_leaf(rng);
  switch (rng() % 4) {
    case 0: return unite(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 1: return meet(random_term(rng, depth - 1), random_term(rng, depth - 1));
    case 2: return minus(random_term(rng, depth - 1), random_term(rng, depth - 1));
    default: return compl_(random_term(rng, depth - 1));
  }
}

}  // namespace oracle

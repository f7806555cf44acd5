#pragma once

// Independent reference implementations used only by tests. Nothing here
// calls into the library under test.

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct Rule {
  int head = -1;  // -1: constraint
  std::vector<int> pos;
  std::vector<int> neg;
};

struct RandomProgram {
  int atoms = 0;
  std::vector<Rule> rules;

  std::string text() const {
    std::string out;
    for (const Rule& r : rules) {
      std::string body;
      auto add = [&](const std::string& l) {
        if (!body.empty()) body += ", ";
        body += l;
      };
      for (int a : r.pos) add("p" + std::to_string(a));
      for (int a : r.neg) add("not p" + std::to_string(a));
      std::string head = r.head >= 0 ? "p" + std::to_string(r.head) : "";
      if (body.empty()) {
        out += head + ".\n";
      } else {
        out += head + (head.empty() ? ":- " : " :- ") + body + ".\n";
      }
    }
    return out;
  }
};

inline RandomProgram random_program(std::mt19937_64& rng, int max_atoms, int max_rules) {
  RandomProgram p;
  p.atoms = std::uniform_int_distribution<int>(1, max_atoms)(rng);
  int rules = std::uniform_int_distribution<int>(1, max_rules)(rng);
  std::uniform_int_distribution<int> atom(0, p.atoms - 1);
  std::uniform_int_distribution<int> len(0, 3);
  std::uniform_int_distribution<int> pct(0, 99);
  for (int i = 0; i < rules; ++i) {
    Rule r;
    r.head = pct(rng) < 12 ? -1 : atom(rng);
    int n = len(rng);
    for (int k = 0; k < n; ++k) (pct(rng) < 50 ? r.pos : r.neg).push_back(atom(rng));
    if (r.head < 0 && r.pos.empty() && r.neg.empty()) r.pos.push_back(atom(rng));
    p.rules.push_back(r);
  }
  return p;
}

// Least model of the reduct, by naive iteration.
inline std::uint32_t reduct_least_model(const RandomProgram& p, std::uint32_t m) {
  std::uint32_t lm = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : p.rules) {
      if (r.head < 0) continue;
      bool blocked = false;
      for (int a : r.neg) blocked |= (m >> a) & 1u;
      if (blocked) continue;
      bool fire = true;
      for (int a : r.pos) fire &= ((lm >> a) & 1u) != 0;
      if (fire && !((lm >> r.head) & 1u)) {
        lm |= 1u << r.head;
        changed = true;
      }
    }
  }
  return lm;
}

// All stable models as bitmasks, by exhaustive subset enumeration.
inline std::set<std::uint32_t> stable_models(const RandomProgram& p) {
  std::set<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1u << p.atoms); ++m) {
    if (reduct_least_model(p, m) != m) continue;
    bool violated = false;
    for (const Rule& r : p.rules) {
      if (r.head >= 0) continue;
      bool body = true;
      for (int a : r.pos) body &= ((m >> a) & 1u) != 0;
      for (int a : r.neg) body &= ((m >> a) & 1u) == 0;
      violated |= body;
    }
    if (!violated) out.insert(m);
  }
  return out;
}

// Information gain written out directly.
inline double information_gain(double p0, double n0, double p1, double n1, double t) {
  if (t == 0 || p1 == 0) return -INFINITY;
  return t * (std::log2(p1 / (p1 + n1)) - std::log2(p0 / (p0 + n0)));
}

struct Counts {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
};

inline double mcc(double tp, double tn, double fp, double fn) {
  double d = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (d == 0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(d);
}

// Proper 3-colourings of a graph, as vectors of colour indices.
inline std::vector<std::vector<int>> colourings(int nodes, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> out;
  int total = 1;
  for (int i = 0; i < nodes; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    std::vector<int> c(nodes);
    int x = code;
    for (int i = 0; i < nodes; ++i) {
      c[i] = x % 3;
      x /= 3;
    }
    bool ok = true;
    for (auto [a, b] : edges) ok &= c[a] != c[b];
    if (ok) out.push_back(c);
  }
  return out;
}

// Non-attacking placements of n queens, as sets of (row, col) pairs, found
// by scanning every n-subset of the board.
inline std::vector<std::set<std::pair<int, int>>> queens(int n) {
  std::vector<std::set<std::pair<int, int>>> out;
  int cells = n * n;
  std::vector<int> pick(n);
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == n) {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        for (int j = i + 1; j < n && ok; ++j) {
          int r1 = pick[i] / n, c1 = pick[i] % n, r2 = pick[j] / n, c2 = pick[j] % n;
          if (r1 == r2 || c1 == c2 || std::abs(r1 - r2) == std::abs(c1 - c2)) ok = false;
        }
      }
      if (ok) {
        std::set<std::pair<int, int>> s;
        for (int i = 0; i < n; ++i) s.insert({pick[i] / n + 1, pick[i] % n + 1});
        out.push_back(s);
      }
      return;
    }
    for (int c = start; c < cells; ++c) {
      pick[depth] = c;
      self(self, c + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

}  // namespace oracle

#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace magnus {

// A word over variable indices (1-based: 1 means X1).
using Word = std::vector<int>;

// Graded lexicographic order: by length first, then letterwise.
struct WordLess {
  bool operator()(const Word &a, const Word &b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

inline std::string word_str(const Word &w) {
  if (w.empty()) return "1";
  std::string s;
  for (int v : w) s += "X" + std::to_string(v);
  return s;
}

inline Word word_cat(const Word &a, const Word &b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

// Number of strict descents (w[i] > w[i+1]) in a sequence of reals/indices.
inline int descents(const Word &w) {
  int d = 0;
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] > w[i + 1]) ++d;
  return d;
}

// Number of strict ascents (w[i] < w[i+1]).
inline int ascents(const Word &w) {
  int a = 0;
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] < w[i + 1]) ++a;
  return a;
}

}  // namespace magnus

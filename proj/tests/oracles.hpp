#pragma once

// Test-only reference implementations. Nothing here calls into the
// permutation-analysis code it is used to check.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace qvar::testing {

using Mapping = std::vector<std::uint32_t>;

// Every bijection fixing 0 with a_i < b_{p(i)}, via std::next_permutation over
// all n! orderings. Output is lexicographic.
inline std::vector<Mapping> BruteForceRealizable(const std::vector<double>& a,
                                                 const std::vector<double>& b) {
  const std::size_t n = a.size();
  Mapping p(n);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<Mapping> out;
  do {
    if (p[0] != 0) continue;
    bool ok = true;
    for (std::size_t i = 1; i < n && ok; ++i) ok = a[i] < b[p[i]];
    if (ok) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// LCFS as a serving rule: at each service start, the latest arrival among
// customers already present and not yet served.
inline Mapping ServeLatestArrival(const std::vector<double>& a,
                                  const std::vector<double>& b) {
  const std::size_t n = a.size();
  Mapping p(n, 0);
  std::vector<bool> served(n, false);
  served[0] = true;
  for (std::size_t j = 1; j < n; ++j) {
    std::size_t pick = n;
    for (std::size_t i = 1; i < n; ++i) {
      if (!served[i] && a[i] < b[j]) pick = i;
    }
    served[pick] = true;
    p[pick] = static_cast<std::uint32_t>(j);
  }
  return p;
}

inline double BruteObjective(const std::vector<double>& a, const std::vector<double>& b,
                             const Mapping& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += a[i] * b[p[i]];
  return s;
}

inline std::size_t BruteBadPairs(const std::vector<double>& a, const std::vector<double>& b,
                                 const Mapping& p) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (a[i] < a[j] && a[j] < b[p[i]] && b[p[i]] < b[p[j]]) ++count;
    }
  }
  return count;
}

}  // namespace qvar::testing

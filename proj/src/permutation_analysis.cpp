#include "qvar/permutation_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qvar/rng.hpp"

namespace qvar {

namespace {

struct Paren {
  bool left;  // arrival
  std::uint32_t index;
};

// a_2..a_n and b_2..b_n merged in time order. Timestamps are distinct.
std::vector<Paren> MergedTimeline(const BusyPeriod& bp) {
  const std::size_t n = bp.size();
  std::vector<Paren> out;
  out.reserve(2 * (n - 1));
  std::size_t i = 1, j = 1;
  while (i < n || j < n) {
    if (j >= n || (i < n && bp.arrival(i) < bp.service_start(j))) {
      out.push_back({true, static_cast<std::uint32_t>(i++)});
    } else {
      out.push_back({false, static_cast<std::uint32_t>(j++)});
    }
  }
  return out;
}

void RequireRealizable(const BusyPeriod& bp, const Permutation& p) {
  if (p.size() != bp.size()) {
    throw Error(ErrorCode::kSizeMismatch, "permutation size differs from busy period");
  }
  if (!IsRealizable(bp, p)) {
    throw Error(ErrorCode::kNotRealizable, p.ToString() + " is not realizable");
  }
}

// Sum of (a_i - a_1)(b_{p(i)} - a_1). It differs from the objective by a
// constant that does not depend on p, so it ranks permutations identically,
// but its magnitude follows the busy period's length rather than the
// absolute clock. Accumulated with an error-free product/sum (Dot2).
double RankingObjective(const BusyPeriod& bp, const Permutation& p) {
  const double origin = bp.arrival(0);
  double sum = 0.0, err = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const double x = bp.arrival(i) - origin;
    const double y = bp.service_start(p[i]) - origin;
    const double prod = x * y;
    const double prod_err = std::fma(x, y, -prod);
    const double t = sum + prod;
    const double z = t - sum;
    err += (sum - (t - z)) + (prod - z) + prod_err;
    sum = t;
  }
  return sum + err;
}

}  // namespace

Permutation LcfsPermutation(const BusyPeriod& bp) {
  std::vector<std::uint32_t> tau(bp.size(), 0);
  std::vector<std::uint32_t> stack;
  for (const Paren& e : MergedTimeline(bp)) {
    if (e.left) {
      stack.push_back(e.index);
    } else {
      // Feasibility guarantees the stack is nonempty here.
      tau[stack.back()] = e.index;
      stack.pop_back();
    }
  }
  return Permutation(std::move(tau));
}

Permutation FcfsPermutation(const BusyPeriod& bp) {
  return Permutation::Identity(bp.size());
}

void ForEachRealizable(const BusyPeriod& bp,
                       const std::function<void(const Permutation&)>& visit,
                       std::size_t max_n) {
  const std::size_t n = bp.size();
  if (n > max_n) {
    throw Error(ErrorCode::kTooLarge, "n = " + std::to_string(n) +
                                          " exceeds enumeration cap " +
                                          std::to_string(max_n));
  }
  std::vector<std::uint32_t> map(n, 0);
  std::vector<bool> used(n, false);
  used[0] = true;

  // Recursive lambda over the next customer to assign.
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      visit(Permutation(map));
      return;
    }
    for (std::size_t j = 1; j < n; ++j) {
      if (used[j] || !(bp.arrival(i) < bp.service_start(j))) continue;
      used[j] = true;
      map[i] = static_cast<std::uint32_t>(j);
      self(self, i + 1);
      used[j] = false;
    }
  };
  recurse(recurse, 1);
}

std::vector<Permutation> EnumerateRealizable(const BusyPeriod& bp,
                                             std::size_t max_n) {
  std::vector<Permutation> out;
  ForEachRealizable(
      bp, [&](const Permutation& p) { out.push_back(p); }, max_n);
  return out;
}

std::vector<BadPair> BadPairs(const BusyPeriod& bp, const Permutation& p) {
  RequireRealizable(bp, p);
  std::vector<BadPair> out;
  const std::size_t n = bp.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double served_i = bp.service_start(p[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      // a_i < a_j holds by sortedness.
      if (bp.arrival(j) < served_i && served_i < bp.service_start(p[j])) {
        out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
      }
    }
  }
  return out;
}

std::size_t CountBadPairs(const BusyPeriod& bp, const Permutation& p) {
  return BadPairs(bp, p).size();
}

SwapResult ProofSwap(const BusyPeriod& bp, const Permutation& p) {
  if (CountBadPairs(bp, p) == 0) {
    throw Error(ErrorCode::kNoBadPairs, p.ToString() + " has no bad pairs");
  }
  const std::vector<Paren> line = MergedTimeline(bp);
  const std::size_t m = line.size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  // Doubly linked list over the time line; deleting a matched pair is O(1).
  std::vector<std::size_t> next(m), prev(m);
  for (std::size_t e = 0; e < m; ++e) {
    next[e] = e + 1 < m ? e + 1 : kNone;
    prev[e] = e == 0 ? kNone : e - 1;
  }
  std::size_t head = m ? 0 : kNone;
  auto unlink = [&](std::size_t e) {
    if (prev[e] != kNone) next[prev[e]] = next[e];
    else head = next[e];
    if (next[e] != kNone) prev[next[e]] = prev[e];
  };

  const Permutation inverse = p.Inverse();
  SwapResult result;
  std::size_t cur = head;
  while (cur != kNone) {
    const std::size_t nx = next[cur];
    if (!line[cur].left || nx == kNone || line[nx].left) {
      cur = nx;
      continue;
    }
    const std::uint32_t k = line[cur].index;
    const std::uint32_t l = line[nx].index;
    if (p[k] == l) {
      result.reductions.emplace_back(k, l);
      const std::size_t back = prev[cur];
      unlink(cur);
      unlink(nx);
      cur = back != kNone ? back : head;
      continue;
    }
    const std::uint32_t i = inverse[l];
    result.permutation = p.Swapped(i, k);
    result.i = std::min(i, k);
    result.k = std::max(i, k);
    return result;
  }
  throw std::logic_error("ProofSwap: no swap site although bad pairs exist");
}

std::size_t DescentTrace::swap_count() const {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const DescentStep& s) {
        return s.kind == DescentStep::Kind::kSwap;
      }));
}

DescentTrace DescentToLcfs(const BusyPeriod& bp, const Permutation& p) {
  DescentTrace trace;
  trace.start = p;
  Permutation cur = p;
  std::size_t bad = CountBadPairs(bp, cur);
  trace.initial_bad_pairs = bad;
  double obj = ObjectiveA(bp, cur);
  while (bad > 0) {
    SwapResult swap = ProofSwap(bp, cur);
    for (const auto& [k, l] : swap.reductions) {
      trace.steps.push_back({DescentStep::Kind::kRemoveReduction, cur, cur, obj,
                             obj, bad, bad, k, l});
    }
    const double next_obj = ObjectiveA(bp, swap.permutation);
    const std::size_t next_bad = CountBadPairs(bp, swap.permutation);
    trace.steps.push_back({DescentStep::Kind::kSwap, cur, swap.permutation, obj,
                           next_obj, bad, next_bad, swap.i, swap.k});
    cur = std::move(swap.permutation);
    obj = next_obj;
    bad = next_bad;
  }
  trace.final_permutation = std::move(cur);
  return trace;
}

ExtremalityReport CheckExtremality(const BusyPeriod& bp, std::size_t max_n) {
  ExtremalityReport r;
  r.n = bp.size();
  const Permutation tau = LcfsPermutation(bp);
  double lo = 0.0, hi = 0.0;
  bool first = true;
  ForEachRealizable(
      bp,
      [&](const Permutation& p) {
        ++r.realizable_count;
        const double a = RankingObjective(bp, p);
        if (first || a < lo) {
          lo = a;
          r.argmin = p;
        }
        if (first || a > hi) {
          hi = a;
          r.argmax = p;
        }
        first = false;
        if (CountBadPairs(bp, p) == 0) {
          ++r.zero_bad_pair_members;
          if (p == tau) r.zero_bad_pair_member_is_lcfs = true;
        }
      },
      max_n);
  const Permutation identity = Permutation::Identity(bp.size());
  r.min_a = ObjectiveA(bp, r.argmin);
  r.max_a = ObjectiveA(bp, r.argmax);
  r.lcfs_a = ObjectiveA(bp, tau);
  r.identity_a = ObjectiveA(bp, identity);
  r.lcfs_attains_min = RankingObjective(bp, tau) == lo;
  r.identity_attains_max = RankingObjective(bp, identity) == hi;
  return r;
}

Permutation RandomRealizable(const BusyPeriod& bp, std::mt19937_64& rng) {
  const std::size_t n = bp.size();
  std::vector<std::uint32_t> map(n, 0);
  std::vector<bool> used(n, false);
  std::vector<std::uint32_t> candidates;
  for (std::size_t i = n; i-- > 1;) {
    candidates.clear();
    for (std::size_t j = 1; j < n; ++j) {
      if (!used[j] && bp.arrival(i) < bp.service_start(j)) {
        candidates.push_back(static_cast<std::uint32_t>(j));
      }
    }
    const auto pick = candidates[UniformIndex(rng, candidates.size())];
    used[pick] = true;
    map[i] = pick;
  }
  return Permutation(std::move(map));
}

BusyPeriod RandomBusyPeriod(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "n must be positive");
  const std::size_t m = n - 1;
  std::vector<bool> left(2 * m);
  for (;;) {
    std::fill(left.begin(), left.begin() + m, true);
    std::fill(left.begin() + m, left.end(), false);
    for (std::size_t x = left.size(); x > 1; --x) {
      const auto y = UniformIndex(rng, x);
      const bool tmp = left[x - 1];
      left[x - 1] = left[y];
      left[y] = tmp;
    }
    std::ptrdiff_t depth = 0;
    bool ballot = true;
    for (bool l : left) {
      depth += l ? 1 : -1;
      if (depth < 0) {
        ballot = false;
        break;
      }
    }
    if (ballot) break;
  }
  std::vector<double> a{0.0}, b{0.0};
  double t = 0.0;
  for (bool l : left) {
    double gap;
    do {
      gap = -std::log(UnitInterval(rng));
    } while (!(t + gap > t));
    t += gap;
    (l ? a : b).push_back(t);
  }
  return ValidateBusyPeriod(std::move(a), std::move(b));
}

}  // namespace qvar

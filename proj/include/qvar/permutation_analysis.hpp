#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qvar/busy_period.hpp"

namespace qvar {

inline constexpr std::size_t kDefaultMaxEnumerate = 10;

/// Customers i < j (0-based) with a_i < a_j < b_{p(i)} < b_{p(j)}: two
/// customers that could have been served in either order but were served in
/// arrival order.
struct BadPair {
  std::uint32_t i;
  std::uint32_t j;
  friend bool operator==(const BadPair&, const BadPair&) = default;
};

/// Stack matching of arrivals (left parens) with service starts (right
/// parens) on the merged time line.
Permutation LcfsPermutation(const BusyPeriod& bp);

Permutation FcfsPermutation(const BusyPeriod& bp);

/// Calls `visit` for every member of the realizable set, in lexicographic
/// order. Throws kTooLarge when bp.size() > max_n.
void ForEachRealizable(const BusyPeriod& bp,
                       const std::function<void(const Permutation&)>& visit,
                       std::size_t max_n = kDefaultMaxEnumerate);

std::vector<Permutation> EnumerateRealizable(
    const BusyPeriod& bp, std::size_t max_n = kDefaultMaxEnumerate);

/// Lexicographic order. Throws kNotRealizable.
std::vector<BadPair> BadPairs(const BusyPeriod& bp, const Permutation& p);
std::size_t CountBadPairs(const BusyPeriod& bp, const Permutation& p);

struct SwapResult {
  Permutation permutation;
  // Swapped customers, i < k, 0-based.
  std::uint32_t i = 0;
  std::uint32_t k = 0;
  // (customer, service start) pairs already matched as in LCFS that were
  // removed before the swap site was found, in removal order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> reductions;
};

/// One improving exchange. Scans the merged time line of the still-active
/// a_2..a_n, b_2..b_n for the first arrival immediately followed by a
/// service start b_l. If p already serves that customer at b_l the pair is
/// deleted and the scan resumes; otherwise the customer k is swapped with the
/// customer currently holding b_l. Throws kNoBadPairs if p is already LCFS.
SwapResult ProofSwap(const BusyPeriod& bp, const Permutation& p);

struct DescentStep {
  enum class Kind { kSwap, kRemoveReduction };
  Kind kind;
  Permutation before;
  Permutation after;
  double objective_before;
  double objective_after;
  std::size_t bad_pairs_before;
  std::size_t bad_pairs_after;
  // kSwap: the swapped customers. kRemoveReduction: (customer, service start).
  std::uint32_t first;
  std::uint32_t second;
};

struct DescentTrace {
  Permutation start;
  Permutation final_permutation;
  std::vector<DescentStep> steps;
  std::size_t initial_bad_pairs = 0;

  std::size_t swap_count() const;
};

/// Applies ProofSwap until no bad pairs remain.
DescentTrace DescentToLcfs(const BusyPeriod& bp, const Permutation& p);

struct ExtremalityReport {
  std::size_t n = 0;
  std::size_t realizable_count = 0;
  // Permutations are ranked by an equivalent objective measured from a_1,
  // which stays well conditioned when timestamps are far from zero; the
  // *_a fields report the plain ObjectiveA of each permutation.
  double min_a = 0.0;
  double max_a = 0.0;
  // First minimizer and maximizer in lexicographic order.
  Permutation argmin;
  Permutation argmax;
  double lcfs_a = 0.0;
  double identity_a = 0.0;
  bool lcfs_attains_min = false;
  bool identity_attains_max = false;
  // Members of the realizable set without bad pairs; exactly one is expected.
  std::size_t zero_bad_pair_members = 0;
  bool zero_bad_pair_member_is_lcfs = false;

  bool holds() const {
    return lcfs_attains_min && identity_attains_max &&
           zero_bad_pair_members == 1 && zero_bad_pair_member_is_lcfs;
  }
};

ExtremalityReport CheckExtremality(const BusyPeriod& bp,
                                   std::size_t max_n = kDefaultMaxEnumerate);

/// A random member of the realizable set. Customers are assigned from the
/// last arrival backwards so the nested candidate sets never run dry.
Permutation RandomRealizable(const BusyPeriod& bp, std::mt19937_64& rng);

/// A random valid busy period of n customers: a uniformly random ballot
/// interleaving of a_2..a_n with b_2..b_n, with exponential gaps between
/// consecutive timestamps, starting at a_1 = b_1 = 0.
BusyPeriod RandomBusyPeriod(std::size_t n, std::mt19937_64& rng);

}  // namespace qvar

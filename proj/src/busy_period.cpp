#include "qvar/busy_period.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qvar {

namespace {

void CheckSorted(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw Error(ErrorCode::kNotSorted,
                  std::string(name) + " contains a non-finite timestamp");
    }
    if (i > 0 && !(v[i - 1] < v[i])) {
      throw Error(ErrorCode::kNotSorted,
                  std::string(name) + " is not strictly increasing at index " +
                      std::to_string(i + 1));
    }
  }
}

void CheckSize(const BusyPeriod& bp, const Permutation& p) {
  if (p.size() != bp.size()) {
    throw Error(ErrorCode::kSizeMismatch,
                "permutation of size " + std::to_string(p.size()) +
                    " against busy period of size " + std::to_string(bp.size()));
  }
}

}  // namespace

BusyPeriod ValidateBusyPeriod(std::vector<double> arrivals,
                              std::vector<double> service_starts) {
  if (arrivals.empty() || service_starts.empty()) {
    throw Error(ErrorCode::kEmptyInput, "busy period needs at least one customer");
  }
  if (arrivals.size() != service_starts.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(arrivals.size()) + " arrivals vs " +
                    std::to_string(service_starts.size()) + " service starts");
  }
  CheckSorted(arrivals, "arrivals");
  CheckSorted(service_starts, "service_starts");

  // Exact comparison: the simulator copies a_1 into b_1.
  if (arrivals.front() != service_starts.front()) {
    throw Error(ErrorCode::kFirstServiceNotImmediate, "a_1 != b_1");
  }

  // Both tails are strictly sorted, so a tie can only be between the two.
  std::vector<double> tail;
  tail.reserve(2 * arrivals.size());
  tail.insert(tail.end(), arrivals.begin() + 1, arrivals.end());
  tail.insert(tail.end(), service_starts.begin() + 1, service_starts.end());
  std::sort(tail.begin(), tail.end());
  if (std::adjacent_find(tail.begin(), tail.end()) != tail.end()) {
    throw Error(ErrorCode::kDuplicateTimestamp,
                "a_2..a_n and b_2..b_n must be pairwise distinct");
  }

  for (std::size_t i = 1; i < arrivals.size(); ++i) {
    if (!(arrivals[i] < service_starts[i])) {
      throw Error(ErrorCode::kInfeasible,
                  "a_" + std::to_string(i + 1) + " >= b_" + std::to_string(i + 1));
    }
  }
  return BusyPeriod(std::move(arrivals), std::move(service_starts));
}

Permutation::Permutation(std::vector<std::uint32_t> zero_based)
    : map_(std::move(zero_based)) {
  std::vector<bool> seen(map_.size(), false);
  for (auto v : map_) {
    if (v >= map_.size() || seen[v]) {
      throw Error(ErrorCode::kNotBijection, "mapping is not a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::Identity(std::size_t n) {
  std::vector<std::uint32_t> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<std::uint32_t>(i);
  Permutation p;
  p.map_ = std::move(m);
  return p;
}

Permutation Permutation::FromOneBased(std::span<const std::int64_t> one_based) {
  std::vector<std::uint32_t> m;
  m.reserve(one_based.size());
  for (auto v : one_based) {
    if (v < 1 || static_cast<std::uint64_t>(v) > one_based.size()) {
      throw Error(ErrorCode::kNotBijection, "index out of range");
    }
    m.push_back(static_cast<std::uint32_t>(v - 1));
  }
  return Permutation(std::move(m));
}

std::vector<std::int64_t> Permutation::OneBased() const {
  std::vector<std::int64_t> out(map_.begin(), map_.end());
  for (auto& v : out) ++v;
  return out;
}

Permutation Permutation::Inverse() const {
  Permutation inv;
  inv.map_.resize(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) {
    inv.map_[map_[i]] = static_cast<std::uint32_t>(i);
  }
  return inv;
}

Permutation Permutation::Swapped(std::size_t i, std::size_t k) const {
  Permutation out = *this;
  std::swap(out.map_.at(i), out.map_.at(k));
  return out;
}

std::string Permutation::ToString() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (i) os << ',';
    os << map_[i] + 1;
  }
  os << ')';
  return os.str();
}

bool IsRealizable(const BusyPeriod& bp, const Permutation& p) {
  if (p.size() != bp.size() || p[0] != 0) return false;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (!(bp.arrival(i) < bp.service_start(p[i]))) return false;
  }
  return true;
}

double ObjectiveA(const BusyPeriod& bp, const Permutation& p) {
  CheckSize(bp, p);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += bp.arrival(i) * bp.service_start(p[i]);
  }
  return sum;
}

std::vector<double> WaitingTimes(const BusyPeriod& bp, const Permutation& p) {
  CheckSize(bp, p);
  if (!IsRealizable(bp, p)) {
    throw Error(ErrorCode::kNotRealizable,
                p.ToString() + " is not realizable for this busy period");
  }
  std::vector<double> w(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    w[i] = bp.service_start(p[i]) - bp.arrival(i);
  }
  return w;
}

double SumSqWait(const BusyPeriod& bp, const Permutation& p) {
  const auto w = WaitingTimes(bp, p);
  double sum = 0.0;
  for (double x : w) sum += x * x;
  return sum / static_cast<double>(w.size());
}

}  // namespace qvar

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qvar/error.hpp"

namespace qvar {

/// Timestamps of one busy period: arrivals a_1 < ... < a_n and service
/// starts b_1 < ... < b_n with a_1 == b_1, a_i < b_i, and no ties among
/// a_2..a_n, b_2..b_n. Instances only come out of ValidateBusyPeriod.
class BusyPeriod {
 public:
  std::size_t size() const noexcept { return arrivals_.size(); }

  std::span<const double> arrivals() const noexcept { return arrivals_; }
  std::span<const double> service_starts() const noexcept {
    return service_starts_;
  }

  // 0-based accessors.
  double arrival(std::size_t i) const { return arrivals_[i]; }
  double service_start(std::size_t j) const { return service_starts_[j]; }

 private:
  friend BusyPeriod ValidateBusyPeriod(std::vector<double>,
                                       std::vector<double>);
  BusyPeriod(std::vector<double> a, std::vector<double> b)
      : arrivals_(std::move(a)), service_starts_(std::move(b)) {}

  std::vector<double> arrivals_;
  std::vector<double> service_starts_;
};

BusyPeriod ValidateBusyPeriod(std::vector<double> arrivals,
                              std::vector<double> service_starts);

/// A bijection on {0..n-1}. Entry i is the index of the service start given
/// to the customer with the i-th arrival. Textual and JSON forms are 1-based.
class Permutation {
 public:
  Permutation() = default;
  // Throws kNotBijection.
  explicit Permutation(std::vector<std::uint32_t> zero_based);

  static Permutation Identity(std::size_t n);
  static Permutation FromOneBased(std::span<const std::int64_t> one_based);

  std::size_t size() const noexcept { return map_.size(); }
  std::uint32_t operator[](std::size_t i) const { return map_[i]; }
  std::span<const std::uint32_t> zero_based() const noexcept { return map_; }
  std::vector<std::int64_t> OneBased() const;
  Permutation Inverse() const;
  Permutation Swapped(std::size_t i, std::size_t k) const;

  // "(1,3,2)"
  std::string ToString() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> map_;
};

/// True when p(0) == 0 and a_i < b_{p(i)} for every i >= 1.
bool IsRealizable(const BusyPeriod& bp, const Permutation& p);

/// Sum of a_i * b_{p(i)} accumulated in index order.
double ObjectiveA(const BusyPeriod& bp, const Permutation& p);

/// b_{p(i)} - a_i for each customer. Throws kNotRealizable.
std::vector<double> WaitingTimes(const BusyPeriod& bp, const Permutation& p);

/// (1/n) * sum of squared waits; this busy period's share of E[W^2].
double SumSqWait(const BusyPeriod& bp, const Permutation& p);

}  // namespace qvar

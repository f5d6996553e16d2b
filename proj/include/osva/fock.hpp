#pragma once

#include "osva/modes.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace osva {

/// Bosonic Fock space: basis a(-l_1) ... a(-l_k) 1 for partitions l of weight
/// <= cutoff, as unnormalized monomials. [a(m), a(n)] = m delta_{m+n,0}, a(0) = 0.
class FockSpace {
 public:
  using Partition = std::vector<int>;  // nonincreasing positive parts

  explicit FockSpace(int cutoff);

  int cutoff() const { return cutoff_; }
  std::size_t size() const { return parts_.size(); }
  const Partition& partition(std::size_t i) const { return parts_[i]; }
  int weight(std::size_t i) const { return weights_[i]; }
  std::optional<std::size_t> index_of(const Partition& p) const;
  std::string label(std::size_t i) const;
  GradedSpace graded_space() const;

  /// a(m) on a vector; components above the cutoff are dropped.
  GradedVector alpha(int m, const GradedVector& v) const;
  /// u_n w for basis u, w, exact. Recursion on the largest part of u.
  GradedVector mode(std::size_t u, long n, std::size_t w) const;
  GradedVector D(std::size_t v) const;
  /// L(m) = 1/2 sum_j :a(j) a(m-j):, computed from the oscillators directly.
  GradedVector L(long m, std::size_t v) const;

 private:
  GradedVector mode_of_vector(std::size_t u, long n, const GradedVector& w) const;

  int cutoff_;
  std::vector<Partition> parts_;
  std::vector<int> weights_;
  std::map<Partition, std::size_t> index_;
  mutable std::map<std::tuple<std::size_t, long, std::size_t>, GradedVector> memo_;
};

}  // namespace osva

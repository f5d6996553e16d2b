#include "osva/fock.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace osva {

FockSpace::FockSpace(int cutoff) : cutoff_(cutoff) {
  // Weight ascending; within a weight, partitions in decreasing lexicographic order.
  std::function<void(int, int, Partition&)> emit = [&](int remaining, int largest, Partition& p) {
    if (remaining == 0) {
      index_.emplace(p, parts_.size());
      parts_.push_back(p);
      weights_.push_back(std::accumulate(p.begin(), p.end(), 0));
      return;
    }
    for (int k = std::min(remaining, largest); k >= 1; --k) {
      p.push_back(k);
      emit(remaining - k, k, p);
      p.pop_back();
    }
  };
  for (int w = 0; w <= cutoff; ++w) {
    Partition p;
    emit(w, w, p);
  }
}

std::optional<std::size_t> FockSpace::index_of(const Partition& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string FockSpace::label(std::size_t i) const {
  const Partition& p = parts_[i];
  if (p.empty()) return "1";
  std::ostringstream os;
  for (std::size_t t = 0; t < p.size();) {
    std::size_t e = t;
    while (e < p.size() && p[e] == p[t]) ++e;
    os << "a(-" << p[t] << ")";
    if (e - t > 1) os << "^" << (e - t);
    t = e;
  }
  os << " 1";
  return os.str();
}

GradedSpace FockSpace::graded_space() const {
  GradedSpace s;
  s.cutoff = Rational(cutoff_);
  for (std::size_t i = 0; i < size(); ++i) {
    s.labels.push_back(label(i));
    s.weights.emplace_back(weights_[i]);
  }
  return s;
}

GradedVector FockSpace::alpha(int m, const GradedVector& v) const {
  GradedVector out;
  if (m == 0) return out;
  for (const auto& [i, c] : v.coeffs()) {
    Partition p = parts_[i];
    if (m < 0) {
      if (weights_[i] - m > cutoff_) continue;
      p.insert(std::upper_bound(p.begin(), p.end(), -m, std::greater<>()), -m);
      out.add(index_.at(p), c);
    } else {
      auto first = std::find(p.begin(), p.end(), m);
      if (first == p.end()) continue;
      const long count = std::count(p.begin(), p.end(), m);
      p.erase(first);
      out.add(index_.at(p), c * Rational(m * count));
    }
  }
  return out;
}

GradedVector FockSpace::mode_of_vector(std::size_t u, long n, const GradedVector& w) const {
  GradedVector out;
  for (const auto& [j, c] : w.coeffs()) out += c * mode(u, n, j);
  return out;
}

GradedVector FockSpace::mode(std::size_t u, long n, std::size_t w) const {
  const long target = weights_[u] + weights_[w] - n - 1;
  if (target < 0 || target > cutoff_) return {};
  if (parts_[u].empty()) return n == -1 ? GradedVector::basis(w) : GradedVector{};
  auto key = std::make_tuple(u, n, w);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  // u = a(-k) v: (a(-k)v)_n = sum_{m<0} b(m) a(m) v_{n-m-k} + sum_{m>0} b(m) v_{n-m-k} a(m),
  // b(m) = binom(-m-1, k-1), the coefficient of x^{-m-k} in d^{k-1}a(x)/(k-1)!.
  const int k = parts_[u].front();
  const std::size_t v = index_.at(Partition(parts_[u].begin() + 1, parts_[u].end()));
  GradedVector out;
  for (long m = -target; m <= -1; ++m) {
    Rational b = binomial(-m - 1, k - 1);
    if (b.is_zero()) continue;
    GradedVector inner = mode(v, n - m - k, w);
    if (!inner.is_zero()) out += b * alpha(static_cast<int>(m), inner);
  }
  for (long m = 1; m <= weights_[w]; ++m) {
    GradedVector aw = alpha(static_cast<int>(m), GradedVector::basis(w));
    if (aw.is_zero()) continue;
    out += binomial(-m - 1, k - 1) * mode_of_vector(v, n - m - k, aw);
  }
  memo_.emplace(key, out);
  return out;
}

GradedVector FockSpace::D(std::size_t v) const {
  GradedVector out;
  if (weights_[v] + 1 > cutoff_) return out;
  const Partition& p = parts_[v];
  for (std::size_t t = 0; t < p.size(); ++t) {
    Partition q = p;
    q.erase(q.begin() + static_cast<long>(t));
    q.insert(std::upper_bound(q.begin(), q.end(), p[t] + 1, std::greater<>()), p[t] + 1);
    out.add(index_.at(q), Rational(p[t]));
  }
  return out;
}

GradedVector FockSpace::L(long m, std::size_t v) const {
  GradedVector out;
  const long w = weights_[v];
  if (w - m < 0 || w - m > cutoff_) return out;
  const GradedVector basis_v = GradedVector::basis(v);
  for (long a = m - w; a <= w; ++a) {
    const long b = m - a;
    const long lo = std::min(a, b), hi = std::max(a, b);
    GradedVector t = alpha(static_cast<int>(hi), basis_v);
    if (t.is_zero()) continue;
    out += alpha(static_cast<int>(lo), t);
  }
  out *= Rational(1, 2);
  return out;
}

}  // namespace osva

#pragma once

#include "osva/report.hpp"
#include "osva/scalars.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace osva {

/// Truncated weight-graded space: every retained basis vector has weight <= cutoff.
struct GradedSpace {
  std::vector<std::string> labels;
  std::vector<Rational> weights;
  Rational cutoff;

  std::size_t size() const { return labels.size(); }
  /// Ascending list of the weights that occur.
  std::vector<Rational> distinct_weights() const;
  std::vector<std::size_t> basis_of_weight(const Rational& w) const;
  std::optional<std::size_t> index_of(const std::string& label) const;
};

/// Sparse vector over the basis with exact coefficients. Also used for dual
/// vectors, read as coefficient functionals against the basis.
class GradedVector {
 public:
  GradedVector() = default;
  static GradedVector basis(std::size_t i, Rational c = Rational(1));

  const std::map<std::size_t, Rational>& coeffs() const { return c_; }
  Rational at(std::size_t i) const;
  void add(std::size_t i, const Rational& c);
  bool is_zero() const { return c_.empty(); }
  /// Components of weight w (the projection P_w).
  GradedVector project(const GradedSpace& space, const Rational& w) const;
  /// The single weight of a nonzero homogeneous vector.
  std::optional<Rational> homogeneous_weight(const GradedSpace& space) const;
  std::string to_string(const GradedSpace& space) const;

  GradedVector& operator+=(const GradedVector& o);
  GradedVector& operator-=(const GradedVector& o);
  GradedVector& operator*=(const Rational& s);
  friend GradedVector operator+(GradedVector a, const GradedVector& b) { return a += b; }
  friend GradedVector operator-(GradedVector a, const GradedVector& b) { return a -= b; }
  friend GradedVector operator*(const Rational& s, GradedVector v) { return v *= s; }
  friend bool operator==(const GradedVector&, const GradedVector&) = default;

 private:
  std::map<std::size_t, Rational> c_;  // no zero entries
};

/// Dense real coefficients over the basis; the only floating-point objects.
using RealVector = std::vector<double>;

RealVector to_real(const GradedSpace& space, const GradedVector& v);
double pair(const GradedVector& dual, const RealVector& v);

struct ConformalData {
  GradedVector omega;
  Rational central_charge;
};

/// One nonzero mode u_n v of a basis pair.
struct ModeTerm {
  Rational n;
  double exponent = 0.0;  // -n-1
  GradedVector exact;
  std::vector<std::pair<std::size_t, double>> real;
};

/// Basis-level actions supplied by a concrete instance. `mode` is only called
/// with output weight wt u + wt v - n - 1 inside the retained range.
struct InstanceBackend {
  std::function<GradedVector(std::size_t u, const Rational& n, std::size_t v)> mode;
  std::function<GradedVector(std::size_t v)> D;
  std::function<GradedVector(long m, std::size_t v)> L;  // empty without conformal data
};

/// An open-string vertex algebra truncated at a weight cutoff. Immutable after
/// construction; mode tables are computed on demand and cached behind a mutex.
class OsvaInstance {
 public:
  OsvaInstance(std::string name, GradedSpace space, GradedVector vacuum, InstanceBackend backend,
               std::optional<ConformalData> conformal);

  const std::string& name() const { return name_; }
  const GradedSpace& space() const { return space_; }
  const GradedVector& vacuum() const { return vacuum_; }
  bool has_conformal() const { return conformal_.has_value(); }
  /// Throws std::logic_error without conformal data.
  const ConformalData& conformal() const;
  const Rational& weight(std::size_t i) const { return space_.weights[i]; }
  const Rational& cutoff() const { return space_.cutoff; }
  const Rational& min_weight() const { return weights_.front(); }
  const std::vector<Rational>& distinct_weights() const { return weights_; }

  /// Nonzero modes of a basis pair, ascending in n.
  const std::vector<ModeTerm>& modes(std::size_t u, std::size_t v) const;
  /// u_n v for basis vectors; zero when the output weight is not retained.
  GradedVector mode(std::size_t u, const Rational& n, std::size_t v) const;
  /// Bilinear extension.
  GradedVector mode(const GradedVector& u, const Rational& n, const GradedVector& v) const;
  /// Every n with a retained output weight for inputs of weights wu, wv.
  std::vector<Rational> mode_indices(const Rational& wu, const Rational& wv) const;

  /// D, with components above the cutoff dropped.
  GradedVector D(const GradedVector& v) const;
  /// L(m), with components above the cutoff dropped.
  GradedVector L(long m, const GradedVector& v) const;
  const std::vector<std::pair<std::size_t, double>>& L_real(long m, std::size_t v) const;
  const std::vector<std::pair<std::size_t, double>>& D_real(std::size_t v) const;

 private:
  struct Cache;

  std::string name_;
  GradedSpace space_;
  GradedVector vacuum_;
  InstanceBackend backend_;
  std::optional<ConformalData> conformal_;
  std::vector<Rational> weights_;
  std::shared_ptr<Cache> cache_;
};

/// Y^O(u, r)v = sum_n u_n v r^{-n-1} for r > 0, summed over retained output weights.
RealVector vertex_eval(const OsvaInstance& inst, const GradedVector& u, double r, const GradedVector& v);
/// Real-coefficient form shared by every radius evaluation.
RealVector apply_vertex(const OsvaInstance& inst, const RealVector& u, double r, const RealVector& v);
/// e^{rD} Y^O(v, -r) u for r < 0, the exponential truncated at the cutoff.
RealVector opposite_vertex(const OsvaInstance& inst, const GradedVector& u, double r, const GradedVector& v);
/// e^{tD} on a real vector, truncated at the cutoff.
RealVector exp_D(const OsvaInstance& inst, double t, const RealVector& v);

struct ProductValue {
  double value = 0.0;
  double last_shell = 0.0;  // contribution of the top retained intermediate weight
  bool tail_warning = false;  // |last_shell| > 10% of |value|
};

/// <v', Y(u_1, r_1) ... Y(u_n, r_n) w> with r_1 > ... > r_n > 0.
ProductValue matrix_element_product(const OsvaInstance& inst, const GradedVector& dual,
                                    const std::vector<std::pair<GradedVector, double>>& factors,
                                    const GradedVector& w);
/// <v', Y(Y(u, r_0)v, r_2) w>, the intermediate projection summed to the cutoff.
double matrix_element_iterate(const OsvaInstance& inst, const GradedVector& dual, const GradedVector& u, double r0,
                              const GradedVector& v, double r2, const GradedVector& w);

struct AssociativitySample {
  GradedVector u, v, w, dual;
  double r1 = 1.0, r2 = 0.5;
};

CheckReport check_weight_bookkeeping(const OsvaInstance& inst);
CheckReport check_identity(const OsvaInstance& inst, const std::vector<double>& radii);
CheckReport check_associativity(const OsvaInstance& inst, const std::vector<AssociativitySample>& samples,
                                double tol);
/// Per-mode a^d Y(u, r) a^{-d} = Y(a^d u, a r) on homogeneous pairs.
CheckReport check_d_conjugation(const OsvaInstance& inst, const Rational& a,
                                const std::vector<std::pair<GradedVector, GradedVector>>& samples);
/// (Du)_m = -m u_{m-1} and [D, u_m] = -m u_{m-1} against every basis vector.
CheckReport check_D_derivative(const OsvaInstance& inst, const std::vector<GradedVector>& samples);
/// u_n 1 = 0 unless n <= -1, u_{-1} 1 = u, u_{-k-1} 1 = D^k u / k!.
CheckReport check_creation(const OsvaInstance& inst);
CheckReport check_weight_property(const OsvaInstance& inst, const Rational& n1, const Rational& n2);
/// Virasoro brackets for m, n in [lo, hi], plus L(0) = d and L(-1) = D.
CheckReport check_virasoro(const OsvaInstance& inst, long lo, long hi);
/// Integral weight, integral mode support and skew-symmetry against every basis vector.
CheckReport c0_membership(const OsvaInstance& inst, const GradedVector& u);

/// Basis vectors of weight <= max_weight, in basis order.
std::vector<std::size_t> basis_up_to(const OsvaInstance& inst, const Rational& max_weight);

}  // namespace osva

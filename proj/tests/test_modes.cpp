#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "osva/fock.hpp"
#include "osva/instances.hpp"
#include "osva/modes.hpp"

#include <cmath>

using namespace osva;

namespace {

// Partition numbers by the pentagonal recurrence, independent of FockSpace.
std::vector<long> partition_numbers(int n) {
  std::vector<long> p(n + 1, 0);
  p[0] = 1;
  for (int m = 1; m <= n; ++m)
    for (int k = 1;; ++k) {
      const int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
      if (g1 > m) break;
      const long sign = k % 2 ? 1 : -1;
      p[m] += sign * p[m - g1];
      if (g2 <= m) p[m] += sign * p[m - g2];
    }
  return p;
}

std::size_t idx(const FockSpace& f, FockSpace::Partition p) { return *f.index_of(p); }

// Three-vector toy with weights 0, 1/2, 1: 1 acts as identity, x_{-1}x = y, x_0 x = 1.
OsvaInstance half_weight_toy() {
  GradedSpace s;
  s.labels = {"1", "x", "y"};
  s.weights = {Rational(0), Rational(1, 2), Rational(1)};
  s.cutoff = Rational(1);
  InstanceBackend b;
  b.mode = [](std::size_t u, const Rational& n, std::size_t v) {
    if (u == 0) return n == Rational(-1) ? GradedVector::basis(v) : GradedVector{};
    if (v == 0) return n == Rational(-1) ? GradedVector::basis(u) : GradedVector{};
    if (u == 1 && v == 1 && n == Rational(-1)) return GradedVector::basis(2);
    if (u == 1 && v == 1 && n == Rational(0)) return GradedVector::basis(0);
    return GradedVector{};
  };
  b.D = [](std::size_t) { return GradedVector{}; };
  return OsvaInstance("toy", s, GradedVector::basis(0), b, std::nullopt);
}

}  // namespace

TEST_CASE("fock basis sizes follow partition numbers") {
  const auto p = partition_numbers(8);
  FockSpace f(8);
  std::vector<long> counts(9, 0);
  for (std::size_t i = 0; i < f.size(); ++i) ++counts[f.weight(i)];
  CHECK(counts == p);
  CHECK(p[4] == 5);
  CHECK(f.label(idx(f, {})) == "1");
  CHECK(f.label(idx(f, {2, 1, 1})) == "a(-2)a(-1)^2 1");
}

TEST_CASE("oscillator commutators") {
  FockSpace f(6);
  const GradedVector one = GradedVector::basis(idx(f, {}));
  CHECK(f.alpha(1, f.alpha(-1, one)) == one);
  CHECK(f.alpha(2, f.alpha(-2, one)) == Rational(2) * one);
  CHECK(f.alpha(0, GradedVector::basis(idx(f, {1}))).is_zero());
  // [a(m), a(n)] = m delta_{m+n,0} on vectors far enough below the cutoff.
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f.weight(v) > 3) continue;
    const GradedVector ev = GradedVector::basis(v);
    for (int m = -3; m <= 3; ++m)
      for (int n = -3; n <= 3; ++n) {
        const GradedVector c = f.alpha(m, f.alpha(n, ev)) - f.alpha(n, f.alpha(m, ev));
        CHECK(c == (m + n == 0 ? Rational(m) * ev : GradedVector{}));
      }
  }
}

TEST_CASE("modes of a(-1)1 are the oscillators") {
  FockSpace f(6);
  const std::size_t a = idx(f, {1});
  for (std::size_t w = 0; w < f.size(); ++w)
    for (long n = -4; n <= 4; ++n) CHECK(f.mode(a, n, w) == f.alpha(static_cast<int>(n), GradedVector::basis(w)));
}

TEST_CASE("L(0) is the weight and omega gives c = 1") {
  const OsvaInstance h = make_heisenberg_instance(6);
  FockSpace f(6);
  const std::size_t a2 = idx(f, {2});
  CHECK(h.L(0, GradedVector::basis(a2)) == Rational(2) * GradedVector::basis(a2));
  CHECK(h.conformal().central_charge == Rational(1));
  // <1, L(2) L(-2) 1> = c/2.
  const GradedVector one = h.vacuum();
  CHECK(h.L(2, h.L(-2, one)) == Rational(1, 2) * one);
}

TEST_CASE("two-point function") {
  const OsvaInstance h = make_heisenberg_instance(6);
  const GradedVector a = GradedVector::basis(*h.space().index_of("a(-1) 1"));
  for (double r : {0.5, 2.0, 3.0}) CHECK(pair(h.vacuum(), vertex_eval(h, a, r, a)) == doctest::Approx(1.0 / (r * r)));
  CHECK(pair(h.vacuum(), vertex_eval(h, a, 2.0, a)) == 0.25);
  CHECK_THROWS_AS(vertex_eval(h, a, -1.0, a), std::invalid_argument);
}

TEST_CASE("mode indices follow the weight invariant") {
  const OsvaInstance h = make_heisenberg_instance(4);
  const auto ns = h.mode_indices(Rational(1), Rational(2));
  // n = 1 + 2 - 1 - w for w = 0..4.
  std::vector<Rational> want;
  for (int w = 4; w >= 0; --w) want.push_back(Rational(2 - w));
  CHECK(ns == want);
  for (std::size_t u = 0; u < h.space().size(); ++u)
    for (std::size_t v = 0; v < h.space().size(); ++v)
      for (const ModeTerm& t : h.modes(u, v)) {
        CHECK(t.exponent == -(t.n + Rational(1)).to_double());
        for (const auto& [k, c] : t.exact.coeffs()) CHECK(h.weight(k) == h.weight(u) + h.weight(v) - t.n - Rational(1));
      }
}

TEST_CASE("exact checkers pass on heisenberg") {
  const OsvaInstance h = make_heisenberg_instance(6);
  std::vector<GradedVector> samples;
  std::vector<std::pair<GradedVector, GradedVector>> pairs;
  for (std::size_t i : basis_up_to(h, Rational(2))) {
    samples.push_back(GradedVector::basis(i));
    for (std::size_t j : basis_up_to(h, Rational(2))) pairs.emplace_back(GradedVector::basis(i), GradedVector::basis(j));
  }
  CHECK(check_weight_bookkeeping(h).passed);
  CHECK(check_identity(h, {0.3, 1.0, 4.0}).passed);
  CHECK(check_creation(h).passed);
  CHECK(check_d_conjugation(h, Rational(3), pairs).passed);
  CHECK(check_D_derivative(h, samples).passed);
  CHECK(check_virasoro(h, -3, 3).passed);
  CHECK(c0_membership(h, h.vacuum()).passed);
}

TEST_CASE("checkers catch a corrupted mode table") {
  FockSpace f(5);
  const std::size_t a = idx(f, {1});
  InstanceBackend b;
  b.mode = [&f, a](std::size_t u, const Rational& n, std::size_t v) {
    GradedVector out = f.mode(u, n.to_long(), v);
    // u_{-1}1 = u broken for a single vector.
    if (u == a && v == 0 && n == Rational(-1)) out = Rational(2) * out;
    return out;
  };
  b.D = [&f](std::size_t v) { return f.D(v); };
  const OsvaInstance bad("bad", f.graded_space(), GradedVector::basis(0), b, std::nullopt);
  const CheckReport creation = check_creation(bad);
  CHECK_FALSE(creation.passed);
  REQUIRE_FALSE(creation.witnesses.empty());
}

TEST_CASE("weight property on fractional weights") {
  const OsvaInstance toy = half_weight_toy();
  const CheckReport r = check_weight_property(toy, Rational(1, 2), Rational(1, 2));
  CHECK(r.checked == 2);
  CHECK(r.notes.front() == "offsets {0}");
  CHECK_FALSE(c0_membership(toy, GradedVector::basis(1)).passed);
}

TEST_CASE("associativity residual shrinks with the cutoff but stays above 1e-4") {
  std::vector<AssociativitySample> samples;
  const OsvaInstance h8 = make_heisenberg_instance(8);
  const GradedVector one = h8.vacuum();
  const GradedVector a = GradedVector::basis(*h8.space().index_of("a(-1) 1"));
  samples.push_back({a, one, a, one, 1.0, 0.6});
  double previous = INFINITY;
  for (int cutoff : {8, 10, 12}) {
    const double r = check_associativity(make_heisenberg_instance(cutoff), samples, 1e-4).residual;
    CHECK(r < previous);
    CHECK(r > 1e-4);
    previous = r;
  }
  // Product side is exact here: <1, Y(a,1) Y(1,0.6) a> = 1.
  const ProductValue pv = matrix_element_product(h8, one, {{a, 1.0}, {one, 0.6}}, a);
  CHECK(pv.value == doctest::Approx(1.0));
  CHECK_THROWS_AS(matrix_element_product(h8, one, {{a, 0.6}, {one, 0.6}}, a), std::invalid_argument);
}

TEST_CASE("associative algebra instances") {
  const OsvaInstance m2 = make_assoc_algebra_instance(matrix_units_table(2));
  const GradedVector e11 = GradedVector::basis(0), e12 = GradedVector::basis(1), e21 = GradedVector::basis(2);
  CHECK(m2.vacuum() == e11 + GradedVector::basis(3));
  CHECK(m2.mode(e12, Rational(-1), e21) == e11);
  CHECK(m2.mode(e12, Rational(0), e21).is_zero());
  // Y(E12, r) E21 = E12 E21 for every r; the opposite vertex at -1 gives E21 E12.
  CHECK(vertex_eval(m2, e12, 0.7, e21) == to_real(m2.space(), e11));
  CHECK(opposite_vertex(m2, e12, -1.0, e21) == to_real(m2.space(), GradedVector::basis(3)));
  std::vector<AssociativitySample> samples = {{e12, e21, e12, e12, 1.0, 0.6}, {e11, e12, e21, e11, 2.0, 1.5}};
  const CheckReport r = check_associativity(m2, samples, 1e-12);
  CHECK(r.passed);
  CHECK(r.residual == 0.0);
  CHECK_FALSE(c0_membership(m2, e12).passed);
}

TEST_CASE("center of M2 x heisenberg") {
  const OsvaInstance m2 = make_assoc_algebra_instance(matrix_units_table(2));
  const OsvaInstance h = make_heisenberg_instance(4);
  const OsvaInstance t = make_tensor_instance(m2, h);
  const std::size_t nv = h.space().size();
  const std::size_t a = *h.space().index_of("a(-1) 1");
  auto with = [&](const GradedVector& x, std::size_t u) {
    GradedVector out;
    for (const auto& [k, c] : x.coeffs()) out.add(k * nv + u, c);
    return out;
  };
  const GradedVector I = GradedVector::basis(0) + GradedVector::basis(3);
  CHECK(c0_membership(t, with(I, 0)).passed);
  CHECK(c0_membership(t, with(I, a)).passed);
  const CheckReport e12 = c0_membership(t, with(GradedVector::basis(1), 0));
  CHECK_FALSE(e12.passed);
  REQUIRE_FALSE(e12.witnesses.empty());
  CHECK(e12.witnesses.front().input.find("skew-symmetry") != std::string::npos);
  // x (x) 1 is central iff x is a scalar matrix.
  const std::vector<std::pair<GradedVector, bool>> cases = {
      {GradedVector::basis(0), false}, {GradedVector::basis(2), false}, {GradedVector::basis(3), false},
      {Rational(-3) * I, true}, {I + GradedVector::basis(1), false}};
  for (const auto& [x, scalar] : cases) CHECK(c0_membership(t, with(x, 0)).passed == scalar);
}

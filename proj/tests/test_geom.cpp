#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "osva/geom.hpp"
#include "osva/instances.hpp"

#include <cmath>

using namespace osva;

namespace {

GradedVector label(const OsvaInstance& inst, const std::string& l) { return GradedVector::basis(*inst.space().index_of(l)); }

}  // namespace

TEST_CASE("element validation") {
  CHECK_NOTHROW(validate(identity_element()));
  CHECK_NOTHROW(validate(P_element(0.5)));
  ModuliElement q = P_element(0.5);
  q.positions.push_back(0.2);
  CHECK_THROWS_AS(validate(q), std::invalid_argument);
  q = P_element(0.5);
  q.jets[0].a0 = -1.0;
  CHECK_THROWS_AS(validate(q), std::invalid_argument);
  q = P_element(0.5);
  q.jets[1].A = std::vector<double>(kDefaultJetOrder + 1, 0.0);
  CHECK_THROWS_AS(validate(q), std::invalid_argument);
  CHECK_NOTHROW(validate(q, kDefaultJetOrder + 1));
  q = A_element(0.1, 2);
  q.jet0.A[0] = 0.3;
  CHECK_THROWS_AS(validate(q), std::invalid_argument);
  CHECK_THROWS_AS(A_element(0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(P_element(0.0), std::invalid_argument);
}

TEST_CASE("coordinate series") {
  // exp(eps x^2 d/dx) x = x / (1 - eps x) = x + eps x^2 + eps^2 x^3 + ...
  const double eps = 0.3;
  const auto c = coord_series(CoordinateJet{1.0, {eps}}, 4);
  CHECK(c[0] == 0.0);
  CHECK(c[1] == doctest::Approx(1.0));
  CHECK(c[2] == doctest::Approx(eps));
  CHECK(c[3] == doctest::Approx(eps * eps));
  CHECK(c[4] == doctest::Approx(eps * eps * eps));
  // exp(b x^3 d/dx)(2x) = 2x / sqrt(1 - 2 b x^2) -> 2x + 2b x^3.
  const auto d = coord_series(CoordinateJet{2.0, {0.0, 0.25}}, 3);
  CHECK(d[1] == doctest::Approx(2.0));
  CHECK(d[2] == doctest::Approx(0.0));
  CHECK(d[3] == doctest::Approx(0.5));
}

TEST_CASE("P(r) reproduces the vertex operator bit for bit") {
  const OsvaInstance h = make_heisenberg_instance(6);
  const GradedVector u = Rational(3) * label(h, "a(-1) 1") - label(h, "a(-2) 1");
  const GradedVector v = label(h, "a(-1)^2 1") + Rational(1, 2) * h.vacuum();
  for (double r : {0.25, 1.0, 3.5}) {
    const RealVector want = vertex_eval(h, u, r, v);
    CHECK(phi_vector(h, P_element(r), {to_real(h.space(), u), to_real(h.space(), v)}) == want);
    for (std::size_t d = 0; d < h.space().size(); ++d)
      CHECK(phi_eval(h, P_element(r), {u, v}, GradedVector::basis(d)) == want[d]);
  }
}

TEST_CASE("scale element acts by a^{-wt}") {
  const OsvaInstance h = make_heisenberg_instance(5);
  for (std::size_t i = 0; i < h.space().size(); ++i) {
    const GradedVector v = GradedVector::basis(i);
    CHECK(phi_eval(h, scale_element(2.0), {v}, v) == std::pow(2.0, -h.weight(i).to_double()));
  }
  const GradedVector a2 = label(h, "a(-2) 1");
  CHECK(phi_eval(h, scale_element(0.5), {a2}, a2) == 4.0);
  CHECK(phi_eval(h, identity_element(), {a2}, a2) == 1.0);
}

TEST_CASE("vacuum and conformal extraction") {
  const OsvaInstance h = make_heisenberg_instance(6);
  CHECK(extract_vacuum(h) == h.vacuum());
  const OsvaInstance m2 = make_assoc_algebra_instance(matrix_units_table(2));
  CHECK(extract_vacuum(m2) == m2.vacuum());

  // Phi_0(A(eps;2)) = e^{-eps L(-2)} 1; the central difference leaves omega plus an eps^2 L(-2)^3 1 / 6 term.
  const RealVector omega = to_real(h.space(), h.conformal().omega);
  const std::size_t a11 = *h.space().index_of("a(-1)^2 1");
  auto error = [&](double eps) {
    const RealVector got = extract_conformal(h, eps);
    double e = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) e = std::max(e, std::abs(got[i] - omega[i]));
    return e;
  };
  CHECK(extract_conformal(h)[a11] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(error(1e-4) <= 1e-6);
  const double ratio = error(1e-2) / error(5e-3);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS(extract_conformal(h, 0.0), std::invalid_argument);
}

TEST_CASE("non-conformal instance rejects nontrivial jets") {
  GradedSpace s;
  s.labels = {"1"};
  s.weights = {Rational(0)};
  s.cutoff = Rational(0);
  InstanceBackend b;
  b.mode = [](std::size_t, const Rational& n, std::size_t) {
    return n == Rational(-1) ? GradedVector::basis(0) : GradedVector{};
  };
  b.D = [](std::size_t) { return GradedVector{}; };
  const OsvaInstance plain("plain", s, GradedVector::basis(0), b, std::nullopt);
  CHECK(extract_vacuum(plain) == GradedVector::basis(0));
  CHECK_THROWS_AS(extract_conformal(plain), std::logic_error);
}

TEST_CASE("affine sewing") {
  const ModuliElement pp = sew_affine(P_element(1.0), 2, P_element(0.6));
  CHECK(pp.n == 3);
  CHECK(pp.positions == std::vector<double>{1.0, 0.6});

  // Sewing the identity is a no-op.
  const ModuliElement p = P_element(0.7);
  CHECK(sew_affine(p, 1, identity_element()) == p);
  CHECK(sew_affine(p, 2, identity_element()) == p);
  CHECK(sew_affine(identity_element(), 1, p) == p);

  // A scaled puncture shrinks the sewn disk: positions r + s/a, scale a*b.
  ModuliElement q = P_element(1.0);
  q.jets[0].a0 = 4.0;
  const ModuliElement s = sew_affine(q, 1, P_element(2.0));
  CHECK(s.positions == std::vector<double>{1.5, 1.0});
  CHECK(*s.jets[0].a0 == 4.0);
  CHECK(*s.jets[1].a0 == 4.0);

  CHECK_THROWS_AS(sew_affine(P_element(0.5), 2, P_element(0.6)), std::invalid_argument);
  ModuliElement curved = P_element(0.5);
  curved.jets[1].A = {0.1};
  CHECK_THROWS_WITH_AS(sew_affine(curved, 2, P_element(0.1)), doctest::Contains("non-affine"), std::invalid_argument);
  CHECK_THROWS_AS(sew_affine(P_element(0.5), 3, identity_element()), std::invalid_argument);
}

TEST_CASE("sewing axiom against the contraction") {
  const OsvaInstance h = make_heisenberg_instance(8);
  const GradedVector a = label(h, "a(-1) 1"), one = h.vacuum(), a2 = label(h, "a(-2) 1");
  CHECK(check_sewing_axiom(h, P_element(1.0), 2, P_element(0.6), {a, a, one}, one, 1e-4).passed);
  CHECK(check_sewing_axiom(h, P_element(0.6), 2, scale_element(2.0), {a, a2}, label(h, "a(-3) 1"), 1e-4).passed);
  CHECK(check_sewing_axiom(h, scale_element(3.0), 1, P_element(0.5), {a, a}, one, 1e-4).passed);
  // Sewing into the outer puncture composes Y(Y(.,.),.): limited by truncation.
  const CheckReport outer = check_sewing_axiom(h, P_element(0.6), 1, P_element(0.4), {a, a, one}, one, 1e-4);
  CHECK_FALSE(outer.passed);
  CHECK(outer.residual > 0.1);
}

TEST_CASE("phi orders positions decreasingly") {
  const OsvaInstance h = make_heisenberg_instance(6);
  const GradedVector a = label(h, "a(-1) 1"), a2 = label(h, "a(-2) 1"), one = h.vacuum();
  ModuliElement q;
  q.n = 3;
  q.positions = {1.0, 2.0};
  q.jets.assign(3, CoordinateJet{1.0, {}});
  ModuliElement sorted = q;
  sorted.positions = {2.0, 1.0};
  const GradedVector dual = label(h, "a(-2)a(-1) 1");
  CHECK(phi_eval(h, q, {a, a2, one}, dual) == phi_eval(h, sorted, {a2, a, one}, dual));
  q.positions = {-1.0, 2.0};
  CHECK_THROWS_AS(phi_eval(h, q, {a, a2, one}, dual), std::invalid_argument);
  CHECK_THROWS_AS(phi_eval(h, P_element(1.0), {a}, dual), std::invalid_argument);
}

TEST_CASE("moduli json round trip") {
  ModuliElement q = P_element(0.5);
  q.jets[0].a0 = 2.0;
  q.jets[1].A = {0.25, -0.5};
  q.jet0.A = {0.0, 1.5};
  const auto j = moduli_to_json(q);
  CHECK(j.dump() ==
        R"({"positions":[0.5],"jet0":{"A":[0.0,1.5]},"jets":[{"a0":2.0,"A":[]},{"a0":1.0,"A":[0.25,-0.5]}]})");
  CHECK(moduli_from_json(nlohmann::json::parse(j.dump())) == q);
  CHECK_THROWS_AS(moduli_from_json(nlohmann::json::parse(R"({"positions":[0.5],"jets":[]})")), std::invalid_argument);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "osva/instances.hpp"

#include <fstream>
#include <sstream>

using namespace osva;

namespace {

std::string data_file(const std::string& name) {
  std::ifstream in(std::string(OSVA_DATA_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_of(const std::string& text) {
  try {
    load_assoc_table(text);
  } catch (const InstanceError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shipped tables") {
  const AssocTable m2 = load_assoc_table(data_file("m2.json"));
  const AssocTable built = matrix_units_table(2);
  CHECK(m2.labels == built.labels);
  CHECK(m2.products == built.products);
  CHECK(check_assoc_table(m2).passed);
  CHECK(solve_unit(m2) == GradedVector::basis(0) + GradedVector::basis(3));

  const AssocTable scalars = load_assoc_table(data_file("scalars.json"));
  CHECK(scalars.products == scalars_table().products);
  CHECK(solve_unit(scalars) == GradedVector::basis(0));
}

TEST_CASE("non-associative table is rejected with a witness") {
  const AssocTable t = load_assoc_table(data_file("nonassoc.json"));
  const CheckReport r = check_assoc_table(t);
  CHECK_FALSE(r.passed);
  bool aab = false;
  for (const Witness& w : r.witnesses) aab = aab || w.input == "(a,a,b)";
  CHECK(aab);
  CHECK_THROWS_AS(make_assoc_algebra_instance(t), InstanceError);
}

TEST_CASE("unit solving") {
  // M3 unit found by elimination.
  const GradedVector e = solve_unit(matrix_units_table(3));
  CHECK(e == GradedVector::basis(0) + GradedVector::basis(4) + GradedVector::basis(8));
  // Declared unit that is wrong.
  AssocTable t = matrix_units_table(2);
  t.unit = GradedVector::basis(0);
  CHECK_THROWS_WITH_AS(solve_unit(t), doctest::Contains("declared unit fails"), InstanceError);
  // Nilpotent algebra: no unit.
  AssocTable nil;
  nil.labels = {"x"};
  CHECK_THROWS_WITH_AS(solve_unit(nil), doctest::Contains("no unit"), InstanceError);
  CHECK_FALSE(check_assoc_table(nil).passed);
}

TEST_CASE("table loader errors carry a path") {
  CHECK(error_of("{").find("multiplication table") != std::string::npos);
  CHECK(error_of(R"({"products": []})").find("$.basis") != std::string::npos);
  CHECK(error_of(R"({"basis": ["a", "a"], "products": []})").find("duplicate label 'a'") != std::string::npos);
  CHECK(error_of(R"({"basis": ["a"], "products": [["a", "b", {}]]})").find("$.products[0][1]") != std::string::npos);
  CHECK(error_of(R"({"basis": ["a"], "products": [["a", "a", {"a": "x/y"}]]})").find("$.products[0][2].a") !=
        std::string::npos);
  CHECK(error_of(R"({"basis": ["a"], "products": [["a", "a", {"a": "1"}], ["a", "a", {}]]})")
            .find("duplicate product") != std::string::npos);
}

TEST_CASE("tensor instance shape") {
  const OsvaInstance m2 = make_assoc_algebra_instance(matrix_units_table(2));
  const OsvaInstance h = make_heisenberg_instance(3);
  const OsvaInstance t = make_tensor_instance(m2, h);
  CHECK(t.space().size() == 4 * h.space().size());
  CHECK(t.space().labels[1 * h.space().size()] == "E12 ⊗ 1");
  CHECK(t.conformal().central_charge == Rational(1));
  CHECK(t.vacuum() == GradedVector::basis(0) + GradedVector::basis(3 * h.space().size()));
  CHECK_THROWS_AS(make_tensor_instance(h, m2), std::invalid_argument);
  CHECK_THROWS_AS(make_heisenberg_instance(1), std::invalid_argument);
}

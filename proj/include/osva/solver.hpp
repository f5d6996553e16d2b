#pragma once

#include "osva/fusion.hpp"
#include "osva/matrix.hpp"
#include "osva/report.hpp"
#include "osva/scalars.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace osva {

/// (a1, a2, a3, multiplicity index i) with 1 <= i <= N_{a1 a2}^{a3}.
using ChannelKey = std::tuple<Sector, Sector, Sector, int>;

/// Multiplicity spaces E^a with structure maps C_{a1a2}^{a3;i}: E^{a1} (x) E^{a2} -> E^{a3}
/// and the unit 1^e in E^e. C is stored as a dims[a3] x (dims[a1] * dims[a2])
/// matrix whose column index is x * dims[a2] + y.
struct AlgebraObject {
  std::vector<int> dims;
  std::vector<QSqrt2> unit;
  std::map<ChannelKey, Matrix<QSqrt2>> C;

  const Matrix<QSqrt2>& structure(Sector a1, Sector a2, Sector a3, int i = 1) const;

  friend bool operator==(const AlgebraObject&, const AlgebraObject&) = default;
};

/// Zero-filled AlgebraObject with every admissible channel present.
AlgebraObject empty_algebra(const FusionRing& ring, const std::vector<int>& dims);

/// One unknown scalar coordinate.
struct Variable {
  enum class Kind { structure, unit };
  Kind kind = Kind::structure;
  ChannelKey channel{};
  std::size_t row = 0;  // output basis index p
  std::size_t col = 0;  // input index x * dims[a2] + y, or the unit coordinate
  std::string name;
};

/// c * x_first * x_second; an absent index means the factor is 1.
struct Monomial {
  QSqrt2 coef;
  std::optional<std::size_t> first;
  std::optional<std::size_t> second;
};

using Polynomial = std::vector<Monomial>;

/// lhs == rhs, both of degree <= 2 in the variables.
struct Equation {
  enum class Kind { fusing, left_unit, right_unit };
  Kind kind = Kind::fusing;
  std::string label;
  Polynomial lhs;
  Polynomial rhs;
};

struct ConstraintSystem {
  std::vector<Variable> variables;
  std::vector<Equation> quadratic_equations;  // the fusing equations
  std::vector<Equation> linear_equations;     // unit equations (linear once 1^e is fixed)

  std::size_t equation_count() const { return quadratic_equations.size() + linear_equations.size(); }
  /// Flat variable index of a structure coordinate, or of a unit coordinate.
  std::optional<std::size_t> find_structure(const ChannelKey& key, std::size_t row, std::size_t col) const;
  std::optional<std::size_t> find_unit(std::size_t coord) const;
};

/// Expands the fusing equations and both unit equations into scalar
/// coordinates. Deterministic: quadruples in lexicographic order, then
/// multiplicity indices, then output/input coordinates.
ConstraintSystem build_constraints(const FusionData& data, const std::vector<int>& dims);

/// Value of a polynomial at a full assignment.
QSqrt2 evaluate(const Polynomial& p, const std::vector<QSqrt2>& values);
/// Reads an AlgebraObject as a point of the system's variable space.
std::vector<QSqrt2> assignment_of(const ConstraintSystem& system, const AlgebraObject& alg);

/// Exact check of the fusing and unit equations by direct composition of the
/// structure maps with the fusing matrices of `data`.
CheckReport verify_algebra(const FusionData& data, const AlgebraObject& alg);

struct SolveOptions {
  bool gauge_fixing = true;
  std::size_t search_bound = 200000;  // search nodes
  int max_dim = 2;
  std::size_t max_variables = 24;
};

struct SolveResult {
  std::vector<AlgebraObject> solutions;
  bool partial = false;      // search_bound hit
  bool exhaustive = true;    // false when an unconstrained parameter was sampled
  std::size_t nodes = 0;
  std::vector<std::string> uncertified_roots;
};

/// Gauge-fixed exhaustive search. Only objects that pass verify_algebra are returned.
SolveResult solve_small(const FusionData& data, const std::vector<int>& dims, const SolveOptions& options = {});

/// For every quadruple and pair of coupled columns (n, n'), checks
/// sum_m F_{m;n} F_{m;n'} = delta_{n n'} exactly.
CheckReport diagonal_double_check(const FusionData& data);

/// Flags a unique unit iff dim E^e = 1.
CheckReport unit_uniqueness_check(const FusionData& data, const AlgebraObject& alg);

/// Basis rescaling: basis vector `index` of E^sector is multiplied by `scale`,
/// and C transformed so that the algebra structure is preserved.
AlgebraObject rescale_basis(const AlgebraObject& alg, Sector sector, std::size_t index, const QSqrt2& scale);

/// Candidates a + b sqrt(2) with |numerators|, denominators <= height that lie
/// within `gap` of x.
std::vector<QSqrt2> lift_to_qsqrt2(double x, long height = 64, double gap = 1e-7);

nlohmann::ordered_json algebra_to_json(const FusionRing& ring, const AlgebraObject& alg);
AlgebraObject algebra_from_json(const FusionRing& ring, const nlohmann::json& j);

}  // namespace osva

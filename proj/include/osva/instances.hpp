#pragma once

#include "osva/modes.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace osva {

/// Structure constants of a finite-dimensional algebra over Q.
struct AssocTable {
  std::vector<std::string> labels;
  std::map<std::pair<std::size_t, std::size_t>, GradedVector> products;  // missing = 0
  std::optional<GradedVector> unit;  // solved for when absent

  GradedVector multiply(const GradedVector& a, const GradedVector& b) const;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON: {"basis": [...], "products": [[left, right, {label: "p/q", ...}], ...], "unit": {...}}.
AssocTable load_assoc_table(const std::string& text);
AssocTable matrix_units_table(std::size_t n);
AssocTable scalars_table();

/// Associativity witnesses (empty when associative) and the unit, solved exactly.
CheckReport check_assoc_table(const AssocTable& table);
/// Unit of the table; InstanceError when none exists.
GradedVector solve_unit(const AssocTable& table);

/// All weights 0, D = 0, only the mode n = -1 with u_{-1}v = uv; conformal data zero, c = 0.
OsvaInstance make_assoc_algebra_instance(const AssocTable& table);
/// Free boson Fock space on partitions of weight <= cutoff, omega = a(-1)^2 1 / 2, c = 1.
OsvaInstance make_heisenberg_instance(int cutoff);
/// A (x) V with modes (a (x) u)_n (b (x) v) = ab (x) u_n v.
/// `alg` must have all weights 0 (an associative-algebra instance).
OsvaInstance make_tensor_instance(const OsvaInstance& alg, const OsvaInstance& va);

}  // namespace osva

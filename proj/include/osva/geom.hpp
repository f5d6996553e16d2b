#pragma once

#include "osva/modes.hpp"

#include "json.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace osva {

constexpr std::size_t kDefaultJetOrder = 4;

/// Local coordinate exp(sum_j A_j x^{j+1} d/dx)(a0 x) at a puncture. a0 is
/// absent for the negatively oriented puncture.
struct CoordinateJet {
  std::optional<double> a0;
  std::vector<double> A;  // A_1, ..., A_J

  bool affine() const;
  friend bool operator==(const CoordinateJet&, const CoordinateJet&) = default;
};

/// A disk with n positively oriented boundary punctures r_1, ..., r_{n-1}, 0 and
/// the negatively oriented puncture at infinity. The determinant-line factor is 1.
struct ModuliElement {
  std::size_t n = 1;
  std::vector<double> positions;  // n - 1 distinct nonzero reals
  CoordinateJet jet0;              // at infinity, no a0
  std::vector<CoordinateJet> jets;  // n jets, the last at 0

  friend bool operator==(const ModuliElement&, const ModuliElement&) = default;
};

/// Throws std::invalid_argument when the invariants fail.
void validate(const ModuliElement& q, std::size_t jet_order = kDefaultJetOrder);

ModuliElement identity_element();
ModuliElement P_element(double r);
/// The arity-0 element with A_i = eps; i >= 2 since A_1 = 0 there.
ModuliElement A_element(double eps, std::size_t i);
ModuliElement scale_element(double a);

/// Taylor coefficients c_0, ..., c_order of exp(sum A_j x^{j+1} d/dx)(a0 x).
std::vector<double> coord_series(const CoordinateJet& jet, std::size_t order);

enum class JetDirection { plus, minus };

/// plus: e^{-sum A_j L(j)} a0^{-L(0)}; minus: e^{-sum A_j L(-j)}. Truncated at the cutoff.
RealVector virasoro_jet_action(const OsvaInstance& inst, const CoordinateJet& jet, JetDirection dir,
                               const RealVector& v);

/// Phi_n(Q)(args) as a vector: positions reordered decreasingly (args and jets
/// follow), then e^{-sum A^{(0)}_j L(-j)} Y(j_1 v_1, r_1) ... Y(j_{n-1} v_{n-1}, r_{n-1}) j_n v_n.
RealVector phi_vector(const OsvaInstance& inst, const ModuliElement& q, const std::vector<RealVector>& args);
double phi_eval(const OsvaInstance& inst, const ModuliElement& q, const std::vector<GradedVector>& args,
                const GradedVector& dual);

/// Phi_0 of the trivial arity-0 element, converted back to exact coefficients.
GradedVector extract_vacuum(const OsvaInstance& inst);
/// -(Phi_0(A(eps;2)) - Phi_0(A(-eps;2))) / (2 eps).
RealVector extract_conformal(const OsvaInstance& inst, double eps = 1e-4);

/// Sewing of puncture i (1-based) of q1 with the puncture at infinity of q2, for
/// affine local coordinates. Throws std::invalid_argument outside the subclass or
/// when the sewn disk does not fit.
ModuliElement sew_affine(const ModuliElement& q1, std::size_t i, const ModuliElement& q2);

/// |<v', Phi(sewn)(vectors)> - <v', Phi(q1)(.., Phi(q2)(..), ..)>| against tol.
CheckReport check_sewing_axiom(const OsvaInstance& inst, const ModuliElement& q1, std::size_t i,
                               const ModuliElement& q2, const std::vector<GradedVector>& vectors,
                               const GradedVector& dual, double tol);

nlohmann::ordered_json moduli_to_json(const ModuliElement& q);
ModuliElement moduli_from_json(const nlohmann::json& j);

}  // namespace osva

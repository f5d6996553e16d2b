#include "osva/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace osva {

bool CoordinateJet::affine() const {
  return std::all_of(A.begin(), A.end(), [](double x) { return x == 0.0; });
}

void validate(const ModuliElement& q, std::size_t jet_order) {
  const std::size_t want_positions = q.n == 0 ? 0 : q.n - 1;
  if (q.positions.size() != want_positions)
    throw std::invalid_argument("arity " + std::to_string(q.n) + " needs " + std::to_string(want_positions) +
                                " positions");
  if (q.jets.size() != q.n) throw std::invalid_argument("arity " + std::to_string(q.n) + " needs as many jets");
  for (std::size_t a = 0; a < q.positions.size(); ++a) {
    if (!std::isfinite(q.positions[a]) || q.positions[a] == 0.0)
      throw std::invalid_argument("positions must be finite and nonzero");
    for (std::size_t b = 0; b < a; ++b)
      if (q.positions[a] == q.positions[b]) throw std::invalid_argument("positions must be distinct");
  }
  if (q.jet0.a0) throw std::invalid_argument("the puncture at infinity carries no a0");
  auto check_A = [&](const CoordinateJet& j) {
    if (j.A.size() > jet_order)
      throw std::invalid_argument("jet longer than the configured order " + std::to_string(jet_order));
    for (double x : j.A)
      if (!std::isfinite(x)) throw std::invalid_argument("jet entries must be finite");
  };
  check_A(q.jet0);
  if (q.n == 0 && !q.jet0.A.empty() && q.jet0.A[0] != 0.0)
    throw std::invalid_argument("arity-0 elements need A_1 = 0");
  for (const CoordinateJet& j : q.jets) {
    if (!j.a0 || !(*j.a0 > 0.0) || !std::isfinite(*j.a0)) throw std::invalid_argument("a0 must be positive");
    check_A(j);
  }
}

ModuliElement identity_element() {
  ModuliElement q;
  q.n = 1;
  q.jets = {CoordinateJet{1.0, {}}};
  return q;
}

ModuliElement P_element(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("P(r) needs r > 0");
  ModuliElement q;
  q.n = 2;
  q.positions = {r};
  q.jets = {CoordinateJet{1.0, {}}, CoordinateJet{1.0, {}}};
  return q;
}

ModuliElement A_element(double eps, std::size_t i) {
  if (i < 2) throw std::invalid_argument("A(eps; i) in arity 0 needs i >= 2");
  ModuliElement q;
  q.n = 0;
  q.jet0.A.assign(i, 0.0);
  q.jet0.A[i - 1] = eps;
  return q;
}

ModuliElement scale_element(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("scale(a) needs a > 0");
  ModuliElement q;
  q.n = 1;
  q.jets = {CoordinateJet{a, {}}};
  return q;
}

std::vector<double> coord_series(const CoordinateJet& jet, std::size_t order) {
  std::vector<double> sum(order + 1, 0.0);
  if (order >= 1) sum[1] = jet.a0.value_or(1.0);
  std::vector<double> term = sum;
  // x^{j+1} d/dx raises degree by j, so order steps exhaust the truncation.
  for (std::size_t k = 1; k <= order; ++k) {
    std::vector<double> next(order + 1, 0.0);
    for (std::size_t d = 1; d <= order; ++d) {
      if (term[d] == 0.0) continue;
      for (std::size_t j = 1; j <= jet.A.size() && d + j <= order; ++j)
        next[d + j] += jet.A[j - 1] * static_cast<double>(d) * term[d] / static_cast<double>(k);
    }
    term = std::move(next);
    for (std::size_t d = 0; d <= order; ++d) sum[d] += term[d];
  }
  return sum;
}

RealVector virasoro_jet_action(const OsvaInstance& inst, const CoordinateJet& jet, JetDirection dir,
                               const RealVector& v) {
  RealVector x = v;
  if (!jet.affine() && !inst.has_conformal())
    throw std::logic_error("instance '" + inst.name() + "' has no conformal vector");
  if (dir == JetDirection::plus && jet.a0 && *jet.a0 != 1.0)
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != 0.0) x[i] *= std::pow(*jet.a0, -inst.weight(i).to_double());
  if (jet.affine()) return x;
  // e^{X}, X = -sum A_j L(+-j); X moves weight, so the truncated series terminates.
  const long steps = (inst.cutoff() - inst.min_weight()).floor().get_si() + 1;
  RealVector sum = x, term = x;
  for (long k = 1; k <= steps; ++k) {
    RealVector next(x.size(), 0.0);
    bool any = false;
    for (std::size_t i = 0; i < term.size(); ++i) {
      if (term[i] == 0.0) continue;
      for (std::size_t j = 1; j <= jet.A.size(); ++j) {
        if (jet.A[j - 1] == 0.0) continue;
        const long m = dir == JetDirection::plus ? static_cast<long>(j) : -static_cast<long>(j);
        for (const auto& [t, c] : inst.L_real(m, i)) {
          next[t] -= jet.A[j - 1] * c * term[i] / static_cast<double>(k);
          any = true;
        }
      }
    }
    if (!any) break;
    term = std::move(next);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
  }
  return sum;
}

RealVector phi_vector(const OsvaInstance& inst, const ModuliElement& q, const std::vector<RealVector>& args) {
  validate(q);
  if (args.size() != q.n)
    throw std::invalid_argument("arity " + std::to_string(q.n) + " needs " + std::to_string(q.n) + " arguments");
  if (q.n == 0)
    return virasoro_jet_action(inst, q.jet0, JetDirection::minus, to_real(inst.space(), inst.vacuum()));
  // sigma_Q: punctures sorted by decreasing position.
  std::vector<std::size_t> order(q.positions.size());
  std::iota(order.begin(), order.end(), 0);
  for (double r : q.positions)
    if (r < 0.0) throw std::invalid_argument("positions not reducible to the ordered form r_1 > ... > r_{n-1} > 0");
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return q.positions[a] > q.positions[b]; });
  RealVector x = virasoro_jet_action(inst, q.jets.back(), JetDirection::plus, args.back());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const RealVector u = virasoro_jet_action(inst, q.jets[*it], JetDirection::plus, args[*it]);
    x = apply_vertex(inst, u, q.positions[*it], x);
  }
  return virasoro_jet_action(inst, q.jet0, JetDirection::minus, x);
}

double phi_eval(const OsvaInstance& inst, const ModuliElement& q, const std::vector<GradedVector>& args,
                const GradedVector& dual) {
  std::vector<RealVector> real;
  for (const GradedVector& a : args) real.push_back(to_real(inst.space(), a));
  return pair(dual, phi_vector(inst, q, real));
}

GradedVector extract_vacuum(const OsvaInstance& inst) {
  ModuliElement zero;
  zero.n = 0;
  const RealVector x = phi_vector(inst, zero, {});
  GradedVector out;
  for (std::size_t i = 0; i < x.size(); ++i) out.add(i, Rational::from_double(x[i]));
  return out;
}

RealVector extract_conformal(const OsvaInstance& inst, double eps) {
  if (eps == 0.0 || !std::isfinite(eps)) throw std::invalid_argument("extract_conformal needs a nonzero eps");
  inst.conformal();
  const RealVector plus = phi_vector(inst, A_element(eps, 2), {});
  const RealVector minus = phi_vector(inst, A_element(-eps, 2), {});
  RealVector out(plus.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -(plus[i] - minus[i]) / (2.0 * eps);
  return out;
}

ModuliElement sew_affine(const ModuliElement& q1, std::size_t i, const ModuliElement& q2) {
  validate(q1);
  validate(q2);
  if (i < 1 || i > q1.n) throw std::invalid_argument("puncture index out of range");
  const CoordinateJet& ji = q1.jets[i - 1];
  if (!ji.affine() || !q2.jet0.affine())
    throw std::invalid_argument("non-affine local coordinates are outside the implemented sewing subclass");
  auto position = [](const ModuliElement& q, std::size_t k) { return k + 1 == q.n ? 0.0 : q.positions[k]; };
  const double pi = position(q1, i - 1);
  const double ai = *ji.a0;

  double reach = 0.0;
  for (std::size_t k = 0; k < q2.n; ++k) reach = std::max(reach, std::abs(position(q2, k)));
  double room = INFINITY;
  for (std::size_t k = 0; k < q1.n; ++k)
    if (k != i - 1) room = std::min(room, std::abs(position(q1, k) - pi));
  if (!(reach < ai * room)) throw std::invalid_argument("not sewable here: the sewn disk does not fit");
  if (q2.n == 0 && i == q1.n) throw std::invalid_argument("not sewable here: the puncture at 0 cannot be removed");

  // Coordinate w = a_i (z - p_i) at puncture i is identified with the coordinate of q2.
  std::vector<double> pos;
  std::vector<CoordinateJet> jets;
  for (std::size_t k = 0; k + 1 < i; ++k) {
    pos.push_back(position(q1, k));
    jets.push_back(q1.jets[k]);
  }
  for (std::size_t k = 0; k < q2.n; ++k) {
    pos.push_back(pi + position(q2, k) / ai);
    CoordinateJet j = q2.jets[k];
    j.a0 = *j.a0 * ai;
    for (std::size_t t = 0; t < j.A.size(); ++t) j.A[t] *= std::pow(ai, static_cast<double>(t + 1));
    jets.push_back(std::move(j));
  }
  for (std::size_t k = i; k < q1.n; ++k) {
    pos.push_back(position(q1, k));
    jets.push_back(q1.jets[k]);
  }
  ModuliElement out;
  out.n = jets.size();
  out.jet0 = q1.jet0;
  out.jets = std::move(jets);
  if (!pos.empty()) pos.pop_back();  // the last puncture sits at 0
  out.positions = std::move(pos);
  validate(out);
  return out;
}

CheckReport check_sewing_axiom(const OsvaInstance& inst, const ModuliElement& q1, std::size_t i,
                               const ModuliElement& q2, const std::vector<GradedVector>& vectors,
                               const GradedVector& dual, double tol) {
  const ModuliElement sewn = sew_affine(q1, i, q2);
  if (vectors.size() != sewn.n) throw std::invalid_argument("sewing check needs one vector per sewn puncture");
  CheckReport report;
  report.name = "sewing";
  report.tolerance = tol;
  report.checked = 1;
  const double direct = phi_eval(inst, sewn, vectors, dual);

  std::vector<RealVector> inner;
  for (std::size_t k = 0; k < q2.n; ++k) inner.push_back(to_real(inst.space(), vectors[i - 1 + k]));
  std::vector<RealVector> outer;
  for (std::size_t k = 0; k + 1 < i; ++k) outer.push_back(to_real(inst.space(), vectors[k]));
  outer.push_back(phi_vector(inst, q2, inner));
  for (std::size_t k = i - 1 + q2.n; k < vectors.size(); ++k) outer.push_back(to_real(inst.space(), vectors[k]));
  const double contracted = pair(dual, phi_vector(inst, q1, outer));

  report.residual = std::abs(direct - contracted);
  report.settle_numeric();
  if (!report.passed)
    report.fail("sewing at puncture " + std::to_string(i), "contraction " + std::to_string(contracted),
                "sewn " + std::to_string(direct));
  report.notes.push_back("sewn value " + std::to_string(direct));
  return report;
}

nlohmann::ordered_json moduli_to_json(const ModuliElement& q) {
  nlohmann::ordered_json j;
  j["positions"] = q.positions;
  j["jet0"] = {{"A", q.jet0.A}};
  j["jets"] = nlohmann::ordered_json::array();
  for (const CoordinateJet& c : q.jets) j["jets"].push_back({{"a0", c.a0.value_or(1.0)}, {"A", c.A}});
  return j;
}

ModuliElement moduli_from_json(const nlohmann::json& j) {
  ModuliElement q;
  try {
    q.positions = j.value("positions", std::vector<double>{});
    if (j.contains("jet0")) q.jet0.A = j.at("jet0").value("A", std::vector<double>{});
    for (const auto& c : j.at("jets")) {
      CoordinateJet jet;
      jet.a0 = c.value("a0", 1.0);
      jet.A = c.value("A", std::vector<double>{});
      q.jets.push_back(std::move(jet));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("moduli element: ") + e.what());
  }
  q.n = q.jets.size();
  validate(q);
  return q;
}

}  // namespace osva

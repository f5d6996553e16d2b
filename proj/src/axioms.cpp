#include "osva/modes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace osva {

namespace {

std::string mode_label(const OsvaInstance& inst, std::size_t u, const Rational& n, std::size_t v) {
  return "[" + inst.space().labels[u] + "]_" + n.to_string() + " [" + inst.space().labels[v] + "]";
}

/// Homogeneous components of v, keyed by weight.
std::map<Rational, GradedVector> components(const OsvaInstance& inst, const GradedVector& v) {
  std::map<Rational, GradedVector> out;
  for (const auto& [i, c] : v.coeffs()) out[inst.weight(i)].add(i, c);
  return out;
}

/// Scales each component by a^{s * weight}; nullopt when an exponent is not an integer.
std::optional<GradedVector> scale_by_weight(const OsvaInstance& inst, const GradedVector& v, const Rational& a,
                                            long s) {
  GradedVector out;
  for (const auto& [i, c] : v.coeffs()) {
    const Rational e = Rational(s) * inst.weight(i);
    if (!e.is_integer()) return std::nullopt;
    out.add(i, c * pow(a, e.to_long()));
  }
  return out;
}

}  // namespace

CheckReport check_weight_bookkeeping(const OsvaInstance& inst) {
  CheckReport report;
  report.name = "weight-bookkeeping";
  const std::size_t n = inst.space().size();
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      for (const ModeTerm& t : inst.modes(u, v)) {
        const Rational want = inst.weight(u) + inst.weight(v) - t.n - Rational(1);
        for (const auto& [k, c] : t.exact.coeffs()) {
          ++report.checked;
          if (inst.weight(k) != want)
            report.fail(mode_label(inst, u, t.n, v), "weight " + want.to_string(),
                        "component of weight " + inst.weight(k).to_string());
        }
      }
  for (std::size_t v = 0; v < n; ++v) {
    const GradedVector dv = inst.D(GradedVector::basis(v));
    for (const auto& [k, c] : dv.coeffs()) {
      ++report.checked;
      if (inst.weight(k) != inst.weight(v) + Rational(1))
        report.fail("D [" + inst.space().labels[v] + "]", "weight raised by 1", "weight " + inst.weight(k).to_string());
    }
  }
  return report;
}

CheckReport check_identity(const OsvaInstance& inst, const std::vector<double>& radii) {
  CheckReport report;
  report.name = "identity";
  const GradedSpace& space = inst.space();
  const auto w1 = inst.vacuum().homogeneous_weight(space);
  if (!w1) {
    report.fail("vacuum", "homogeneous vector", inst.vacuum().to_string(space));
    return report;
  }
  for (std::size_t v = 0; v < space.size(); ++v) {
    const GradedVector ev = GradedVector::basis(v);
    for (const Rational& n : inst.mode_indices(*w1, inst.weight(v))) {
      ++report.checked;
      GradedVector got = inst.mode(inst.vacuum(), n, ev);
      GradedVector want = n == Rational(-1) ? ev : GradedVector{};
      if (got != want)
        report.fail("1_" + n.to_string() + " [" + space.labels[v] + "]", want.to_string(space), got.to_string(space));
    }
    for (double r : radii) {
      ++report.checked;
      if (vertex_eval(inst, inst.vacuum(), r, ev) != to_real(space, ev))
        report.fail("Y(1, " + std::to_string(r) + ") [" + space.labels[v] + "]", "identity", "differs");
    }
  }
  return report;
}

CheckReport check_associativity(const OsvaInstance& inst, const std::vector<AssociativitySample>& samples,
                                double tol) {
  CheckReport report;
  report.name = "associativity";
  report.tolerance = tol;
  std::size_t tail_warnings = 0;
  std::size_t worst = 0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const AssociativitySample& x = samples[s];
    if (!(x.r1 > x.r2 && x.r2 > x.r1 - x.r2 && x.r1 - x.r2 > 0.0))
      throw std::invalid_argument("associativity needs r1 > r2 > r1 - r2 > 0");
    ProductValue prod = matrix_element_product(inst, x.dual, {{x.u, x.r1}, {x.v, x.r2}}, x.w);
    const double iter = matrix_element_iterate(inst, x.dual, x.u, x.r1 - x.r2, x.v, x.r2, x.w);
    const double diff = std::abs(prod.value - iter);
    tail_warnings += prod.tail_warning;
    ++report.checked;
    if (!(diff <= report.residual)) {
      report.residual = diff;
      worst = s;
    }
    if (!(diff <= tol)) {
      const GradedSpace& sp = inst.space();
      report.fail("<" + x.dual.to_string(sp) + ", Y(" + x.u.to_string(sp) + ", " + std::to_string(x.r1) + ") Y(" +
                      x.v.to_string(sp) + ", " + std::to_string(x.r2) + ") " + x.w.to_string(sp) + ">",
                  "iterate " + std::to_string(iter), "product " + std::to_string(prod.value));
    }
  }
  report.settle_numeric();
  if (!samples.empty()) report.notes.push_back("largest residual at sample " + std::to_string(worst));
  report.notes.push_back("tail warnings: " + std::to_string(tail_warnings));
  return report;
}

CheckReport check_d_conjugation(const OsvaInstance& inst, const Rational& a,
                                const std::vector<std::pair<GradedVector, GradedVector>>& samples) {
  if (a.sign() <= 0) throw std::invalid_argument("d-conjugation needs a > 0");
  CheckReport report;
  report.name = "d-conjugation";
  const GradedSpace& space = inst.space();
  const double ad = a.to_double();
  for (const auto& [u, v] : samples) {
    const auto wu = u.homogeneous_weight(space);
    const auto wv = v.homogeneous_weight(space);
    if (!wu || !wv) throw std::invalid_argument("d-conjugation samples must be homogeneous");
    for (const Rational& n : inst.mode_indices(*wu, *wv)) {
      ++report.checked;
      const Rational e = -n - Rational(1);
      // Left: a^d u_n a^{-d} v, by the grading operator. Right: coefficient of r^{-n-1} in Y(a^d u, ar) v.
      auto shrunk = scale_by_weight(inst, v, a, -1);
      std::optional<GradedVector> left;
      if (shrunk) left = scale_by_weight(inst, inst.mode(u, n, *shrunk), a, 1);
      auto au = scale_by_weight(inst, u, a, 1);
      if (left && au && e.is_integer()) {
        GradedVector right = pow(a, e.to_long()) * inst.mode(*au, n, v);
        if (*left != right)
          report.fail("n=" + n.to_string() + " on " + u.to_string(space) + ", " + v.to_string(space),
                      right.to_string(space), left->to_string(space));
        continue;
      }
      // Fractional exponents: both sides in floating point.
      const RealVector x = to_real(space, inst.mode(u, n, v));
      const double right_scale = std::pow(ad, (*wu - n - Rational(1)).to_double());
      double worst = 0.0, size = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) continue;
        const double l = std::pow(ad, (inst.weight(i) - *wv).to_double()) * x[i];
        worst = std::max(worst, std::abs(l - right_scale * x[i]));
        size = std::max(size, std::abs(l));
      }
      if (worst > 1e-12 * std::max(1.0, size))
        report.fail("n=" + n.to_string() + " on " + u.to_string(space) + ", " + v.to_string(space), "equal at 1e-12",
                    std::to_string(worst));
    }
  }
  return report;
}

CheckReport check_D_derivative(const OsvaInstance& inst, const std::vector<GradedVector>& samples) {
  CheckReport report;
  report.name = "D-derivative";
  const GradedSpace& space = inst.space();
  std::size_t skipped = 0;
  for (const GradedVector& sample : samples)
    for (const auto& [wu, u] : components(inst, sample)) {
      if (wu + Rational(1) > inst.cutoff()) {
        ++skipped;
        continue;
      }
      const GradedVector du = inst.D(u);
      for (std::size_t v = 0; v < space.size(); ++v) {
        const GradedVector ev = GradedVector::basis(v);
        for (const Rational& m : inst.mode_indices(wu + Rational(1), inst.weight(v))) {
          ++report.checked;
          GradedVector left = inst.mode(du, m, ev);
          GradedVector right = (-m) * inst.mode(u, m - Rational(1), ev);
          if (left != right)
            report.fail("(D" + u.to_string(space) + ")_" + m.to_string() + " [" + space.labels[v] + "]",
                        right.to_string(space), left.to_string(space));
        }
        if (inst.weight(v) + Rational(1) > inst.cutoff()) continue;
        const GradedVector dv = inst.D(ev);
        for (const Rational& m : inst.mode_indices(wu, inst.weight(v))) {
          if (wu + inst.weight(v) - m > inst.cutoff()) continue;
          ++report.checked;
          GradedVector left = inst.D(inst.mode(u, m, ev)) - inst.mode(u, m, dv);
          GradedVector right = (-m) * inst.mode(u, m - Rational(1), ev);
          if (left != right)
            report.fail("[D, (" + u.to_string(space) + ")_" + m.to_string() + "] [" + space.labels[v] + "]",
                        right.to_string(space), left.to_string(space));
        }
      }
    }
  if (skipped > 0) report.notes.push_back(std::to_string(skipped) + " components at the cutoff skipped");
  return report;
}

CheckReport check_creation(const OsvaInstance& inst) {
  CheckReport report;
  report.name = "creation";
  const GradedSpace& space = inst.space();
  const auto w1 = inst.vacuum().homogeneous_weight(space);
  if (!w1) {
    report.fail("vacuum", "homogeneous vector", inst.vacuum().to_string(space));
    return report;
  }
  for (std::size_t u = 0; u < space.size(); ++u) {
    const GradedVector eu = GradedVector::basis(u);
    for (const Rational& n : inst.mode_indices(inst.weight(u), *w1)) {
      ++report.checked;
      GradedVector got = inst.mode(eu, n, inst.vacuum());
      GradedVector want;
      if (n.is_integer() && n <= Rational(-1)) {
        const long k = (-n - Rational(1)).to_long();
        want = eu;
        for (long t = 1; t <= k; ++t) want = Rational(1, t) * inst.D(want);
      }
      if (got != want)
        report.fail("[" + space.labels[u] + "]_" + n.to_string() + " 1", want.to_string(space), got.to_string(space));
    }
  }
  return report;
}

CheckReport check_weight_property(const OsvaInstance& inst, const Rational& n1, const Rational& n2) {
  CheckReport report;
  report.name = "weight-property";
  std::set<Rational> offsets;
  const std::size_t n = inst.space().size();
  for (std::size_t u = 0; u < n; ++u) {
    if (!(inst.weight(u) - n1).is_integer()) continue;
    for (std::size_t v = 0; v < n; ++v) {
      if (!(inst.weight(v) - n2).is_integer()) continue;
      for (const ModeTerm& t : inst.modes(u, v))
        for (const auto& [k, c] : t.exact.coeffs()) {
          ++report.checked;
          offsets.insert((inst.weight(k) - n1 - n2).fractional_part());
        }
    }
  }
  std::string list;
  for (const Rational& o : offsets) list += (list.empty() ? "" : ", ") + o.to_string();
  report.notes.push_back("offsets {" + list + "}");
  return report;
}

CheckReport check_virasoro(const OsvaInstance& inst, long lo, long hi) {
  const ConformalData& cd = inst.conformal();
  CheckReport report;
  report.name = "virasoro";
  const GradedSpace& space = inst.space();
  const Rational& cut = inst.cutoff();
  for (std::size_t v = 0; v < space.size(); ++v) {
    const GradedVector ev = GradedVector::basis(v);
    const Rational& w = inst.weight(v);
    for (long m = lo; m <= hi; ++m)
      for (long n = lo; n <= hi; ++n) {
        if (w - Rational(m) > cut || w - Rational(n) > cut || w - Rational(m + n) > cut) continue;
        ++report.checked;
        GradedVector left = inst.L(m, inst.L(n, ev)) - inst.L(n, inst.L(m, ev));
        GradedVector right = Rational(m - n) * inst.L(m + n, ev);
        if (m + n == 0) right += (cd.central_charge * Rational(m * m * m - m, 12)) * ev;
        if (left != right)
          report.fail("[L(" + std::to_string(m) + "), L(" + std::to_string(n) + ")] [" + space.labels[v] + "]",
                      right.to_string(space), left.to_string(space));
      }
    ++report.checked;
    if (inst.L(0, ev) != w * ev)
      report.fail("L(0) [" + space.labels[v] + "]", (w * ev).to_string(space), inst.L(0, ev).to_string(space));
    if (w + Rational(1) <= cut) {
      ++report.checked;
      if (inst.L(-1, ev) != inst.D(ev))
        report.fail("L(-1) [" + space.labels[v] + "]", inst.D(ev).to_string(space), inst.L(-1, ev).to_string(space));
    }
    // L(m) are the modes omega_{m+1} of the conformal vector.
    if (const auto wo = cd.omega.homogeneous_weight(space)) {
      for (long m = lo; m <= hi; ++m) {
        if (w - Rational(m) > cut) continue;
        ++report.checked;
        GradedVector got = inst.mode(cd.omega, Rational(m + 1), ev);
        if (got != inst.L(m, ev))
          report.fail("omega_" + std::to_string(m + 1) + " [" + space.labels[v] + "]",
                      inst.L(m, ev).to_string(space), got.to_string(space));
      }
    }
  }
  report.notes.push_back("c = " + cd.central_charge.to_string());
  return report;
}

CheckReport c0_membership(const OsvaInstance& inst, const GradedVector& u) {
  CheckReport report;
  report.name = "c0-membership";
  const GradedSpace& space = inst.space();
  for (const auto& [i, c] : u.coeffs()) {
    ++report.checked;
    if (!inst.weight(i).is_integer())
      report.fail("weight of [" + space.labels[i] + "]", "integer", inst.weight(i).to_string());
  }
  for (const auto& [i, c] : u.coeffs())
    for (std::size_t v = 0; v < space.size(); ++v)
      for (const ModeTerm& t : inst.modes(i, v)) {
        ++report.checked;
        if (!t.n.is_integer()) report.fail(mode_label(inst, i, t.n, v), "integral mode support", "nonzero mode");
      }
  // v_n u = sum_{k>=0} (-1)^{n+k+1} D^k (u_{n+k} v) / k!, the coefficient form of skew-symmetry.
  std::set<Rational> wus;
  for (const auto& [i, c] : u.coeffs()) wus.insert(inst.weight(i));
  std::size_t skipped = 0;
  const long kmax = (inst.cutoff() - inst.min_weight()).floor().get_si();
  for (std::size_t v = 0; v < space.size(); ++v) {
    if (!inst.weight(v).is_integer()) {
      ++skipped;
      continue;
    }
    const GradedVector ev = GradedVector::basis(v);
    std::set<Rational> ns;
    for (const Rational& wu : wus)
      for (const Rational& n : inst.mode_indices(inst.weight(v), wu))
        if (n.is_integer()) ns.insert(n);
    for (const Rational& n : ns) {
      ++report.checked;
      GradedVector left = inst.mode(ev, n, u);
      GradedVector right;
      for (long k = 0; k <= kmax; ++k) {
        GradedVector term = inst.mode(u, n + Rational(k), ev);
        for (long t = 1; t <= k && !term.is_zero(); ++t) term = Rational(1, t) * inst.D(term);
        const long sign_exp = (n + Rational(k + 1)).to_long();
        right += (sign_exp % 2 == 0 ? Rational(1) : Rational(-1)) * term;
      }
      if (left != right)
        report.fail("skew-symmetry v=[" + space.labels[v] + "], n=" + n.to_string(), right.to_string(space),
                    left.to_string(space));
    }
  }
  if (skipped > 0) report.notes.push_back(std::to_string(skipped) + " fractional-weight v skipped");
  report.notes.push_back(report.passed ? "member" : "not a member");
  return report;
}

}  // namespace osva

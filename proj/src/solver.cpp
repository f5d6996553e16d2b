#include "osva/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace osva {

std::vector<QSqrt2> lift_to_qsqrt2(double x, long height, double gap) {
  std::vector<std::pair<double, QSqrt2>> found;
  const double root2 = std::sqrt(2.0);
  for (long t = 1; t <= height; ++t)
    for (long s = -height; s <= height; ++s) {
      if (std::gcd(s, t) != 1 && !(s == 0 && t == 1)) continue;
      const double rest = x - static_cast<double>(s) / static_cast<double>(t) * root2;
      for (long q = 1; q <= height; ++q) {
        const double p = std::round(rest * static_cast<double>(q));
        if (std::abs(p) > static_cast<double>(height)) continue;
        const double err = std::abs(rest - p / static_cast<double>(q));
        if (err <= gap) {
          QSqrt2 cand(Rational(static_cast<long>(p), q), Rational(s, t));
          bool dup = std::any_of(found.begin(), found.end(), [&](const auto& f) { return f.second == cand; });
          if (!dup) found.emplace_back(err, cand);
        }
      }
    }
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<QSqrt2> out;
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

namespace {

/// Polynomial after substituting the assigned variables.
struct Reduced {
  QSqrt2 constant;
  std::map<std::size_t, QSqrt2> linear;
  std::map<std::pair<std::size_t, std::size_t>, QSqrt2> quadratic;

  std::vector<std::size_t> unknowns() const {
    std::vector<std::size_t> u;
    for (const auto& [v, c] : linear)
      if (!c.is_zero()) u.push_back(v);
    for (const auto& [vv, c] : quadratic)
      if (!c.is_zero()) {
        u.push_back(vv.first);
        u.push_back(vv.second);
      }
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
  }
};

class Search {
 public:
  Search(const FusionData& data, const std::vector<int>& dims, const SolveOptions& options)
      : data_(data), dims_(dims), options_(options), system_(build_constraints(data, dims)) {
    for (const Equation* eq : all_equations()) {
      Polynomial p = eq->lhs;
      for (Monomial m : eq->rhs) {
        m.coef = -m.coef;
        p.push_back(std::move(m));
      }
      polys_.push_back(std::move(p));
    }
    usage_.assign(system_.variables.size(), 0);
    for (const Polynomial& p : polys_)
      for (const Monomial& m : p) {
        if (m.first) ++usage_[*m.first];
        if (m.second) ++usage_[*m.second];
      }
  }

  SolveResult run() {
    std::vector<std::optional<QSqrt2>> values(system_.variables.size());
    std::vector<std::pair<std::size_t, QSqrt2>> decisions;
    if (options_.gauge_fixing)
      for (std::size_t t = 0; t < static_cast<std::size_t>(dims_[kUnitSector]); ++t) {
        std::size_t v = *system_.find_unit(t);
        values[v] = QSqrt2(t == 0 ? 1 : 0);
        decisions.emplace_back(v, *values[v]);
      }
    explore(values, decisions);
    return std::move(result_);
  }

 private:
  std::vector<const Equation*> all_equations() const {
    std::vector<const Equation*> out;
    for (const auto& e : system_.quadratic_equations) out.push_back(&e);
    for (const auto& e : system_.linear_equations) out.push_back(&e);
    return out;
  }

  static Reduced reduce(const Polynomial& p, const std::vector<std::optional<QSqrt2>>& values) {
    Reduced r;
    for (const Monomial& m : p) {
      QSqrt2 coef = m.coef;
      std::vector<std::size_t> open;
      for (const auto& idx : {m.first, m.second}) {
        if (!idx) continue;
        if (values[*idx])
          coef *= *values[*idx];
        else
          open.push_back(*idx);
      }
      if (coef.is_zero()) continue;
      if (open.empty())
        r.constant += coef;
      else if (open.size() == 1)
        r.linear[open[0]] += coef;
      else
        r.quadratic[{std::min(open[0], open[1]), std::max(open[0], open[1])}] += coef;
    }
    return r;
  }

  /// Rescaling weight of a variable under the generator (sector, basis index).
  int weight(std::size_t v, Sector sector, std::size_t index) const {
    const Variable& var = system_.variables[v];
    if (var.kind == Variable::Kind::unit) return sector == kUnitSector && var.col == index ? -1 : 0;
    auto [a1, a2, a3, i] = var.channel;
    (void)i;
    const std::size_t d2 = static_cast<std::size_t>(dims_[a2]);
    const std::size_t x = var.col / d2, y = var.col % d2;
    int w = 0;
    if (a1 == sector && x == index) ++w;
    if (a2 == sector && y == index) ++w;
    if (a3 == sector && var.row == index) --w;
    return w;
  }

  /// Weight of `v` under the first generator left free by earlier decisions, or 0.
  int gauge_weight(std::size_t v, const std::vector<std::pair<std::size_t, QSqrt2>>& decisions) const {
    for (Sector s = 0; s < dims_.size(); ++s)
      for (std::size_t t = 0; t < static_cast<std::size_t>(dims_[s]); ++t) {
        int w = weight(v, s, t);
        if (w == 0) continue;
        bool free = std::all_of(decisions.begin(), decisions.end(), [&](const auto& d) {
          return d.second.is_zero() || weight(d.first, s, t) == 0;
        });
        if (free) return w;
      }
    return 0;
  }

  std::vector<QSqrt2> quadratic_roots(const QSqrt2& a, const QSqrt2& b, const QSqrt2& c, std::size_t v) {
    const double ad = a.to_double(), bd = b.to_double(), cd = c.to_double();
    // Sign decided exactly; Q(sqrt2) embeds in R, so a negative discriminant means no solutions.
    const double disc = (b * b - QSqrt2(4) * a * c).to_double();
    if (disc < 0) return {};
    std::vector<double> numeric;
    const double sq = std::sqrt(std::max(disc, 0.0));
    const double qd = -0.5 * (bd + (bd >= 0 ? sq : -sq));
    if (qd != 0.0) {
      numeric.push_back(qd / ad);
      numeric.push_back(cd / qd);
    } else {
      numeric.push_back(0.0);
    }
    std::vector<QSqrt2> certified;
    for (double r : numeric) {
      bool any = false;
      for (const QSqrt2& cand : lift_to_qsqrt2(r)) {
        if (!(a * cand * cand + b * cand + c).is_zero()) continue;
        any = true;
        if (std::find(certified.begin(), certified.end(), cand) == certified.end()) certified.push_back(cand);
      }
      if (!any) {
        std::ostringstream os;
        os.precision(17);
        os << system_.variables[v].name << " = " << r << " (no Q(sqrt2) lift)";
        result_.uncertified_roots.push_back(os.str());
      }
    }
    return certified;
  }

  void explore(std::vector<std::optional<QSqrt2>> values, std::vector<std::pair<std::size_t, QSqrt2>> decisions) {
    if (result_.partial) return;
    if (++result_.nodes > options_.search_bound) {
      result_.partial = true;
      return;
    }
    // Propagate linear consequences until a fixed point.
    std::optional<std::size_t> quad_var;
    QSqrt2 qa, qb, qc;
    for (bool changed = true; changed;) {
      changed = false;
      quad_var.reset();
      for (const Polynomial& p : polys_) {
        Reduced r = reduce(p, values);
        auto unknowns = r.unknowns();
        if (unknowns.empty()) {
          if (!r.constant.is_zero()) return;  // conflict
          continue;
        }
        if (unknowns.size() != 1) continue;
        const std::size_t v = unknowns[0];
        QSqrt2 a = r.quadratic.contains({v, v}) ? r.quadratic[{v, v}] : QSqrt2(0);
        QSqrt2 b = r.linear.contains(v) ? r.linear[v] : QSqrt2(0);
        if (a.is_zero()) {
          values[v] = -r.constant / b;
          changed = true;
          break;
        }
        if (!quad_var) {
          quad_var = v;
          qa = a;
          qb = b;
          qc = r.constant;
        }
      }
    }
    if (quad_var) {
      for (const QSqrt2& root : quadratic_roots(qa, qb, qc, *quad_var)) {
        auto next = values;
        next[*quad_var] = root;
        auto d = decisions;
        d.emplace_back(*quad_var, root);
        explore(std::move(next), std::move(d));
      }
      return;
    }

    std::vector<std::size_t> open;
    for (std::size_t v = 0; v < values.size(); ++v)
      if (!values[v]) open.push_back(v);
    if (open.empty()) {
      certify(values);
      return;
    }

    // Branch: prefer a variable that a free rescaling can normalize.
    std::size_t pick = open.front();
    int w = 0;
    if (options_.gauge_fixing)
      for (std::size_t v : open)
        if ((w = gauge_weight(v, decisions)) != 0) {
          pick = v;
          break;
        }
    if (w == 0) {
      pick = *std::max_element(open.begin(), open.end(),
                               [&](std::size_t x, std::size_t y) { return usage_[x] < usage_[y]; });
      result_.exhaustive = false;
    }
    std::vector<QSqrt2> candidates{QSqrt2(0), QSqrt2(1)};
    if (w == 0 || w % 2 == 0) candidates.push_back(QSqrt2(-1));
    for (const QSqrt2& c : candidates) {
      auto next = values;
      next[pick] = c;
      auto d = decisions;
      d.emplace_back(pick, c);
      explore(std::move(next), std::move(d));
    }
  }

  void certify(const std::vector<std::optional<QSqrt2>>& values) {
    AlgebraObject alg = empty_algebra(data_.ring(), dims_);
    for (std::size_t v = 0; v < values.size(); ++v) {
      const Variable& var = system_.variables[v];
      if (var.kind == Variable::Kind::unit)
        alg.unit[var.col] = *values[v];
      else
        alg.C.at(var.channel)(var.row, var.col) = *values[v];
    }
    if (!verify_algebra(data_, alg).passed) return;
    if (std::find(result_.solutions.begin(), result_.solutions.end(), alg) == result_.solutions.end())
      result_.solutions.push_back(std::move(alg));
  }

  const FusionData& data_;
  std::vector<int> dims_;
  SolveOptions options_;
  ConstraintSystem system_;
  std::vector<Polynomial> polys_;
  std::vector<std::size_t> usage_;
  SolveResult result_;
};

}  // namespace

SolveResult solve_small(const FusionData& data, const std::vector<int>& dims, const SolveOptions& options) {
  if (dims.size() != data.ring().size()) throw std::invalid_argument("dims given for unknown sector");
  for (int d : dims)
    if (d < 0 || d > options.max_dim)
      throw std::invalid_argument("dims must lie in [0, " + std::to_string(options.max_dim) + "]");
  Search search(data, dims, options);
  std::size_t count = build_constraints(data, dims).variables.size();
  if (count > options.max_variables)
    throw std::invalid_argument(std::to_string(count) + " unknowns exceed the limit of " +
                                std::to_string(options.max_variables));
  return search.run();
}

CheckReport diagonal_double_check(const FusionData& data) {
  CheckReport report;
  report.name = "diagonal-double";
  const FusionRing& ring = data.ring();
  const std::size_t n = ring.size();
  for (Sector i = 0; i < n; ++i)
    for (Sector j = 0; j < n; ++j)
      for (Sector k = 0; k < n; ++k)
        for (Sector l = 0; l < n; ++l) {
          const FusingMatrix& f = data.fusing(i, j, k, l);
          auto pairs = coupling_pairs(ring, i, j, k, l);
          std::vector<Sector> rows, cols;
          for (auto [m, nn] : pairs) {
            rows.push_back(m);
            cols.push_back(nn);
          }
          std::sort(rows.begin(), rows.end());
          rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
          std::sort(cols.begin(), cols.end());
          cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
          for (Sector c1 : cols)
            for (Sector c2 : cols) {
              QSqrt2 sum;
              for (Sector m : rows)
                if (!f.is_dc(m, c1) && !f.is_dc(m, c2)) sum += f.scalar(m, c1) * f.scalar(m, c2);
              QSqrt2 want(c1 == c2 ? 1 : 0);
              ++report.checked;
              if (sum != want)
                report.fail(quadruple_string({i, j, k, l}) + " (n,n')=(" + std::to_string(c1) + "," +
                                std::to_string(c2) + ")",
                            want.to_string(), sum.to_string());
            }
        }
  return report;
}

CheckReport unit_uniqueness_check(const FusionData& data, const AlgebraObject& alg) {
  (void)data;
  CheckReport report;
  report.name = "unit-uniqueness";
  const int de = alg.dims.empty() ? 0 : alg.dims[kUnitSector];
  report.checked = 1;
  report.notes.push_back("dim E^e = " + std::to_string(de));
  if (de == 1) {
    report.notes.push_back("unique unit");
  } else {
    report.fail("dim E^e", "1", std::to_string(de));
    report.notes.push_back("unit not unique");
  }
  return report;
}

}  // namespace osva

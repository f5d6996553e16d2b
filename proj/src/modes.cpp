#include "osva/modes.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace osva {

std::vector<Rational> GradedSpace::distinct_weights() const {
  std::vector<Rational> w = weights;
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  return w;
}

std::vector<std::size_t> GradedSpace::basis_of_weight(const Rational& w) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (weights[i] == w) out.push_back(i);
  return out;
}

std::optional<std::size_t> GradedSpace::index_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

GradedVector GradedVector::basis(std::size_t i, Rational c) {
  GradedVector v;
  v.add(i, c);
  return v;
}

Rational GradedVector::at(std::size_t i) const {
  auto it = c_.find(i);
  return it == c_.end() ? Rational(0) : it->second;
}

void GradedVector::add(std::size_t i, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = c_.try_emplace(i, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) c_.erase(it);
}

GradedVector GradedVector::project(const GradedSpace& space, const Rational& w) const {
  GradedVector out;
  for (const auto& [i, c] : c_)
    if (space.weights[i] == w) out.c_.emplace(i, c);
  return out;
}

std::optional<Rational> GradedVector::homogeneous_weight(const GradedSpace& space) const {
  if (c_.empty()) return std::nullopt;
  const Rational& w = space.weights[c_.begin()->first];
  for (const auto& [i, c] : c_)
    if (space.weights[i] != w) return std::nullopt;
  return w;
}

std::string GradedVector::to_string(const GradedSpace& space) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : c_) {
    if (!first) os << " + ";
    first = false;
    if (c != Rational(1)) os << "(" << c << ")*";
    os << "[" << space.labels[i] << "]";
  }
  return os.str();
}

GradedVector& GradedVector::operator+=(const GradedVector& o) {
  for (const auto& [i, c] : o.c_) add(i, c);
  return *this;
}

GradedVector& GradedVector::operator-=(const GradedVector& o) {
  for (const auto& [i, c] : o.c_) add(i, -c);
  return *this;
}

GradedVector& GradedVector::operator*=(const Rational& s) {
  if (s.is_zero()) {
    c_.clear();
    return *this;
  }
  for (auto& [i, c] : c_) c *= s;
  return *this;
}

RealVector to_real(const GradedSpace& space, const GradedVector& v) {
  RealVector out(space.size(), 0.0);
  for (const auto& [i, c] : v.coeffs()) out[i] = c.to_double();
  return out;
}

double pair(const GradedVector& dual, const RealVector& v) {
  double s = 0.0;
  for (const auto& [i, c] : dual.coeffs()) s += c.to_double() * v[i];
  return s;
}

struct OsvaInstance::Cache {
  std::mutex mu;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<ModeTerm>> rows;
  std::map<std::pair<long, std::size_t>, std::vector<std::pair<std::size_t, double>>> L_real;
  std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> D_real;
};

namespace {

std::vector<std::pair<std::size_t, double>> sparse_real(const GradedVector& v) {
  std::vector<std::pair<std::size_t, double>> out;
  for (const auto& [i, c] : v.coeffs()) out.emplace_back(i, c.to_double());
  return out;
}

GradedVector drop_above(const GradedSpace& space, GradedVector v) {
  GradedVector out;
  for (const auto& [i, c] : v.coeffs())
    if (space.weights[i] <= space.cutoff) out.add(i, c);
  return out;
}

}  // namespace

OsvaInstance::OsvaInstance(std::string name, GradedSpace space, GradedVector vacuum, InstanceBackend backend,
                           std::optional<ConformalData> conformal)
    : name_(std::move(name)),
      space_(std::move(space)),
      vacuum_(std::move(vacuum)),
      backend_(std::move(backend)),
      conformal_(std::move(conformal)),
      weights_(space_.distinct_weights()),
      cache_(std::make_shared<Cache>()) {
  if (space_.size() == 0) throw std::invalid_argument("instance with empty basis");
  if (space_.weights.size() != space_.size()) throw std::invalid_argument("one weight per basis label required");
  for (const Rational& w : space_.weights)
    if (w > space_.cutoff) throw std::invalid_argument("basis weight above the cutoff");
  if (conformal_ && !backend_.L) throw std::invalid_argument("conformal data without L(m) action");
}

const ConformalData& OsvaInstance::conformal() const {
  if (!conformal_) throw std::logic_error("instance '" + name_ + "' has no conformal vector");
  return *conformal_;
}

std::vector<Rational> OsvaInstance::mode_indices(const Rational& wu, const Rational& wv) const {
  std::vector<Rational> out;
  for (auto it = weights_.rbegin(); it != weights_.rend(); ++it) out.push_back(wu + wv - Rational(1) - *it);
  return out;
}

const std::vector<ModeTerm>& OsvaInstance::modes(std::size_t u, std::size_t v) const {
  std::lock_guard lock(cache_->mu);
  auto key = std::make_pair(u, v);
  if (auto it = cache_->rows.find(key); it != cache_->rows.end()) return it->second;
  std::vector<ModeTerm> row;
  for (const Rational& n : mode_indices(space_.weights[u], space_.weights[v])) {
    GradedVector x = backend_.mode(u, n, v);
    if (x.is_zero()) continue;
    ModeTerm t;
    t.n = n;
    t.exponent = (-n - Rational(1)).to_double();
    t.real = sparse_real(x);
    t.exact = std::move(x);
    row.push_back(std::move(t));
  }
  return cache_->rows.emplace(key, std::move(row)).first->second;
}

GradedVector OsvaInstance::mode(std::size_t u, const Rational& n, std::size_t v) const {
  for (const ModeTerm& t : modes(u, v))
    if (t.n == n) return t.exact;
  return {};
}

GradedVector OsvaInstance::mode(const GradedVector& u, const Rational& n, const GradedVector& v) const {
  GradedVector out;
  for (const auto& [i, a] : u.coeffs())
    for (const auto& [j, b] : v.coeffs()) {
      GradedVector x = mode(i, n, j);
      if (!x.is_zero()) out += (a * b) * x;
    }
  return out;
}

GradedVector OsvaInstance::D(const GradedVector& v) const {
  GradedVector out;
  for (const auto& [i, c] : v.coeffs()) out += c * backend_.D(i);
  return drop_above(space_, std::move(out));
}

GradedVector OsvaInstance::L(long m, const GradedVector& v) const {
  conformal();
  GradedVector out;
  for (const auto& [i, c] : v.coeffs()) out += c * backend_.L(m, i);
  return drop_above(space_, std::move(out));
}

const std::vector<std::pair<std::size_t, double>>& OsvaInstance::L_real(long m, std::size_t v) const {
  conformal();
  std::lock_guard lock(cache_->mu);
  auto key = std::make_pair(m, v);
  if (auto it = cache_->L_real.find(key); it != cache_->L_real.end()) return it->second;
  return cache_->L_real.emplace(key, sparse_real(drop_above(space_, backend_.L(m, v)))).first->second;
}

const std::vector<std::pair<std::size_t, double>>& OsvaInstance::D_real(std::size_t v) const {
  std::lock_guard lock(cache_->mu);
  if (auto it = cache_->D_real.find(v); it != cache_->D_real.end()) return it->second;
  return cache_->D_real.emplace(v, sparse_real(drop_above(space_, backend_.D(v)))).first->second;
}

RealVector apply_vertex(const OsvaInstance& inst, const RealVector& u, double r, const RealVector& v) {
  RealVector out(inst.space().size(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0.0) continue;
      const double uv = u[i] * v[j];
      for (const ModeTerm& t : inst.modes(i, j)) {
        const double c = uv * std::pow(r, t.exponent);
        for (const auto& [k, x] : t.real) out[k] += c * x;
      }
    }
  }
  return out;
}

RealVector vertex_eval(const OsvaInstance& inst, const GradedVector& u, double r, const GradedVector& v) {
  if (!(r > 0.0)) throw std::invalid_argument("vertex_eval needs r > 0; use opposite_vertex for r < 0");
  return apply_vertex(inst, to_real(inst.space(), u), r, to_real(inst.space(), v));
}

RealVector exp_D(const OsvaInstance& inst, double t, const RealVector& v) {
  RealVector sum = v, term = v;
  // D raises weight by one, so the truncated series stops after this many steps.
  const long steps = (inst.cutoff() - inst.min_weight()).floor().get_si() + 1;
  for (long k = 1; k <= steps; ++k) {
    RealVector next(v.size(), 0.0);
    bool any = false;
    for (std::size_t i = 0; i < term.size(); ++i) {
      if (term[i] == 0.0) continue;
      for (const auto& [j, x] : inst.D_real(i)) {
        next[j] += term[i] * x * t / static_cast<double>(k);
        any = true;
      }
    }
    if (!any) break;
    term = std::move(next);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
  }
  return sum;
}

RealVector opposite_vertex(const OsvaInstance& inst, const GradedVector& u, double r, const GradedVector& v) {
  if (!(r < 0.0)) throw std::invalid_argument("opposite_vertex needs r < 0");
  return exp_D(inst, r, vertex_eval(inst, v, -r, u));
}

ProductValue matrix_element_product(const OsvaInstance& inst, const GradedVector& dual,
                                    const std::vector<std::pair<GradedVector, double>>& factors,
                                    const GradedVector& w) {
  if (factors.empty()) throw std::invalid_argument("matrix_element_product needs at least one factor");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!(factors[i].second > 0.0)) throw std::invalid_argument("radii must be positive");
    if (i > 0 && !(factors[i - 1].second > factors[i].second))
      throw std::invalid_argument("radii must satisfy r_1 > ... > r_n > 0");
  }
  const GradedSpace& space = inst.space();
  RealVector x = to_real(space, w);
  for (std::size_t i = factors.size(); i-- > 1;)
    x = apply_vertex(inst, to_real(space, factors[i].first), factors[i].second, x);
  const RealVector u0 = to_real(space, factors[0].first);
  ProductValue out;
  out.value = pair(dual, apply_vertex(inst, u0, factors[0].second, x));
  if (factors.size() > 1) {
    RealVector top(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (space.weights[i] == inst.cutoff()) top[i] = x[i];
    out.last_shell = pair(dual, apply_vertex(inst, u0, factors[0].second, top));
    out.tail_warning = std::abs(out.last_shell) > 0.1 * std::abs(out.value);
  }
  return out;
}

double matrix_element_iterate(const OsvaInstance& inst, const GradedVector& dual, const GradedVector& u, double r0,
                              const GradedVector& v, double r2, const GradedVector& w) {
  if (!(r0 > 0.0) || !(r2 > 0.0)) throw std::invalid_argument("radii must be positive");
  const RealVector inner = vertex_eval(inst, u, r0, v);
  return pair(dual, apply_vertex(inst, inner, r2, to_real(inst.space(), w)));
}

std::vector<std::size_t> basis_up_to(const OsvaInstance& inst, const Rational& max_weight) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < inst.space().size(); ++i)
    if (inst.weight(i) <= max_weight) out.push_back(i);
  return out;
}

}  // namespace osva

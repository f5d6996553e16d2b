#include "osva/instances.hpp"

#include "osva/fock.hpp"

#include "json.hpp"

#include <memory>

namespace osva {

GradedVector AssocTable::multiply(const GradedVector& a, const GradedVector& b) const {
  GradedVector out;
  for (const auto& [i, x] : a.coeffs())
    for (const auto& [j, y] : b.coeffs()) {
      auto it = products.find({i, j});
      if (it != products.end()) out += (x * y) * it->second;
    }
  return out;
}

namespace {

GradedVector read_vector(const nlohmann::json& j, const std::vector<std::string>& labels, const std::string& path) {
  if (!j.is_object()) throw InstanceError(path + ": expected an object {label: \"p/q\"}");
  GradedVector v;
  for (const auto& [key, value] : j.items()) {
    auto it = std::find(labels.begin(), labels.end(), key);
    if (it == labels.end()) throw InstanceError(path + ": unknown basis label '" + key + "'");
    if (!value.is_string()) throw InstanceError(path + "." + key + ": expected a rational string");
    try {
      v.add(static_cast<std::size_t>(it - labels.begin()), Rational::parse(value.get<std::string>()));
    } catch (const std::exception& e) {
      throw InstanceError(path + "." + key + ": " + e.what());
    }
  }
  return v;
}

std::size_t label_index(const std::vector<std::string>& labels, const nlohmann::json& j, const std::string& path) {
  if (!j.is_string()) throw InstanceError(path + ": expected a basis label");
  auto it = std::find(labels.begin(), labels.end(), j.get<std::string>());
  if (it == labels.end()) throw InstanceError(path + ": unknown basis label '" + j.get<std::string>() + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

AssocTable load_assoc_table(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError(std::string("multiplication table: ") + e.what());
  }
  AssocTable t;
  if (!doc.contains("basis") || !doc["basis"].is_array() || doc["basis"].empty())
    throw InstanceError("$.basis: expected a nonempty array of labels");
  for (const auto& b : doc["basis"]) {
    if (!b.is_string()) throw InstanceError("$.basis: labels must be strings");
    if (std::find(t.labels.begin(), t.labels.end(), b.get<std::string>()) != t.labels.end())
      throw InstanceError("$.basis: duplicate label '" + b.get<std::string>() + "'");
    t.labels.push_back(b.get<std::string>());
  }
  if (!doc.contains("products") || !doc["products"].is_array())
    throw InstanceError("$.products: expected an array of [left, right, {label: coefficient}]");
  for (std::size_t e = 0; e < doc["products"].size(); ++e) {
    const std::string path = "$.products[" + std::to_string(e) + "]";
    const auto& row = doc["products"][e];
    if (!row.is_array() || row.size() != 3) throw InstanceError(path + ": expected [left, right, result]");
    const std::size_t a = label_index(t.labels, row[0], path + "[0]");
    const std::size_t b = label_index(t.labels, row[1], path + "[1]");
    if (t.products.contains({a, b})) throw InstanceError(path + ": duplicate product");
    t.products[{a, b}] = read_vector(row[2], t.labels, path + "[2]");
  }
  if (doc.contains("unit")) t.unit = read_vector(doc["unit"], t.labels, "$.unit");
  return t;
}

AssocTable matrix_units_table(std::size_t n) {
  AssocTable t;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) t.labels.push_back("E" + std::to_string(i) + std::to_string(j));
  // E_ij E_jl = E_il.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) t.products[{i * n + j, j * n + l}] = GradedVector::basis(i * n + l);
  return t;
}

AssocTable scalars_table() {
  AssocTable t;
  t.labels = {"1"};
  t.products[{0, 0}] = GradedVector::basis(0);
  return t;
}

GradedVector solve_unit(const AssocTable& table) {
  const std::size_t d = table.labels.size();
  if (table.unit) {
    for (std::size_t j = 0; j < d; ++j) {
      const GradedVector b = GradedVector::basis(j);
      if (table.multiply(*table.unit, b) != b || table.multiply(b, *table.unit) != b)
        throw InstanceError("declared unit fails on basis element '" + table.labels[j] + "'");
    }
    return *table.unit;
  }
  // Rows: coefficient of b_k in e b_j and in b_j e, against delta_{jk}.
  std::vector<std::vector<Rational>> rows;
  for (std::size_t j = 0; j < d; ++j)
    for (int side = 0; side < 2; ++side)
      for (std::size_t k = 0; k < d; ++k) {
        std::vector<Rational> row(d + 1);
        for (std::size_t i = 0; i < d; ++i) {
          auto it = side == 0 ? table.products.find({i, j}) : table.products.find({j, i});
          if (it != table.products.end()) row[i] = it->second.at(k);
        }
        row[d] = Rational(j == k ? 1 : 0);
        rows.push_back(std::move(row));
      }
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < d && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    const Rational inv = Rational(1) / rows[rank][c];
    for (auto& x : rows[rank]) x *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c].is_zero()) continue;
      const Rational f = rows[r][c];
      for (std::size_t t = 0; t <= d; ++t) rows[r][t] -= f * rows[rank][t];
    }
    pivot_col.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (!rows[r][d].is_zero()) throw InstanceError("multiplication table has no unit");
  GradedVector e;
  for (std::size_t r = 0; r < rank; ++r) e.add(pivot_col[r], rows[r][d]);
  return e;
}

CheckReport check_assoc_table(const AssocTable& table) {
  CheckReport report;
  report.name = "associative-table";
  const std::size_t d = table.labels.size();
  for (const auto& [ab, v] : table.products)
    for (const auto& [i, c] : v.coeffs()) {
      (void)c;
      if (i >= d) report.fail("product index", "< " + std::to_string(d), std::to_string(i));
    }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) {
        ++report.checked;
        const GradedVector ea = GradedVector::basis(a), eb = GradedVector::basis(b), ec = GradedVector::basis(c);
        GradedVector left = table.multiply(table.multiply(ea, eb), ec);
        GradedVector right = table.multiply(ea, table.multiply(eb, ec));
        if (left != right) {
          GradedSpace s;
          s.labels = table.labels;
          report.fail("(" + table.labels[a] + "," + table.labels[b] + "," + table.labels[c] + ")",
                      "(ab)c = " + left.to_string(s), "a(bc) = " + right.to_string(s));
        }
      }
  ++report.checked;
  try {
    solve_unit(table);
  } catch (const InstanceError& e) {
    report.fail("unit", "exists", e.what());
  }
  return report;
}

OsvaInstance make_assoc_algebra_instance(const AssocTable& table) {
  CheckReport r = check_assoc_table(table);
  if (!r.passed) {
    const Witness& w = r.witnesses.front();
    throw InstanceError("not an associative unital algebra: " + w.input + ": " + w.expected + ", " + w.got);
  }
  GradedSpace space;
  space.labels = table.labels;
  space.weights.assign(table.labels.size(), Rational(0));
  space.cutoff = Rational(0);
  auto t = std::make_shared<AssocTable>(table);
  InstanceBackend backend;
  backend.mode = [t](std::size_t u, const Rational& n, std::size_t v) {
    if (n != Rational(-1)) return GradedVector{};
    return t->multiply(GradedVector::basis(u), GradedVector::basis(v));
  };
  backend.D = [](std::size_t) { return GradedVector{}; };
  backend.L = [](long, std::size_t) { return GradedVector{}; };
  return OsvaInstance("assoc", std::move(space), solve_unit(table), std::move(backend),
                      ConformalData{GradedVector{}, Rational(0)});
}

OsvaInstance make_heisenberg_instance(int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("heisenberg cutoff must be >= 2");
  auto fock = std::make_shared<FockSpace>(cutoff);
  InstanceBackend backend;
  backend.mode = [fock](std::size_t u, const Rational& n, std::size_t v) {
    return n.is_integer() ? fock->mode(u, n.to_long(), v) : GradedVector{};
  };
  backend.D = [fock](std::size_t v) { return fock->D(v); };
  backend.L = [fock](long m, std::size_t v) { return fock->L(m, v); };
  const std::size_t a11 = *fock->index_of({1, 1});
  ConformalData cd{GradedVector::basis(a11, Rational(1, 2)), Rational(1)};
  return OsvaInstance("heisenberg", fock->graded_space(), GradedVector::basis(*fock->index_of({})),
                      std::move(backend), cd);
}

OsvaInstance make_tensor_instance(const OsvaInstance& alg, const OsvaInstance& va) {
  const std::size_t na = alg.space().size(), nv = va.space().size();
  for (const Rational& w : alg.space().weights)
    if (!w.is_zero()) throw std::invalid_argument("tensor factor A must have all weights 0");
  GradedSpace space;
  space.cutoff = va.cutoff();
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t u = 0; u < nv; ++u) {
      space.labels.push_back(alg.space().labels[a] + " ⊗ " + va.space().labels[u]);
      space.weights.push_back(va.weight(u));
    }
  auto tensor = [nv](const GradedVector& x, const GradedVector& y) {
    GradedVector out;
    for (const auto& [a, c] : x.coeffs())
      for (const auto& [u, d] : y.coeffs()) out.add(a * nv + u, c * d);
    return out;
  };
  InstanceBackend backend;
  backend.mode = [alg, va, nv, tensor](std::size_t p, const Rational& n, std::size_t q) {
    GradedVector ab = alg.mode(p / nv, Rational(-1), q / nv);
    if (ab.is_zero()) return GradedVector{};
    return tensor(ab, va.mode(p % nv, n, q % nv));
  };
  backend.D = [va, nv, tensor](std::size_t p) {
    return tensor(GradedVector::basis(p / nv), va.D(GradedVector::basis(p % nv)));
  };
  std::optional<ConformalData> cd;
  if (va.has_conformal()) {
    backend.L = [va, nv, tensor](long m, std::size_t p) {
      return tensor(GradedVector::basis(p / nv), va.L(m, GradedVector::basis(p % nv)));
    };
    cd = ConformalData{tensor(alg.vacuum(), va.conformal().omega), va.conformal().central_charge};
  }
  return OsvaInstance(alg.name() + "⊗" + va.name(), std::move(space), tensor(alg.vacuum(), va.vacuum()),
                      std::move(backend), cd);
}

}  // namespace osva

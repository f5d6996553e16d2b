#include "osva/solver.hpp"

#include <sstream>

namespace osva {

namespace {

std::string channel_name(const ChannelKey& key) {
  auto [a1, a2, a3, i] = key;
  std::ostringstream os;
  os << "C[" << a1 << "," << a2 << "->" << a3 << ";" << i << "]";
  return os.str();
}

void check_dims(const FusionRing& ring, const std::vector<int>& dims) {
  if (dims.size() != ring.size())
    throw std::invalid_argument("dims given for " + std::to_string(dims.size()) + " sectors, ring has " +
                                std::to_string(ring.size()));
  for (int d : dims)
    if (d < 0) throw std::invalid_argument("negative multiplicity-space dimension");
}

std::size_t udim(const std::vector<int>& dims, Sector s) { return static_cast<std::size_t>(dims[s]); }

/// kron(I_n, b)
Matrix<QSqrt2> kron_identity_left(std::size_t n, const Matrix<QSqrt2>& b) {
  Matrix<QSqrt2> out(n * b.rows(), n * b.cols());
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) out(x * b.rows() + r, x * b.cols() + c) = b(r, c);
  return out;
}

/// kron(a, I_n)
Matrix<QSqrt2> kron_identity_right(const Matrix<QSqrt2>& a, std::size_t n) {
  Matrix<QSqrt2> out(a.rows() * n, a.cols() * n);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      for (std::size_t z = 0; z < n; ++z) out(r * n + z, c * n + z) = a(r, c);
  return out;
}

}  // namespace

const Matrix<QSqrt2>& AlgebraObject::structure(Sector a1, Sector a2, Sector a3, int i) const {
  auto it = C.find({a1, a2, a3, i});
  if (it == C.end()) throw std::out_of_range("no structure map " + channel_name({a1, a2, a3, i}));
  return it->second;
}

AlgebraObject empty_algebra(const FusionRing& ring, const std::vector<int>& dims) {
  check_dims(ring, dims);
  AlgebraObject alg;
  alg.dims = dims;
  alg.unit.assign(udim(dims, kUnitSector), QSqrt2(0));
  const std::size_t n = ring.size();
  for (Sector a1 = 0; a1 < n; ++a1)
    for (Sector a2 = 0; a2 < n; ++a2)
      for (Sector a3 = 0; a3 < n; ++a3)
        for (int i = 1; i <= ring.N(a1, a2, a3); ++i)
          alg.C[{a1, a2, a3, i}] = Matrix<QSqrt2>(udim(dims, a3), udim(dims, a1) * udim(dims, a2));
  return alg;
}

std::optional<std::size_t> ConstraintSystem::find_structure(const ChannelKey& key, std::size_t row,
                                                            std::size_t col) const {
  for (std::size_t v = 0; v < variables.size(); ++v) {
    const Variable& var = variables[v];
    if (var.kind == Variable::Kind::structure && var.channel == key && var.row == row && var.col == col) return v;
  }
  return std::nullopt;
}

std::optional<std::size_t> ConstraintSystem::find_unit(std::size_t coord) const {
  for (std::size_t v = 0; v < variables.size(); ++v)
    if (variables[v].kind == Variable::Kind::unit && variables[v].col == coord) return v;
  return std::nullopt;
}

ConstraintSystem build_constraints(const FusionData& data, const std::vector<int>& dims) {
  const FusionRing& ring = data.ring();
  check_dims(ring, dims);
  const std::size_t n = ring.size();
  ConstraintSystem sys;

  // Variable layout: channels in lexicographic order, then the unit.
  std::map<ChannelKey, std::size_t> offset;
  for (Sector a1 = 0; a1 < n; ++a1)
    for (Sector a2 = 0; a2 < n; ++a2)
      for (Sector a3 = 0; a3 < n; ++a3)
        for (int i = 1; i <= ring.N(a1, a2, a3); ++i) {
          ChannelKey key{a1, a2, a3, i};
          std::size_t cols = udim(dims, a1) * udim(dims, a2);
          offset[key] = sys.variables.size();
          for (std::size_t p = 0; p < udim(dims, a3); ++p)
            for (std::size_t c = 0; c < cols; ++c) {
              std::size_t x = c / udim(dims, a2), y = c % udim(dims, a2);
              sys.variables.push_back({Variable::Kind::structure, key, p, c,
                                       channel_name(key) + "(" + std::to_string(p) + "|" + std::to_string(x) + "," +
                                           std::to_string(y) + ")"});
            }
        }
  const std::size_t unit_offset = sys.variables.size();
  for (std::size_t t = 0; t < udim(dims, kUnitSector); ++t)
    sys.variables.push_back({Variable::Kind::unit, {}, 0, t, "1e(" + std::to_string(t) + ")"});

  auto var = [&](const ChannelKey& key, std::size_t p, std::size_t x, std::size_t y) {
    const std::size_t d1 = udim(dims, std::get<0>(key)), d2 = udim(dims, std::get<1>(key));
    return offset.at(key) + p * d1 * d2 + x * d2 + y;
  };

  for (Sector a1 = 0; a1 < n; ++a1)
    for (Sector a2 = 0; a2 < n; ++a2)
      for (Sector a3 = 0; a3 < n; ++a3)
        for (Sector a4 = 0; a4 < n; ++a4) {
          const FusingMatrix& f = data.fusing(a1, a2, a3, a4);
          for (Sector a5 = 0; a5 < n; ++a5) {
            const int nk = ring.N(a1, a2, a5), nl = ring.N(a5, a3, a4);
            if (nk == 0 || nl == 0) continue;
            for (int k = 1; k <= nk; ++k)
              for (int l = 1; l <= nl; ++l) {
                const std::size_t d1 = udim(dims, a1), d2 = udim(dims, a2), d3 = udim(dims, a3),
                                  d4 = udim(dims, a4), d5 = udim(dims, a5);
                for (std::size_t p = 0; p < d4; ++p)
                  for (std::size_t x = 0; x < d1; ++x)
                    for (std::size_t y = 0; y < d2; ++y)
                      for (std::size_t z = 0; z < d3; ++z) {
                        Equation eq;
                        eq.kind = Equation::Kind::fusing;
                        std::ostringstream label;
                        label << "fusing " << quadruple_string({a1, a2, a3, a4}) << " a5=" << a5 << " k=" << k
                              << " l=" << l << " [" << p << "|" << x << "," << y << "," << z << "]";
                        eq.label = label.str();
                        for (Sector a = 0; a < n; ++a) {
                          auto it = f.entries.find({a, a5});
                          if (it == f.entries.end()) continue;  // DC
                          const int ni = ring.N(a1, a, a4), nj = ring.N(a2, a3, a);
                          const std::size_t da = udim(dims, a);
                          for (int i = 1; i <= ni; ++i)
                            for (int j = 1; j <= nj; ++j) {
                              const QSqrt2& coef =
                                  it->second(static_cast<std::size_t>((i - 1) * nj + (j - 1)),
                                             static_cast<std::size_t>((k - 1) * nl + (l - 1)));
                              if (coef.is_zero()) continue;
                              for (std::size_t q = 0; q < da; ++q)
                                eq.lhs.push_back(
                                    {coef, var({a1, a, a4, i}, p, x, q), var({a2, a3, a, j}, q, y, z)});
                            }
                        }
                        for (std::size_t q = 0; q < d5; ++q)
                          eq.rhs.push_back({QSqrt2(1), var({a5, a3, a4, l}, p, q, z), var({a1, a2, a5, k}, q, x, y)});
                        sys.quadratic_equations.push_back(std::move(eq));
                      }
              }
          }
        }

  const std::size_t de = udim(dims, kUnitSector);
  for (Sector a = 0; a < n; ++a) {
    const std::size_t da = udim(dims, a);
    if (ring.N(kUnitSector, a, a) > 0)
      for (std::size_t p = 0; p < da; ++p)
        for (std::size_t y = 0; y < da; ++y) {
          Equation eq;
          eq.kind = Equation::Kind::left_unit;
          eq.label = "left unit a=" + std::to_string(a) + " [" + std::to_string(p) + "|" + std::to_string(y) + "]";
          for (std::size_t x = 0; x < de; ++x)
            eq.lhs.push_back({QSqrt2(1), var({kUnitSector, a, a, 1}, p, x, y), unit_offset + x});
          if (p == y) eq.rhs.push_back({QSqrt2(1), std::nullopt, std::nullopt});
          sys.linear_equations.push_back(std::move(eq));
        }
    if (ring.N(a, kUnitSector, a) > 0)
      for (std::size_t p = 0; p < da; ++p)
        for (std::size_t y = 0; y < da; ++y) {
          Equation eq;
          eq.kind = Equation::Kind::right_unit;
          eq.label = "right unit a=" + std::to_string(a) + " [" + std::to_string(p) + "|" + std::to_string(y) + "]";
          for (std::size_t x = 0; x < de; ++x)
            eq.lhs.push_back({QSqrt2(1), var({a, kUnitSector, a, 1}, p, y, x), unit_offset + x});
          if (p == y) eq.rhs.push_back({QSqrt2(1), std::nullopt, std::nullopt});
          sys.linear_equations.push_back(std::move(eq));
        }
  }
  return sys;
}

QSqrt2 evaluate(const Polynomial& p, const std::vector<QSqrt2>& values) {
  QSqrt2 sum;
  for (const Monomial& m : p) {
    QSqrt2 t = m.coef;
    if (m.first) t *= values.at(*m.first);
    if (m.second) t *= values.at(*m.second);
    sum += t;
  }
  return sum;
}

std::vector<QSqrt2> assignment_of(const ConstraintSystem& system, const AlgebraObject& alg) {
  std::vector<QSqrt2> values;
  values.reserve(system.variables.size());
  for (const Variable& v : system.variables) {
    if (v.kind == Variable::Kind::unit)
      values.push_back(alg.unit.at(v.col));
    else
      values.push_back(alg.C.at(v.channel)(v.row, v.col));
  }
  return values;
}

CheckReport verify_algebra(const FusionData& data, const AlgebraObject& alg) {
  CheckReport report;
  report.name = "algebra-equations";
  const FusionRing& ring = data.ring();
  const std::size_t n = ring.size();
  if (alg.dims.size() != n) {
    report.fail("dims", std::to_string(n) + " sectors", std::to_string(alg.dims.size()));
    return report;
  }
  if (alg.unit.size() != udim(alg.dims, kUnitSector))
    report.fail("unit", "length dim E^e", std::to_string(alg.unit.size()));
  for (const auto& [key, m] : alg.C) {
    auto [a1, a2, a3, i] = key;
    if (a1 >= n || a2 >= n || a3 >= n || i < 1 || i > ring.N(a1, a2, a3)) {
      report.fail(channel_name(key), "absent (fusion space is zero)", "present");
      continue;
    }
    if (m.rows() != udim(alg.dims, a3) || m.cols() != udim(alg.dims, a1) * udim(alg.dims, a2))
      report.fail(channel_name(key), "shape matching dims", "mismatched shape");
  }
  for (Sector a1 = 0; a1 < n; ++a1)
    for (Sector a2 = 0; a2 < n; ++a2)
      for (Sector a3 = 0; a3 < n; ++a3)
        for (int i = 1; i <= ring.N(a1, a2, a3); ++i)
          if (!alg.C.contains({a1, a2, a3, i})) report.fail(channel_name({a1, a2, a3, i}), "present", "missing");
  if (!report.passed) return report;

  auto dim = [&](Sector s) { return udim(alg.dims, s); };
  for (Sector a1 = 0; a1 < n; ++a1)
    for (Sector a2 = 0; a2 < n; ++a2)
      for (Sector a3 = 0; a3 < n; ++a3)
        for (Sector a4 = 0; a4 < n; ++a4) {
          const FusingMatrix& f = data.fusing(a1, a2, a3, a4);
          const std::size_t rows = dim(a4), cols = dim(a1) * dim(a2) * dim(a3);
          for (Sector a5 = 0; a5 < n; ++a5) {
            const int nk = ring.N(a1, a2, a5), nl = ring.N(a5, a3, a4);
            for (int k = 1; k <= nk; ++k)
              for (int l = 1; l <= nl; ++l) {
                // Iterate side: C_{a5a3}^{a4;l} o (C_{a1a2}^{a5;k} (x) id).
                Matrix<QSqrt2> right =
                    alg.structure(a5, a3, a4, l) * kron_identity_right(alg.structure(a1, a2, a5, k), dim(a3));
                // Product side: sum_a F * C_{a1a}^{a4;i} o (id (x) C_{a2a3}^{a;j}).
                Matrix<QSqrt2> left(rows, cols);
                for (const auto& [mn, block] : f.entries) {
                  if (mn.second != a5) continue;
                  const Sector a = mn.first;
                  const int nj = ring.N(a2, a3, a);
                  for (int i = 1; i <= ring.N(a1, a, a4); ++i)
                    for (int j = 1; j <= nj; ++j) {
                      const QSqrt2& coef = block(static_cast<std::size_t>((i - 1) * nj + (j - 1)),
                                                 static_cast<std::size_t>((k - 1) * nl + (l - 1)));
                      if (coef.is_zero()) continue;
                      Matrix<QSqrt2> term =
                          alg.structure(a1, a, a4, i) * kron_identity_left(dim(a1), alg.structure(a2, a3, a, j));
                      for (std::size_t r = 0; r < rows; ++r)
                        for (std::size_t c = 0; c < cols; ++c) left(r, c) += coef * term(r, c);
                    }
                }
                for (std::size_t r = 0; r < rows; ++r)
                  for (std::size_t c = 0; c < cols; ++c) {
                    ++report.checked;
                    if (left(r, c) != right(r, c)) {
                      std::size_t x = c / (dim(a2) * dim(a3)), y = (c / dim(a3)) % dim(a2), z = c % dim(a3);
                      std::ostringstream label;
                      label << "fusing " << quadruple_string({a1, a2, a3, a4}) << " a5=" << a5 << " k=" << k
                            << " l=" << l << " [" << r << "|" << x << "," << y << "," << z << "]";
                      report.fail(label.str(), right(r, c).to_string(), left(r, c).to_string());
                    }
                  }
              }
          }
        }

  const std::size_t de = dim(kUnitSector);
  Matrix<QSqrt2> unit_col(de, 1);
  for (std::size_t t = 0; t < de; ++t) unit_col(t, 0) = alg.unit[t];
  for (Sector a = 0; a < n; ++a) {
    const std::size_t da = dim(a);
    auto compare = [&](const Matrix<QSqrt2>& got, const std::string& what) {
      for (std::size_t p = 0; p < da; ++p)
        for (std::size_t y = 0; y < da; ++y) {
          ++report.checked;
          QSqrt2 want(p == y ? 1 : 0);
          if (got(p, y) != want)
            report.fail(what + " a=" + std::to_string(a) + " [" + std::to_string(p) + "|" + std::to_string(y) + "]",
                        want.to_string(), got(p, y).to_string());
        }
    };
    if (ring.N(kUnitSector, a, a) > 0)
      compare(alg.structure(kUnitSector, a, a) * kron_identity_right(unit_col, da), "left unit");
    if (ring.N(a, kUnitSector, a) > 0)
      compare(alg.structure(a, kUnitSector, a) * kron_identity_left(da, unit_col), "right unit");
  }
  return report;
}

AlgebraObject rescale_basis(const AlgebraObject& alg, Sector sector, std::size_t index, const QSqrt2& scale) {
  if (scale.is_zero()) throw ArithmeticError("zero rescaling");
  AlgebraObject out = alg;
  const QSqrt2 inv = scale.inverse();
  for (auto& [key, m] : out.C) {
    auto [a1, a2, a3, i] = key;
    (void)i;
    const std::size_t d2 = udim(alg.dims, a2);
    for (std::size_t p = 0; p < m.rows(); ++p)
      for (std::size_t c = 0; c < m.cols(); ++c) {
        std::size_t x = c / d2, y = c % d2;
        if (a1 == sector && x == index) m(p, c) *= scale;
        if (a2 == sector && y == index) m(p, c) *= scale;
        if (a3 == sector && p == index) m(p, c) *= inv;
      }
  }
  if (sector == kUnitSector && index < out.unit.size()) out.unit[index] *= inv;
  return out;
}

nlohmann::ordered_json algebra_to_json(const FusionRing& ring, const AlgebraObject& alg) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json dims = nlohmann::ordered_json::object();
  for (Sector s = 0; s < ring.size(); ++s) dims[ring.sectors()[s]] = alg.dims.at(s);
  j["dims"] = dims;
  nlohmann::ordered_json unit = nlohmann::ordered_json::array();
  for (const auto& u : alg.unit) unit.push_back(qsqrt2_to_json(u));
  j["unit"] = unit;
  nlohmann::ordered_json maps = nlohmann::ordered_json::array();
  for (const auto& [key, m] : alg.C) {
    auto [a1, a2, a3, i] = key;
    if (m.empty()) continue;
    nlohmann::ordered_json e;
    e["channel"] = {ring.sectors()[a1], ring.sectors()[a2], ring.sectors()[a3]};
    e["index"] = i;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(qsqrt2_to_json(m(r, c)));
      rows.push_back(row);
    }
    e["matrix"] = rows;
    maps.push_back(e);
  }
  j["C"] = maps;
  return j;
}

AlgebraObject algebra_from_json(const FusionRing& ring, const nlohmann::json& j) {
  const nlohmann::json& dims_j = j.at("dims");
  std::vector<int> dims(ring.size(), 0);
  for (const auto& item : dims_j.items()) dims.at(ring.index_of(item.key())) = item.value().get<int>();
  AlgebraObject alg = empty_algebra(ring, dims);
  const auto& unit = j.at("unit");
  if (unit.size() != alg.unit.size()) throw FusionParseError("$.unit: length does not match dim E^e");
  for (std::size_t t = 0; t < unit.size(); ++t)
    alg.unit[t] = qsqrt2_from_json(unit[t], "$.unit[" + std::to_string(t) + "]");
  for (std::size_t e = 0; e < j.at("C").size(); ++e) {
    const auto& entry = j.at("C")[e];
    const std::string path = "$.C[" + std::to_string(e) + "]";
    const auto& ch = entry.at("channel");
    ChannelKey key{ring.index_of(ch.at(0)), ring.index_of(ch.at(1)), ring.index_of(ch.at(2)),
                   entry.at("index").get<int>()};
    auto it = alg.C.find(key);
    if (it == alg.C.end()) throw FusionParseError(path + ": channel with zero fusion space");
    const auto& rows = entry.at("matrix");
    if (rows.size() != it->second.rows()) throw FusionParseError(path + ".matrix: wrong row count");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != it->second.cols()) throw FusionParseError(path + ".matrix: wrong column count");
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        it->second(r, c) = qsqrt2_from_json(rows[r][c], path + ".matrix");
    }
  }
  return alg;
}

}  // namespace osva

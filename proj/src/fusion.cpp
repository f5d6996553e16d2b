#include "osva/fusion.hpp"

#include <algorithm>
#include <sstream>

namespace osva {

FusionRing::FusionRing(std::vector<std::string> sectors, std::vector<Rational> lowest_weights)
    : sectors_(std::move(sectors)), weights_(std::move(lowest_weights)) {
  if (weights_.size() != sectors_.size())
    throw std::invalid_argument("one lowest weight per sector required");
  fusion_.assign(sectors_.size() * sectors_.size() * sectors_.size(), 0);
}

Sector FusionRing::index_of(const std::string& label) const {
  auto it = std::find(sectors_.begin(), sectors_.end(), label);
  if (it == sectors_.end()) throw std::out_of_range("unknown sector '" + label + "'");
  return static_cast<Sector>(it - sectors_.begin());
}

void FusionRing::set_N(Sector i, Sector j, Sector k, int value) {
  if (i >= size() || j >= size() || k >= size()) throw std::out_of_range("sector index");
  if (value < 0) throw std::invalid_argument("negative fusion multiplicity");
  fusion_[(i * size() + j) * size() + k] = value;
}

const QSqrt2& FusingMatrix::scalar(Sector m, Sector n) const {
  auto it = entries.find({m, n});
  if (it == entries.end()) throw std::out_of_range("DC entry");
  if (it->second.rows() != 1 || it->second.cols() != 1)
    throw std::logic_error("fusing entry is a block, not a scalar");
  return it->second(0, 0);
}

FusionData::FusionData(FusionRing ring) : ring_(std::move(ring)) {
  std::size_t n = ring_.size();
  fusing_.resize(n * n * n * n);
  for (Sector i = 0; i < n; ++i)
    for (Sector j = 0; j < n; ++j)
      for (Sector k = 0; k < n; ++k)
        for (Sector l = 0; l < n; ++l) fusing(i, j, k, l).ijkl = {i, j, k, l};
}

std::string quadruple_string(const Quadruple& q) {
  std::ostringstream os;
  os << "(" << q[0] << "," << q[1] << "," << q[2] << ";" << q[3] << ")";
  return os.str();
}

std::vector<SectorPair> coupling_pairs(const FusionRing& ring, Sector i, Sector j, Sector k, Sector l) {
  std::vector<SectorPair> out;
  for (Sector m = 0; m < ring.size(); ++m) {
    if (ring.N(i, m, l) == 0 || ring.N(j, k, m) == 0) continue;
    for (Sector n = 0; n < ring.size(); ++n)
      if (ring.N(i, j, n) != 0 && ring.N(n, k, l) != 0) out.emplace_back(m, n);
  }
  return out;
}

CheckReport validate_ring(const FusionRing& ring) {
  CheckReport report;
  report.name = "fusion-ring";
  const std::size_t n = ring.size();
  if (n == 0) {
    report.fail("sectors", "at least the unit sector", "empty");
    return report;
  }
  for (Sector j = 0; j < n; ++j)
    for (Sector k = 0; k < n; ++k) {
      int delta = j == k ? 1 : 0;
      ++report.checked;
      if (ring.N(kUnitSector, j, k) != delta)
        report.fail("N_{e," + std::to_string(j) + "}^" + std::to_string(k), std::to_string(delta),
                    std::to_string(ring.N(kUnitSector, j, k)));
      ++report.checked;
      if (ring.N(j, kUnitSector, k) != delta)
        report.fail("N_{" + std::to_string(j) + ",e}^" + std::to_string(k), std::to_string(delta),
                    std::to_string(ring.N(j, kUnitSector, k)));
    }
  std::size_t assoc = 0;
  for (Sector i = 0; i < n; ++i)
    for (Sector j = 0; j < n; ++j)
      for (Sector k = 0; k < n; ++k)
        for (Sector l = 0; l < n; ++l) {
          long left = 0, right = 0;
          for (Sector m = 0; m < n; ++m) {
            left += static_cast<long>(ring.N(i, j, m)) * ring.N(m, k, l);
            right += static_cast<long>(ring.N(j, k, m)) * ring.N(i, m, l);
          }
          ++assoc;
          if (left != right)
            report.fail("associativity (i,j,k,l)=(" + std::to_string(i) + "," + std::to_string(j) + "," +
                            std::to_string(k) + "," + std::to_string(l) + ")",
                        std::to_string(left), std::to_string(right));
        }
  report.checked += assoc;
  report.notes.push_back(std::to_string(assoc) + " associativity identities checked");
  return report;
}

namespace {

bool is_signed_identity(const Matrix<QSqrt2>& block) {
  if (block.rows() != block.cols() || block.rows() == 0) return false;
  const QSqrt2& s = block(0, 0);
  if (!(s == QSqrt2(1) || s == QSqrt2(-1))) return false;
  for (std::size_t r = 0; r < block.rows(); ++r)
    for (std::size_t c = 0; c < block.cols(); ++c)
      if (block(r, c) != (r == c ? s : QSqrt2(0))) return false;
  return true;
}

}  // namespace

CheckReport validate_fusing(const FusionData& data) {
  CheckReport report;
  report.name = "fusing-coupling";
  const FusionRing& ring = data.ring();
  const std::size_t n = ring.size();
  for (Sector i = 0; i < n; ++i)
    for (Sector j = 0; j < n; ++j)
      for (Sector k = 0; k < n; ++k)
        for (Sector l = 0; l < n; ++l) {
          const FusingMatrix& f = data.fusing(i, j, k, l);
          const std::string q = quadruple_string({i, j, k, l});
          auto pairs = coupling_pairs(ring, i, j, k, l);
          ++report.checked;
          for (const auto& [mn, block] : f.entries) {
            auto [m, nn] = mn;
            std::string where = "F" + q + " entry (" + std::to_string(m) + "," + std::to_string(nn) + ")";
            if (m >= n || nn >= n) {
              report.fail(where, "valid sector indices", "out of range");
              continue;
            }
            if (!std::binary_search(pairs.begin(), pairs.end(), mn)) {
              report.fail(where, "DC (decoupled)", "value present");
              continue;
            }
            std::size_t rows = static_cast<std::size_t>(ring.N(i, m, l)) * ring.N(j, k, m);
            std::size_t cols = static_cast<std::size_t>(ring.N(i, j, nn)) * ring.N(nn, k, l);
            if (block.rows() != rows || block.cols() != cols)
              report.fail(where, "block " + std::to_string(rows) + "x" + std::to_string(cols),
                          "block " + std::to_string(block.rows()) + "x" + std::to_string(block.cols()));
          }
          for (const auto& mn : pairs)
            if (f.is_dc(mn.first, mn.second))
              report.fail("F" + q + " entry (" + std::to_string(mn.first) + "," + std::to_string(mn.second) + ")",
                          "coupled value", "DC");

          bool unit_quadruple = i == kUnitSector || j == kUnitSector || k == kUnitSector || l == kUnitSector;
          if (unit_quadruple && !pairs.empty()) {
            ++report.checked;
            bool ok = pairs.size() == 1 && f.entries.size() == 1 && !f.is_dc(pairs[0].first, pairs[0].second) &&
                      is_signed_identity(f.entries.begin()->second);
            if (!ok) report.fail("F" + q + " (unit sector)", "single entry +-E_{mn}", "other form");
          }
        }
  return report;
}

namespace {

void set_scalar(FusionData& d, Quadruple q, Sector m, Sector n, QSqrt2 value) {
  Matrix<QSqrt2> block(1, 1);
  block(0, 0) = std::move(value);
  d.fusing(q[0], q[1], q[2], q[3]).entries[{m, n}] = std::move(block);
}

}  // namespace

FusionData ising_builtin() {
  FusionRing ring({"0", "1", "2"}, {Rational(0), Rational(1, 2), Rational(1, 16)});
  const int triples[10][3] = {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {0, 2, 2},
                              {2, 0, 2}, {2, 2, 0}, {1, 2, 2}, {2, 1, 2}, {2, 2, 1}};
  for (const auto& t : triples) ring.set_N(t[0], t[1], t[2], 1);
  FusionData data(ring);

  // Signed single-entry matrices, written with the published row/column labels.
  // Those labels put n in the row and m in the column relative to the coupling
  // relation, so each entry is stored at (m, n) = (column, row).
  struct Single {
    Quadruple q;
    Sector row, col;
    int sign;
  };
  const Single singles[] = {
      {{0, 0, 0, 0}, 0, 0, 1}, {{1, 1, 1, 1}, 0, 0, 1},
      {{1, 1, 0, 0}, 0, 1, 1}, {{0, 0, 1, 1}, 0, 1, 1},
      {{1, 0, 0, 1}, 1, 0, 1}, {{0, 1, 1, 0}, 1, 0, 1},
      {{1, 0, 1, 0}, 1, 1, 1}, {{0, 1, 0, 1}, 1, 1, 1},
      {{2, 2, 0, 0}, 0, 2, 1}, {{0, 0, 2, 2}, 0, 2, 1}, {{1, 1, 2, 2}, 0, 2, 1}, {{2, 2, 1, 1}, 0, 2, 1},
      {{0, 2, 2, 0}, 2, 0, 1}, {{2, 0, 0, 2}, 2, 0, 1}, {{1, 2, 2, 1}, 2, 0, 1}, {{2, 1, 1, 2}, 2, 0, 1},
      {{0, 1, 2, 2}, 1, 2, 1}, {{1, 0, 2, 2}, 1, 2, 1}, {{2, 2, 0, 1}, 1, 2, 1}, {{2, 2, 1, 0}, 1, 2, 1},
      {{0, 2, 2, 1}, 2, 1, 1}, {{1, 2, 2, 0}, 2, 1, 1}, {{2, 0, 1, 2}, 2, 1, 1}, {{2, 1, 0, 2}, 2, 1, 1},
      {{1, 2, 1, 2}, 2, 2, -1}, {{2, 1, 2, 1}, 2, 2, -1},
      {{0, 2, 0, 2}, 2, 2, 1}, {{2, 0, 2, 0}, 2, 2, 1}, {{0, 2, 1, 2}, 2, 2, 1},
      {{1, 2, 0, 2}, 2, 2, 1}, {{2, 0, 2, 1}, 2, 2, 1}, {{2, 1, 2, 0}, 2, 2, 1},
  };
  for (const auto& s : singles) set_scalar(data, s.q, s.col, s.row, QSqrt2(s.sign));

  const QSqrt2 h(Rational(0), Rational(1, 2));  // 1/sqrt(2)
  set_scalar(data, {2, 2, 2, 2}, 0, 0, h);
  set_scalar(data, {2, 2, 2, 2}, 0, 1, h);
  set_scalar(data, {2, 2, 2, 2}, 1, 0, h);
  set_scalar(data, {2, 2, 2, 2}, 1, 1, -h);

  // Every remaining coupled entry is zero.
  for (Sector i = 0; i < 3; ++i)
    for (Sector j = 0; j < 3; ++j)
      for (Sector k = 0; k < 3; ++k)
        for (Sector l = 0; l < 3; ++l)
          for (const auto& [m, n] : coupling_pairs(ring, i, j, k, l))
            if (data.fusing(i, j, k, l).is_dc(m, n)) set_scalar(data, {i, j, k, l}, m, n, QSqrt2(0));
  return data;
}

}  // namespace osva

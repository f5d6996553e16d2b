#pragma once

#include "osva/matrix.hpp"
#include "osva/report.hpp"
#include "osva/scalars.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace osva {

using Sector = std::size_t;
/// Index 0 is always the unit sector e.
constexpr Sector kUnitSector = 0;

/// Fusion rules N_{ij}^k over an ordered sector list.
class FusionRing {
 public:
  FusionRing() = default;
  FusionRing(std::vector<std::string> sectors, std::vector<Rational> lowest_weights);

  std::size_t size() const { return sectors_.size(); }
  const std::vector<std::string>& sectors() const { return sectors_; }
  const std::vector<Rational>& lowest_weights() const { return weights_; }
  /// Index of a sector label; throws std::out_of_range.
  Sector index_of(const std::string& label) const;

  int N(Sector i, Sector j, Sector k) const { return fusion_[(i * size() + j) * size() + k]; }
  void set_N(Sector i, Sector j, Sector k, int value);

  friend bool operator==(const FusionRing&, const FusionRing&) = default;

 private:
  std::vector<std::string> sectors_;
  std::vector<Rational> weights_;
  std::vector<int> fusion_;
};

using Quadruple = std::array<Sector, 4>;  // (i, j, k; l)
using SectorPair = std::pair<Sector, Sector>;

/// Fusing-coupling matrix for one quadruple (i, j, k; l). Entry (m, n) maps the
/// product channel V_{im}^l (x) V_{jk}^m to the iterate channel
/// V_{ij}^n (x) V_{nk}^l. A missing entry is the symbol DC; a present entry
/// is a block of shape (N_{im}^l N_{jk}^m) x (N_{ij}^n N_{nk}^l), 1x1 when all
/// multiplicities are one. A present block may be zero.
struct FusingMatrix {
  Quadruple ijkl{};
  std::map<SectorPair, Matrix<QSqrt2>> entries;

  bool is_dc(Sector m, Sector n) const { return !entries.contains({m, n}); }
  /// Scalar entry for multiplicity-free data; throws if DC or not 1x1.
  const QSqrt2& scalar(Sector m, Sector n) const;

  friend bool operator==(const FusingMatrix&, const FusingMatrix&) = default;
};

/// Fusion rules together with one fusing matrix per sector quadruple.
class FusionData {
 public:
  FusionData() = default;
  explicit FusionData(FusionRing ring);

  const FusionRing& ring() const { return ring_; }
  FusionRing& mutable_ring() { return ring_; }

  const FusingMatrix& fusing(Sector i, Sector j, Sector k, Sector l) const {
    return fusing_[flat(i, j, k, l)];
  }
  FusingMatrix& fusing(Sector i, Sector j, Sector k, Sector l) { return fusing_[flat(i, j, k, l)]; }
  const std::vector<FusingMatrix>& all_fusing() const { return fusing_; }

  friend bool operator==(const FusionData&, const FusionData&) = default;

 private:
  std::size_t flat(Sector i, Sector j, Sector k, Sector l) const {
    std::size_t n = ring_.size();
    return ((i * n + j) * n + k) * n + l;
  }

  FusionRing ring_;
  std::vector<FusingMatrix> fusing_;
};

/// Parse failure with a field path (and line number for syntax errors).
class FusionParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All (m, n) with N_{im}^l, N_{jk}^m, N_{ij}^n and N_{nk}^l nonzero, in
/// lexicographic order.
std::vector<SectorPair> coupling_pairs(const FusionRing& ring, Sector i, Sector j, Sector k, Sector l);

/// Unit laws and ring associativity, checked exhaustively.
CheckReport validate_ring(const FusionRing& ring);

/// DC pattern against the coupling relation, block shapes, and the signed
/// single-entry form of quadruples that involve the unit sector.
CheckReport validate_fusing(const FusionData& data);

/// Fusion rules and fusing-coupling matrices of the c = 1/2 minimal model
/// with sectors 0, 1/2, 1/16.
FusionData ising_builtin();

FusionData load_fusion_data(const std::string& text);
/// Deterministic serialization; load_fusion_data(save_fusion_data(d)) == d.
std::string save_fusion_data(const FusionData& data);

nlohmann::ordered_json qsqrt2_to_json(const QSqrt2& x);
/// Throws FusionParseError mentioning `path` on malformed input.
QSqrt2 qsqrt2_from_json(const nlohmann::json& j, const std::string& path);

std::string quadruple_string(const Quadruple& q);

}  // namespace osva

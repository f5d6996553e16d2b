#include "osva/fusion.hpp"

#include <algorithm>
#include <set>

namespace osva {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail_at(const std::string& path, const std::string& what) {
  throw FusionParseError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail_at(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail_at(path + "." + key, "missing field");
  return *it;
}

Rational rational_field(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail_at(path, "expected a string \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    fail_at(path, e.what());
  }
}

Sector sector_ref(const json& j, const std::vector<Sector>& remap, const std::vector<std::string>& labels,
                  const std::string& path) {
  if (j.is_string()) {
    auto it = std::find(labels.begin(), labels.end(), j.get<std::string>());
    if (it == labels.end()) fail_at(path, "unknown sector '" + j.get<std::string>() + "'");
    return remap[static_cast<std::size_t>(it - labels.begin())];
  }
  if (j.is_number_unsigned()) {
    auto idx = j.get<std::size_t>();
    if (idx >= labels.size()) fail_at(path, "sector index out of range");
    return remap[idx];
  }
  fail_at(path, "expected a sector label or index");
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

ordered_json qsqrt2_to_json(const QSqrt2& x) {
  ordered_json j;
  j["a"] = x.a().to_string();
  j["b"] = x.b().to_string();
  return j;
}

QSqrt2 qsqrt2_from_json(const json& j, const std::string& path) {
  return {rational_field(field(j, "a", path), path + ".a"), rational_field(field(j, "b", path), path + ".b")};
}

FusionData load_fusion_data(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FusionParseError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  const std::string root = "$";
  const json& sectors_j = field(doc, "sectors", root);
  if (!sectors_j.is_array() || sectors_j.empty()) fail_at("$.sectors", "expected a non-empty array");
  std::vector<std::string> labels;
  for (std::size_t s = 0; s < sectors_j.size(); ++s) {
    if (!sectors_j[s].is_string()) fail_at("$.sectors[" + std::to_string(s) + "]", "expected a string");
    auto label = sectors_j[s].get<std::string>();
    if (std::find(labels.begin(), labels.end(), label) != labels.end())
      fail_at("$.sectors[" + std::to_string(s) + "]", "duplicate sector label '" + label + "'");
    labels.push_back(label);
  }
  const json& unit_j = field(doc, "unit", root);
  if (!unit_j.is_string()) fail_at("$.unit", "expected a string");
  auto unit_it = std::find(labels.begin(), labels.end(), unit_j.get<std::string>());
  if (unit_it == labels.end()) fail_at("$.unit", "unit is not a listed sector");

  // The unit sector moves to index 0; the others keep their relative order.
  std::vector<Sector> remap(labels.size());
  std::vector<std::string> ordered{*unit_it};
  for (std::size_t s = 0, next = 1; s < labels.size(); ++s) {
    if (labels[s] == *unit_it) {
      remap[s] = 0;
    } else {
      remap[s] = next++;
      ordered.push_back(labels[s]);
    }
  }

  const json& weights_j = field(doc, "weights", root);
  if (!weights_j.is_object()) fail_at("$.weights", "expected an object");
  std::vector<Rational> weights(labels.size());
  for (std::size_t s = 0; s < labels.size(); ++s) {
    auto it = weights_j.find(labels[s]);
    if (it == weights_j.end()) fail_at("$.weights." + labels[s], "missing weight");
    weights[remap[s]] = rational_field(*it, "$.weights." + labels[s]);
  }
  for (const auto& item : weights_j.items())
    if (std::find(labels.begin(), labels.end(), item.key()) == labels.end())
      fail_at("$.weights." + item.key(), "unknown sector");

  FusionRing ring(ordered, weights);
  const json& fusion_j = field(doc, "fusion", root);
  if (!fusion_j.is_array()) fail_at("$.fusion", "expected an array");
  for (std::size_t e = 0; e < fusion_j.size(); ++e) {
    std::string path = "$.fusion[" + std::to_string(e) + "]";
    const json& row = fusion_j[e];
    if (!row.is_array() || row.size() != 4) fail_at(path, "expected [i, j, k, N]");
    Sector i = sector_ref(row[0], remap, labels, path + "[0]");
    Sector j = sector_ref(row[1], remap, labels, path + "[1]");
    Sector k = sector_ref(row[2], remap, labels, path + "[2]");
    if (!row[3].is_number_integer() || row[3].get<long>() < 0) fail_at(path + "[3]", "expected N >= 0");
    ring.set_N(i, j, k, row[3].get<int>());
  }

  FusionData data(ring);
  const std::size_t n = ring.size();
  std::vector<bool> seen(n * n * n * n, false);
  const json& fusing_j = field(doc, "fusing", root);
  if (!fusing_j.is_array()) fail_at("$.fusing", "expected an array");
  for (std::size_t e = 0; e < fusing_j.size(); ++e) {
    std::string path = "$.fusing[" + std::to_string(e) + "]";
    const json& ijkl = field(fusing_j[e], "ijkl", path);
    if (!ijkl.is_array() || ijkl.size() != 4) fail_at(path + ".ijkl", "expected [i, j, k, l]");
    Quadruple q{};
    for (std::size_t t = 0; t < 4; ++t)
      q[t] = sector_ref(ijkl[t], remap, labels, path + ".ijkl[" + std::to_string(t) + "]");
    std::size_t flat = ((q[0] * n + q[1]) * n + q[2]) * n + q[3];
    if (seen[flat]) fail_at(path, "duplicate matrix for quadruple " + quadruple_string(q));
    seen[flat] = true;
    FusingMatrix& f = data.fusing(q[0], q[1], q[2], q[3]);
    const json& entries = field(fusing_j[e], "entries", path);
    if (!entries.is_array()) fail_at(path + ".entries", "expected an array");
    for (std::size_t t = 0; t < entries.size(); ++t) {
      std::string epath = path + ".entries[" + std::to_string(t) + "]";
      const json& mn = field(entries[t], "mn", epath);
      if (!mn.is_array() || mn.size() != 2) fail_at(epath + ".mn", "expected [m, n]");
      Sector m = sector_ref(mn[0], remap, labels, epath + ".mn[0]");
      Sector nn = sector_ref(mn[1], remap, labels, epath + ".mn[1]");
      if (f.entries.contains({m, nn})) fail_at(epath, "duplicate entry");
      Matrix<QSqrt2> block;
      if (entries[t].contains("value")) {
        block = Matrix<QSqrt2>(1, 1);
        block(0, 0) = qsqrt2_from_json(entries[t]["value"], epath + ".value");
      } else if (entries[t].contains("block")) {
        const json& rows = entries[t]["block"];
        if (!rows.is_array() || rows.empty() || !rows[0].is_array())
          fail_at(epath + ".block", "expected a non-empty array of rows");
        block = Matrix<QSqrt2>(rows.size(), rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (!rows[r].is_array() || rows[r].size() != block.cols())
            fail_at(epath + ".block[" + std::to_string(r) + "]", "ragged block");
          for (std::size_t c = 0; c < block.cols(); ++c)
            block(r, c) = qsqrt2_from_json(rows[r][c],
                                           epath + ".block[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
      } else {
        fail_at(epath, "entry needs \"value\" or \"block\"");
      }
      f.entries[{m, nn}] = std::move(block);
    }
  }
  for (Sector i = 0; i < n; ++i)
    for (Sector j = 0; j < n; ++j)
      for (Sector k = 0; k < n; ++k)
        for (Sector l = 0; l < n; ++l)
          if (!seen[((i * n + j) * n + k) * n + l])
            throw FusionParseError("$.fusing: missing matrix for quadruple (" + ring.sectors()[i] + "," +
                                   ring.sectors()[j] + "," + ring.sectors()[k] + ";" + ring.sectors()[l] + ")");
  return data;
}

std::string save_fusion_data(const FusionData& data) {
  const FusionRing& ring = data.ring();
  const auto& labels = ring.sectors();
  ordered_json doc;
  doc["sectors"] = labels;
  doc["unit"] = labels.at(kUnitSector);
  ordered_json weights = ordered_json::object();
  for (Sector s = 0; s < ring.size(); ++s) weights[labels[s]] = ring.lowest_weights()[s].to_string();
  doc["weights"] = weights;
  ordered_json fusion = ordered_json::array();
  for (Sector i = 0; i < ring.size(); ++i)
    for (Sector j = 0; j < ring.size(); ++j)
      for (Sector k = 0; k < ring.size(); ++k)
        if (ring.N(i, j, k) != 0) fusion.push_back({labels[i], labels[j], labels[k], ring.N(i, j, k)});
  doc["fusion"] = fusion;
  ordered_json fusing = ordered_json::array();
  for (const FusingMatrix& f : data.all_fusing()) {
    ordered_json m;
    m["ijkl"] = {labels[f.ijkl[0]], labels[f.ijkl[1]], labels[f.ijkl[2]], labels[f.ijkl[3]]};
    ordered_json entries = ordered_json::array();
    for (const auto& [mn, block] : f.entries) {
      ordered_json e;
      e["mn"] = {labels[mn.first], labels[mn.second]};
      if (block.rows() == 1 && block.cols() == 1) {
        e["value"] = qsqrt2_to_json(block(0, 0));
      } else {
        ordered_json rows = ordered_json::array();
        for (std::size_t r = 0; r < block.rows(); ++r) {
          ordered_json row = ordered_json::array();
          for (std::size_t c = 0; c < block.cols(); ++c) row.push_back(qsqrt2_to_json(block(r, c)));
          rows.push_back(row);
        }
        e["block"] = rows;
      }
      entries.push_back(e);
    }
    m["entries"] = entries;
    fusing.push_back(m);
  }
  doc["fusing"] = fusing;
  return doc.dump(1) + "\n";
}

}  // namespace osva

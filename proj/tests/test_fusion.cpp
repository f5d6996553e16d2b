#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "osva/fusion.hpp"

#include <fstream>
#include <set>
#include <sstream>

using namespace osva;

namespace {

// The ten nonzero c = 1/2 fusion rules, kept separate from the library's table.
const std::set<std::array<int, 3>> kIsingRules = {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {0, 2, 2},
                                                   {2, 0, 2}, {2, 2, 0}, {1, 2, 2}, {2, 1, 2}, {2, 2, 1}};

bool rule(int i, int j, int k) { return kIsingRules.contains({i, j, k}); }

std::vector<SectorPair> brute_force_coupling(int i, int j, int k, int l) {
  std::vector<SectorPair> out;
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n)
      if (rule(i, m, l) && rule(j, k, m) && rule(i, j, n) && rule(n, k, l))
        out.emplace_back(static_cast<Sector>(m), static_cast<Sector>(n));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kUnitOnly = R"({
  "sectors": ["e"], "unit": "e", "weights": {"e": "0"},
  "fusion": [["e", "e", "e", 1]],
  "fusing": [{"ijkl": ["e", "e", "e", "e"], "entries": [{"mn": ["e", "e"], "value": {"a": "1", "b": "0"}}]}]
})";

}  // namespace

TEST_CASE("coupling pairs") {
  const FusionRing ring = ising_builtin().ring();
  CHECK(coupling_pairs(ring, 2, 2, 2, 2) == std::vector<SectorPair>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(coupling_pairs(ring, 0, 0, 0, 0) == std::vector<SectorPair>{{0, 0}});
  CHECK(coupling_pairs(ring, 1, 1, 1, 0).empty());
  // (1,1,0;0): N_{1m}^0 forces m = 1, N_{11}^n forces n = 0.
  CHECK(coupling_pairs(ring, 1, 1, 0, 0) == std::vector<SectorPair>{{1, 0}});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) CHECK(coupling_pairs(ring, i, j, k, l) == brute_force_coupling(i, j, k, l));
}

TEST_CASE("validate_ring") {
  FusionRing ring = ising_builtin().ring();
  CheckReport ok = validate_ring(ring);
  CHECK(ok.passed);
  REQUIRE(!ok.notes.empty());
  CHECK(ok.notes[0] == "81 associativity identities checked");

  ring.set_N(2, 2, 0, 0);
  CheckReport bad = validate_ring(ring);
  CHECK_FALSE(bad.passed);
  // Independent exhaustive recount of the broken identities.
  std::set<std::string> expected;
  auto N = [&](int i, int j, int k) { return (i == 2 && j == 2 && k == 0) ? 0 : (rule(i, j, k) ? 1 : 0); };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          int left = 0, right = 0;
          for (int m = 0; m < 3; ++m) {
            left += N(i, j, m) * N(m, k, l);
            right += N(j, k, m) * N(i, m, l);
          }
          if (left != right)
            expected.insert("associativity (i,j,k,l)=(" + std::to_string(i) + "," + std::to_string(j) + "," +
                            std::to_string(k) + "," + std::to_string(l) + ")");
        }
  std::set<std::string> got;
  for (const auto& w : bad.witnesses) got.insert(w.input);
  CHECK(got == expected);
  CHECK(got.contains("associativity (i,j,k,l)=(2,2,1,1)"));
  CHECK_FALSE(got.contains("associativity (i,j,k,l)=(2,2,2,2)"));

  CHECK(validate_ring(load_fusion_data(kUnitOnly).ring()).passed);
}

TEST_CASE("unit laws are enforced") {
  FusionRing ring = ising_builtin().ring();
  ring.set_N(0, 1, 2, 1);
  CheckReport r = validate_ring(ring);
  CHECK_FALSE(r.passed);
  CHECK(r.witnesses.front().input == "N_{e,1}^2");
}

TEST_CASE("ising built-in matrices") {
  const FusionData d = ising_builtin();
  const FusingMatrix& f0 = d.fusing(0, 0, 0, 0);
  CHECK(f0.entries.size() == 1);
  CHECK(f0.scalar(0, 0) == QSqrt2(1));
  const FusingMatrix& f1 = d.fusing(1, 2, 1, 2);
  CHECK(f1.entries.size() == 1);
  CHECK(f1.scalar(2, 2) == QSqrt2(-1));
  CHECK(d.fusing(2, 1, 2, 1).scalar(2, 2) == QSqrt2(-1));
  const QSqrt2 h(Rational(0), Rational(1, 2));
  const FusingMatrix& f2 = d.fusing(2, 2, 2, 2);
  CHECK(f2.scalar(0, 0) == h);
  CHECK(f2.scalar(0, 1) == h);
  CHECK(f2.scalar(1, 0) == h);
  CHECK(f2.scalar(1, 1) == -h);
  CHECK(f2.is_dc(2, 2));
  CHECK(f2.is_dc(0, 2));
  CHECK(d.ring().lowest_weights() == std::vector<Rational>{Rational(0), Rational(1, 2), Rational(1, 16)});
}

TEST_CASE("every coupled entry of the ising data is a listed nonzero value") {
  const FusionData d = ising_builtin();
  std::size_t coupled_quadruples = 0;
  for (const FusingMatrix& f : d.all_fusing()) {
    auto pairs = coupling_pairs(d.ring(), f.ijkl[0], f.ijkl[1], f.ijkl[2], f.ijkl[3]);
    std::vector<SectorPair> support;
    for (const auto& [mn, block] : f.entries) support.push_back(mn);
    CHECK(support == pairs);
    if (!pairs.empty()) ++coupled_quadruples;
    for (const auto& [mn, block] : f.entries) CHECK_FALSE(block(0, 0).is_zero());
  }
  CHECK(coupled_quadruples == 33);
}

TEST_CASE("validate_fusing") {
  FusionData d = ising_builtin();
  CheckReport ok = validate_fusing(d);
  CHECK(ok.passed);
  CHECK(ok.witnesses.empty());

  FusionData decoupled = d;
  Matrix<QSqrt2> one(1, 1, QSqrt2(1));
  decoupled.fusing(2, 2, 2, 2).entries[{2, 2}] = one;
  CheckReport r1 = validate_fusing(decoupled);
  CHECK_FALSE(r1.passed);
  CHECK(r1.witnesses.front().input == "F(2,2,2;2) entry (2,2)");
  CHECK(r1.witnesses.front().expected == "DC (decoupled)");

  FusionData moved = d;
  moved.fusing(1, 1, 0, 0).entries.clear();
  moved.fusing(1, 1, 0, 0).entries[{0, 0}] = one;
  CheckReport r2 = validate_fusing(moved);
  CHECK_FALSE(r2.passed);
  bool saw_decoupled = false, saw_missing = false;
  for (const auto& w : r2.witnesses) {
    saw_decoupled |= w.input == "F(1,1,0;0) entry (0,0)" && w.expected == "DC (decoupled)";
    saw_missing |= w.input == "F(1,1,0;0) entry (1,0)" && w.got == "DC";
  }
  CHECK(saw_decoupled);
  CHECK(saw_missing);

  FusionData rescaled = d;
  rescaled.fusing(0, 1, 1, 0).entries.at({0, 1})(0, 0) = QSqrt2(2);
  CHECK_FALSE(validate_fusing(rescaled).passed);
}

TEST_CASE("load and save") {
  const FusionData d = ising_builtin();
  const std::string text = save_fusion_data(d);
  const FusionData back = load_fusion_data(text);
  CHECK(back == d);
  CHECK(save_fusion_data(back) == text);

  const FusionData shipped = load_fusion_data(read_file(std::string(OSVA_DATA_DIR) + "/ising.json"));
  CHECK(shipped.ring().size() == 3);
  CHECK(shipped.ring().lowest_weights()[2] == Rational(1, 16));
  CHECK(shipped == d);

  const FusionData unit = load_fusion_data(kUnitOnly);
  CHECK(unit.ring().size() == 1);
  CHECK(unit.fusing(0, 0, 0, 0).scalar(0, 0) == QSqrt2(1));
  CHECK(validate_fusing(unit).passed);
}

TEST_CASE("loader errors") {
  std::string missing = R"({"sectors": ["e"], "unit": "e", "weights": {"e": "0"},
    "fusion": [["e","e","e",1]], "fusing": []})";
  CHECK_THROWS_WITH_AS(load_fusion_data(missing), doctest::Contains("missing matrix for quadruple (e,e,e;e)"),
                       FusionParseError);

  std::string dup = R"({"sectors": ["e", "e"], "unit": "e", "weights": {"e": "0"}, "fusion": [], "fusing": []})";
  CHECK_THROWS_WITH_AS(load_fusion_data(dup), doctest::Contains("duplicate sector label"), FusionParseError);

  std::string syntax = "{\n  \"sectors\": [\"e\"\n  \"unit\": 1\n}";
  CHECK_THROWS_WITH_AS(load_fusion_data(syntax), doctest::Contains("line 3"), FusionParseError);

  std::string bad_value = R"({"sectors": ["e"], "unit": "e", "weights": {"e": "0"}, "fusion": [["e","e","e",1]],
    "fusing": [{"ijkl": ["e","e","e","e"], "entries": [{"mn": ["e","e"], "value": {"a": "1/x", "b": "0"}}]}]})";
  CHECK_THROWS_WITH_AS(load_fusion_data(bad_value), doctest::Contains("$.fusing[0].entries[0].value.a"),
                       FusionParseError);
}

TEST_CASE("unit sector is moved to index 0") {
  std::string text = R"({"sectors": ["x", "e"], "unit": "e", "weights": {"x": "1/2", "e": "0"},
    "fusion": [["e","e","e",1], ["e","x","x",1], ["x","e","x",1], ["x","x","e",1]],
    "fusing": []})";
  // Fill in all 16 quadruples as DC to get past the completeness check.
  auto doc = nlohmann::json::parse(text);
  for (const char* i : {"e", "x"})
    for (const char* j : {"e", "x"})
      for (const char* k : {"e", "x"})
        for (const char* l : {"e", "x"})
          doc["fusing"].push_back({{"ijkl", {i, j, k, l}}, {"entries", nlohmann::json::array()}});
  FusionData d = load_fusion_data(doc.dump());
  CHECK(d.ring().sectors() == std::vector<std::string>{"e", "x"});
  CHECK(d.ring().lowest_weights()[1] == Rational(1, 2));
  CHECK(d.ring().N(1, 1, 0) == 1);
  CHECK(validate_ring(d.ring()).passed);
  // All-DC data fails the coupling check wherever channels couple.
  CHECK_FALSE(validate_fusing(d).passed);
}

TEST_CASE("multiplicity blocks load and validate by shape") {
  std::string text = R"({"sectors": ["e"], "unit": "e", "weights": {"e": "0"}, "fusion": [["e","e","e",2]],
    "fusing": [{"ijkl": ["e","e","e","e"], "entries": [{"mn": ["e","e"], "block": [
      [{"a":"1","b":"0"},{"a":"0","b":"0"},{"a":"0","b":"0"},{"a":"0","b":"0"}],
      [{"a":"0","b":"0"},{"a":"1","b":"0"},{"a":"0","b":"0"},{"a":"0","b":"0"}],
      [{"a":"0","b":"0"},{"a":"0","b":"0"},{"a":"1","b":"0"},{"a":"0","b":"0"}],
      [{"a":"0","b":"0"},{"a":"0","b":"0"},{"a":"0","b":"0"},{"a":"1","b":"0"}]]}]}]})";
  FusionData d = load_fusion_data(text);
  CHECK(d.fusing(0, 0, 0, 0).entries.at({0, 0}).rows() == 4);
  CHECK(load_fusion_data(save_fusion_data(d)) == d);
  // The unit law fails (N_{ee}^e = 2), but block shapes are consistent.
  CHECK_FALSE(validate_ring(d.ring()).passed);
  CHECK(validate_fusing(d).passed);
}

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "distfl/instance.hpp"
#include "doctest.h"

using namespace distfl;

namespace {

Instance make(const std::vector<Rat>& f, const std::vector<std::vector<Rat>>& c,
              int bits = 32) {
  Instance inst;
  inst.opening_cost = f;
  inst.connection_cost = c;
  inst.bit_width = bits;
  return inst;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rat("3/2") == Rat(3, 2));
  CHECK(parse_rat("7") == Rat(7));
  CHECK(parse_rat("-2") == Rat(-2));
  CHECK(format_rat(Rat(3, 2)) == "3/2");
  CHECK(format_rat(Rat(4, 2)) == "2");
  CHECK_THROWS_AS(parse_rat("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK(rat_pow(Rat(3, 2), 3) == Rat(27, 8));
  CHECK(ceil_log(Rat(11, 10), Rat(155)) == 53);
  CHECK(ceil_log(Rat(2), Rat(1)) == 0);
}

TEST_CASE("validate_instance accepts the unit instance") {
  auto inst = make({Rat(1)}, {{Rat(1)}});
  CHECK(validate_instance(inst).empty());
}

TEST_CASE("validate_instance reports quadrilateral violations with witnesses") {
  // c_00=10 but c_01 + c_11 + c_10 = 3
  auto inst = make({Rat(1), Rat(1)}, {{Rat(10), Rat(1)}, {Rat(1), Rat(1)}});
  auto v = validate_instance(inst);
  REQUIRE(!v.empty());
  bool found = false;
  for (const auto& viol : v)
    if (viol.kind == ViolationKind::MetricViolation &&
        viol.where == std::vector<int>{0, 0, 1, 1})
      found = true;
  CHECK(found);
}

TEST_CASE("validate_instance reports missing normalization") {
  auto inst = make({Rat(2)}, {{Rat(2)}});
  auto v = validate_instance(inst);
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::NotNormalized);
}

TEST_CASE("validate_instance reports negative and oversized costs") {
  auto neg = make({Rat(-1)}, {{Rat(1)}});
  REQUIRE(validate_instance(neg).size() == 1);
  CHECK(validate_instance(neg)[0].kind == ViolationKind::NegativeCost);

  auto big = make({Rat(1)}, {{Rat(BigInt(1) << 40)}}, 20);
  bool found = false;
  for (const auto& viol : validate_instance(big))
    if (viol.kind == ViolationKind::BitWidthExceeded) found = true;
  CHECK(found);
}

TEST_CASE("normalize divides by the smallest non-zero cost") {
  auto inst = make({Rat(0)}, {{Rat(2), Rat(6)}, {Rat(0), Rat(2)}});
  inst.opening_cost = {Rat(0), Rat(2)};
  auto norm = normalize(inst);
  CHECK(norm.connection_cost[0][0] == 1);
  CHECK(norm.connection_cost[0][1] == 3);
  CHECK(norm.connection_cost[1][0] == 0);
  CHECK(norm.opening_cost[1] == 1);

  auto frac = make({Rat(3, 2)}, {{Rat(3)}});
  auto nfrac = normalize(frac);
  CHECK(nfrac.opening_cost[0] == 1);
  CHECK(nfrac.connection_cost[0][0] == 2);
}

TEST_CASE("normalize is the identity on normalized instances and idempotent") {
  auto inst = make({Rat(1)}, {{Rat(0), Rat(2)}});
  auto once = normalize(inst);
  CHECK(once == inst);
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    auto gen = generate_instance({3, 4, 50, 0, 16, seed});
    CHECK(normalize(gen).opening_cost == gen.opening_cost);
    CHECK(normalize(gen).connection_cost == gen.connection_cost);
  }
}

TEST_CASE("normalize rejects the all-zero instance") {
  auto inst = make({Rat(0)}, {{Rat(0)}});
  CHECK_THROWS(normalize(inst));
}

TEST_CASE("generate_instance: degenerate 1x1 grid hits the all-zero error") {
  CHECK_THROWS(generate_instance({1, 1, 1, 0, 0, 42}));
  // forcing f >= 1 avoids the degenerate case
  auto inst = generate_instance({1, 1, 1, 1, 1, 42});
  CHECK(validate_instance(inst).empty());
}

TEST_CASE("generate_instance is deterministic") {
  auto a = generate_instance({2, 3, 100, 1, 64, 7});
  auto b = generate_instance({2, 3, 100, 1, 64, 7});
  CHECK(a == b);
  auto c = generate_instance({2, 3, 100, 1, 64, 8});
  CHECK(a != c);
}

TEST_CASE("generated corpus always validates and avoids zero-cost edges") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    GenParams p;
    p.num_facilities = 1 + static_cast<int>(seed % 6);
    p.num_clients = 1 + static_cast<int>(seed % 8);
    p.grid_size = 64;
    p.f_min = 0;
    p.f_max = 64;
    p.seed = seed;
    auto inst = generate_instance(p);
    CHECK(validate_instance(inst).empty());
    for (const auto& row : inst.connection_cost)
      for (const Rat& c : row) CHECK(c > 0);
  }
}

TEST_CASE("solution_cost sums opening and connection costs exactly") {
  auto inst = make({Rat(1)}, {{Rat(1)}});
  Solution sol{{0}, {0}};
  CHECK(solution_cost(sol, inst) == 2);

  auto two = make({Rat(1)}, {{Rat(1), Rat(1)}});
  Solution sol2{{0}, {0, 0}};
  CHECK(solution_cost(sol2, two) == 3);
}

TEST_CASE("solution_cost rejects assignment to closed facilities") {
  auto inst = make({Rat(1), Rat(1)}, {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}});
  Solution sol{{0}, {0, 1}};
  CHECK_THROWS(solution_cost(sol, inst));
  Solution unassigned{{0}, {0, -1}};
  CHECK_THROWS(solution_cost(unassigned, inst));
}

TEST_CASE("solution_cost is monotone in each used cost entry") {
  auto inst = generate_instance({3, 4, 40, 1, 9, 11});
  Solution sol;
  sol.open = {0, 2};
  for (int j = 0; j < inst.num_clients(); ++j)
    sol.assignment.push_back(j % 2 == 0 ? 0 : 2);
  const Rat base = solution_cost(sol, inst);
  for (int i : sol.open) {
    Instance bumped = inst;
    bumped.opening_cost[i] += Rat(1, 3);
    CHECK(solution_cost(sol, bumped) > base);
  }
  for (int j = 0; j < inst.num_clients(); ++j) {
    Instance bumped = inst;
    bumped.connection_cost[sol.assignment[j]][j] += Rat(2, 7);
    CHECK(solution_cost(sol, bumped) > base);
  }
}

TEST_CASE("instance files round-trip") {
  auto inst = generate_instance({3, 5, 64, 0, 64, 123});
  auto path = temp_file("distfl_inst_roundtrip.fl");
  write_instance(inst, path.string());
  auto loaded = read_instance(path.string());
  CHECK(loaded == inst);
  std::filesystem::remove(path);
}

TEST_CASE("instance files with rational costs round-trip") {
  auto inst = make({Rat(3, 2), Rat(0)}, {{Rat(1), Rat(2)}, {Rat(1), Rat(5, 2)}});
  REQUIRE(validate_instance(inst).empty());
  auto path = temp_file("distfl_inst_rat.fl");
  write_instance(inst, path.string());
  CHECK(read_instance(path.string()) == inst);
  std::filesystem::remove(path);
}

TEST_CASE("instance loading rejects invalid files") {
  auto path = temp_file("distfl_inst_bad.fl");

  {
    std::ofstream out(path);
    out << "FL v1 1 1 32\nF 0 -1\nC 0 1\n";
  }
  CHECK_THROWS(read_instance(path.string()));

  {
    std::ofstream out(path);
    out << "FL v1 1 1 4\nF 0 1\nC 0 100\n";  // 100 needs 7 bits, declared 4
  }
  CHECK_THROWS(read_instance(path.string()));

  {
    std::ofstream out(path);
    out << "FL v1 1 1 32\nF 0 1.5\nC 0 1\n";  // decimal token
  }
  CHECK_THROWS(read_instance(path.string()));

  {
    std::ofstream out(path);
    out << "FL v2 1 1 32\n";
  }
  CHECK_THROWS(read_instance(path.string()));
  std::filesystem::remove(path);
}

TEST_CASE("solution files round-trip") {
  auto inst = make({Rat(1), Rat(2)}, {{Rat(1), Rat(1)}, {Rat(1), Rat(1)}});
  Solution sol{{0, 1}, {1, 0}};
  auto path = temp_file("distfl_sol_roundtrip.txt");
  write_solution(sol, path.string());
  CHECK(read_solution(path.string(), inst) == sol);
  std::filesystem::remove(path);
}

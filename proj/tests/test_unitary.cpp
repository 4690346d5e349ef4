#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <vector>

#include "coherence/coherence.hpp"
#include "coherence/unitary.hpp"

using namespace coherence;

namespace {

// All valid index sets for a given n, by the even-case chain constraint.
std::vector<std::vector<int>> valid_index_sets(int n) {
  int m = n / 2;
  std::vector<std::vector<int>> out;
  for (int mask = 1; mask < (1 << (m + 1)); ++mask) {
    std::vector<int> I;
    for (int i = 0; i <= m; ++i)
      if (mask & (1 << i)) I.push_back(i);
    if (n % 2 == 0 && std::count(I.begin(), I.end(), m - 1) &&
        !std::count(I.begin(), I.end(), m))
      continue;
    out.push_back(I);
  }
  return out;
}

}  // namespace

TEST_CASE("index set validation") {
  CHECK_THROWS_AS(UnitaryModel::build(3, 1, 2, {0}), std::invalid_argument);
  CHECK_THROWS_AS(UnitaryModel::build(5, 3, 2, {0}), std::invalid_argument);
  CHECK_THROWS_AS(UnitaryModel::build(5, 2, 2, {0}), std::invalid_argument);
  CHECK_THROWS_AS(UnitaryModel::build(5, 2, 3, {}), std::invalid_argument);
  CHECK_THROWS_AS(UnitaryModel::build(5, 2, 3, {3}), std::invalid_argument);
  CHECK_THROWS_AS(UnitaryModel::build(5, 2, 3, {-1}), std::invalid_argument);
  // even n: m-1 in I requires m
  CHECK_THROWS_AS(UnitaryModel::build(6, 3, 3, {2}), std::invalid_argument);
  CHECK_THROWS_AS(UnitaryModel::build(6, 2, 4, {0, 2}), std::invalid_argument);
  CHECK_NOTHROW(UnitaryModel::build(6, 3, 3, {2, 3}));
  CHECK_NOTHROW(UnitaryModel::build(6, 3, 3, {3}));
  CHECK_NOTHROW(UnitaryModel::build(5, 2, 3, {1}));  // odd n: no constraint
}

TEST_CASE("facet mapping follows the lattice-chain rules") {
  // Odd n: Y = I verbatim.
  auto u5 = UnitaryModel::build(5, 2, 3, {0});
  CHECK(u5.facet_labels == std::vector<int>{0});
  CHECK(u5.facet == std::vector<int>{u5.label_to_node[0]});
  auto u5b = UnitaryModel::build(5, 2, 3, {0, 2});
  CHECK(u5b.facet_labels.size() == 2);

  // Even n with both m-1 and m: m-1 is replaced by m-prime.
  auto u6 = UnitaryModel::build(6, 3, 3, {2, 3});
  REQUIRE(u6.facet_labels.size() == 2);
  std::vector<int> want{3, u6.prime_label()};
  std::sort(want.begin(), want.end());
  std::vector<int> got = u6.facet_labels;
  std::sort(got.begin(), got.end());
  CHECK(got == want);
  CHECK(u6.label_name(u6.prime_label()) == "3'");

  // Without m-1 the set passes through unchanged (labels follow node order).
  auto u6b = UnitaryModel::build(6, 3, 3, {0, 3});
  std::vector<int> labels6b = u6b.facet_labels;
  std::sort(labels6b.begin(), labels6b.end());
  CHECK(labels6b == std::vector<int>{0, 3});
}

TEST_CASE("kappa tables") {
  auto u5 = UnitaryModel::build(5, 2, 3, {0});
  CHECK(u5.kappa(0) == 1);
  CHECK(u5.kappa(1) == 1);
  CHECK(u5.kappa(2) == 2);
  CHECK_THROWS_AS(u5.kappa(3), std::invalid_argument);

  auto u6 = UnitaryModel::build(6, 3, 3, {3});
  CHECK(u6.kappa(0) == 1);
  CHECK(u6.kappa(1) == 1);
  CHECK(u6.kappa(3) == 2);
  CHECK(u6.kappa(u6.prime_label()) == 2);
  CHECK_THROWS_AS(u6.kappa(2), std::invalid_argument);  // the replaced name
}

TEST_CASE("kappa times dual label is two for every named vertex") {
  for (int n = 4; n <= 8; ++n) {
    int m = n / 2;
    auto u = UnitaryModel::build(n, 0, n, {m});
    INFO("n = " << n);
    CHECK(u.kappa_identity_holds());
  }
}

TEST_CASE("central charge is twice the chain length times the power") {
  for (int n = 4; n <= 8; ++n)
    for (const auto& I : valid_index_sets(n)) {
      auto u = UnitaryModel::build(n, 0, n, I);
      for (long long a = 1; a <= 3; ++a) {
        INFO("n = " << n << " |I| = " << I.size() << " a = " << a);
        CHECK(u.central_charge(a) == 2 * a * static_cast<long long>(I.size()));
      }
    }
  CHECK(UnitaryModel::build(5, 2, 3, {0, 2}).central_charge(3) == 12);
  CHECK(UnitaryModel::build(5, 2, 3, {0, 2}).central_charge(1) == 4);
}

TEST_CASE("special parahorics sit at the dual-label pattern the chain predicts") {
  for (int n = 4; n <= 8; ++n) {
    auto u = UnitaryModel::build(n, 0, n, {0, n / 2});
    INFO("n = " << n);
    for (int label : u.special_parahoric_labels()) {
      int node = u.label_to_node[label];
      REQUIRE(node >= 0);
      CHECK(u.datum.special_node[node]);
    }
    if (n % 2) {
      // The m-side special vertex carries dual label one, the 0-side two.
      CHECK(u.datum.dual_marks[u.label_to_node[u.m]] == 1);
      CHECK(u.datum.dual_marks[u.label_to_node[0]] == 2);
    } else {
      CHECK(u.datum.dual_marks[u.label_to_node[u.m]] == 1);
      CHECK(u.datum.dual_marks[u.label_to_node[u.prime_label()]] == 1);
    }
  }
}

TEST_CASE("signature coweights") {
  CHECK(UnitaryModel::mu_signature(5, 0, 5) == IntVec{0, 0, 0, 0});
  CHECK(UnitaryModel::mu_signature(2, 1, 1) == IntVec{1});
  CHECK(UnitaryModel::mu_signature(5, 2, 3) == IntVec{0, 0, 1, 0});
  CHECK_THROWS_AS(UnitaryModel::mu_signature(5, 3, 2), std::invalid_argument);
  auto base = RootDatum::build('A', 4);
  CHECK(base.is_minuscule(Coweight{UnitaryModel::mu_signature(5, 2, 3)}));
}

TEST_CASE("bundle levels feed the coherence identity for a small model") {
  // n = 4, signature (1,3), hyperspecial-side chain {m}: the model bundle has
  // level two at one special vertex and central charge 2.
  auto u = UnitaryModel::build(4, 1, 3, {2});
  REQUIRE(u.facet.size() == 1);
  REQUIRE(u.bundle_levels(1) == IntVec{2});

  CoherenceScene scene(RootDatum::build('A', 3), DiagramTwist::standard('A', 3, 2));
  LineBundle L{u.facet, u.bundle_levels(1)};
  auto rep = scene.check_grassmannian_identity(UnitaryModel::mu_signature(4, 1, 3), L);
  CHECK(rep.charge == u.central_charge(1));
  CHECK(rep.ok);
  CHECK(rep.rhs == 10);  // charge-2 sections on P^3

  // Same with the other special vertex in the chain.
  auto u2 = UnitaryModel::build(4, 1, 3, {1, 2});
  LineBundle L2{u2.facet, u2.bundle_levels(1)};
  auto rep2 = scene.check_grassmannian_identity(UnitaryModel::mu_signature(4, 1, 3), L2);
  CHECK(rep2.charge == 4);
  CHECK(rep2.ok);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "divmax/error.hpp"
#include "divmax/oracle.hpp"
#include "divmax/rng.hpp"
#include "divmax/seqsolve.hpp"
#include "testutil.hpp"

using namespace divmax;

namespace {
const MetricSpace kEuclid = euclidean_space();

constexpr DiversityKind kAllKinds[] = {
    DiversityKind::remote_edge,  DiversityKind::remote_clique,
    DiversityKind::remote_star,  DiversityKind::remote_bipartition,
    DiversityKind::remote_tree,  DiversityKind::remote_cycle};

constexpr DiversityKind kDelegateKinds[] = {
    DiversityKind::remote_clique, DiversityKind::remote_star,
    DiversityKind::remote_bipartition, DiversityKind::remote_tree};
}  // namespace

TEST_CASE("solve_sequential examples on the line") {
  const auto s = testutil::line({0.0, 1.0, 2.0, 9.0, 10.0});
  const Solution edge = solve_sequential(DiversityKind::remote_edge, s, 2, kEuclid);
  CHECK(edge.value.value == doctest::Approx(10.0));
  CHECK(edge.alpha == 2.0);

  const Solution clique = solve_sequential(DiversityKind::remote_clique, s, 2, kEuclid);
  CHECK(clique.value.value == doctest::Approx(10.0));

  const Solution whole = solve_sequential(DiversityKind::remote_clique, s, s.size(), kEuclid);
  CHECK(whole.value.value ==
        doctest::Approx(evaluate(DiversityKind::remote_clique, s, kEuclid).value));
}

TEST_CASE("k above |S| is an argument error") {
  const auto s = testutil::line({0.0, 1.0});
  CHECK_THROWS_AS(solve_sequential(DiversityKind::remote_edge, s, 3, kEuclid), Error);
}

TEST_CASE("alpha guarantee against the oracle on random instances") {
  Rng rng(101);
  int instances = 0;
  while (instances < 200) {
    const std::size_t n = 5 + rng.below(8);  // up to 12
    const std::size_t k = 2 + rng.below(3);
    if (k > n) continue;
    const int dim = 1 + static_cast<int>(rng.below(3));
    const MetricSpace m = (instances % 2 == 0) ? euclidean_space() : cosine_space();
    const auto s = testutil::random_points(rng, n, dim, true);
    for (const DiversityKind kind : kAllKinds) {
      if (kind == DiversityKind::remote_clique && k % 2 == 1) continue;
      const double opt = brute_force(kind, s, k, m).value;
      const Solution sol = solve_sequential(kind, s, k, m);
      CHECK(sol.value.value * sol.alpha >= opt - 1e-9);
    }
    ++instances;
  }
}

TEST_CASE("gendiv examples") {
  const auto pts = testutil::line({0.0, 10.0});
  GeneralizedCoreset t;
  t.pairs.push_back({pts[0], 2});
  t.pairs.push_back({pts[1], 1});
  CHECK(gendiv(DiversityKind::remote_clique, t, kEuclid) == doctest::Approx(20.0));
  CHECK(gendiv(DiversityKind::remote_edge, t, kEuclid) == 0.0);
  CHECK(gendiv(DiversityKind::remote_tree, t, kEuclid) == doctest::Approx(10.0));

  GeneralizedCoreset tiny;
  tiny.pairs.push_back({pts[0], 1});
  CHECK_THROWS_AS(gendiv(DiversityKind::remote_edge, tiny, kEuclid), Error);
}

TEST_CASE("solve_generalized examples") {
  const auto pts = testutil::line({0.0, 10.0});
  GeneralizedCoreset t;
  t.pairs.push_back({pts[0], 2});
  t.pairs.push_back({pts[1], 2});

  const GeneralizedCoreset picked =
      solve_generalized(DiversityKind::remote_clique, t, 2, kEuclid);
  CHECK(picked.expanded_size() == 2);
  REQUIRE(picked.size() == 2);
  CHECK(picked.pairs[0].multiplicity == 1);
  CHECK(picked.pairs[1].multiplicity == 1);
  CHECK(gendiv(DiversityKind::remote_clique, picked, kEuclid) == doctest::Approx(10.0));

  const GeneralizedCoreset all =
      solve_generalized(DiversityKind::remote_clique, t, 4, kEuclid);
  CHECK(all.expanded_size() == 4);
  CHECK(all.size() == t.size());

  const auto pts2 = testutil::line({0.0, 5.0});
  GeneralizedCoreset t2;
  t2.pairs.push_back({pts2[0], 3});
  t2.pairs.push_back({pts2[1], 1});
  const GeneralizedCoreset tree =
      solve_generalized(DiversityKind::remote_tree, t2, 3, kEuclid);
  CHECK(tree.expanded_size() == 3);
  CHECK(gendiv(DiversityKind::remote_tree, tree, kEuclid) == doctest::Approx(5.0));
  REQUIRE(tree.size() == 2);
  CHECK(tree.pairs[0].multiplicity == 2);
  CHECK(tree.pairs[1].multiplicity == 1);
}

TEST_CASE("solve_generalized validates its inputs") {
  const auto pts = testutil::line({0.0, 10.0});
  GeneralizedCoreset t;
  t.pairs.push_back({pts[0], 1});
  t.pairs.push_back({pts[1], 1});
  CHECK_THROWS_AS(solve_generalized(DiversityKind::remote_edge, t, 2, kEuclid), Error);
  CHECK_THROWS_AS(solve_generalized(DiversityKind::remote_clique, t, 3, kEuclid), Error);
}

TEST_CASE("solve_generalized returns a coherent subset with the alpha guarantee") {
  Rng rng(211);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t s_count = 2 + rng.below(4);
    const auto pts = testutil::random_points(rng, s_count, 2, false);
    GeneralizedCoreset t;
    for (const Point& p : pts) t.pairs.push_back({p, 1 + rng.below(3)});
    const std::size_t m_total = t.expanded_size();
    const std::size_t k = 2 + rng.below(std::max<std::size_t>(m_total - 1, 1));
    if (k > m_total || k > 7) continue;
    for (const DiversityKind kind : kDelegateKinds) {
      const GeneralizedCoreset got = solve_generalized(kind, t, k, kEuclid);
      CHECK(got.expanded_size() == k);
      // coherence: every pair appears in t with at least this multiplicity
      for (const auto& pr : got.pairs) {
        bool found = false;
        for (const auto& orig : t.pairs) {
          if (orig.point.id == pr.point.id) {
            found = true;
            CHECK(pr.multiplicity <= orig.multiplicity);
          }
        }
        CHECK(found);
      }
      if (kind == DiversityKind::remote_clique && k % 2 == 1) continue;
      const double best = testutil::brute_gendiv_k(kind, t, k, kEuclid);
      CHECK(gendiv(kind, got, kEuclid) * alpha_of(kind) >= best - 1e-9);
    }
  }
}

TEST_CASE("gendiv_k of remote-clique is monotone under coherent supersets") {
  Rng rng(307);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = testutil::random_points(rng, 3, 2, false);
    GeneralizedCoreset small, big;
    for (const Point& p : pts) {
      const std::size_t m_small = 1 + rng.below(2);
      small.pairs.push_back({p, m_small});
      big.pairs.push_back({p, m_small + rng.below(2)});
    }
    const std::size_t k = 3;
    if (small.expanded_size() < k) continue;
    CHECK(testutil::brute_gendiv_k(DiversityKind::remote_clique, small, k, kEuclid) <=
          testutil::brute_gendiv_k(DiversityKind::remote_clique, big, k, kEuclid) + 1e-12);
  }
}

#include <doctest.h>

#include <random>

#include "frontnav/fmm.hpp"
#include "frontnav/policy.hpp"
#include "oracle.hpp"

using namespace frontnav;

namespace {

std::vector<CandidateScore> candidates(std::vector<double> llm, std::vector<double> cu) {
  std::vector<CandidateScore> out;
  for (std::size_t i = 0; i < llm.size(); ++i) out.push_back({static_cast<int>(i), llm[i], cu[i]});
  return out;
}

Branch to_branch(int b) { return b == 0 ? Branch::kLlm : b == 1 ? Branch::kMixed : Branch::kCu; }

}  // namespace

TEST_CASE("cost-utility normalisation") {
  const auto v = normalize_cu({2, 4, 6});
  CHECK(v == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(normalize_cu({5}) == std::vector<double>{1.0});
  CHECK(normalize_cu({3, 3}) == std::vector<double>{1.0, 1.0});
  CHECK_THROWS(normalize_cu({}));
}

TEST_CASE("fusion rule examples") {
  auto d = select_frontier(candidates({0.4, 0.1}, {0.2, 0.9}));
  CHECK(d.chosen == 0);
  CHECK(d.branch == Branch::kLlm);
  d = select_frontier(candidates({0.05, 0.1}, {0.2, 0.9}));
  CHECK(d.chosen == 1);
  CHECK(d.branch == Branch::kCu);
  d = select_frontier(candidates({0.2, 0.25}, {1.0, 0.0}));
  CHECK(d.chosen == 0);
  CHECK(d.branch == Branch::kMixed);
  CHECK(d.scores.size() == 2);
  CHECK_THROWS_AS(select_frontier({}), ExplorationComplete);
}

TEST_CASE("ties go to the lower id") {
  auto d = select_frontier(candidates({0.5, 0.5}, {0, 1}));
  CHECK(d.chosen == 0);
  d = select_frontier(candidates({0.1, 0.1, 0.1}, {0.3, 0.7, 0.7}));
  CHECK(d.chosen == 1);
}

TEST_CASE("bound edges") {
  const ScoreBound b;
  CHECK(branch_for(0.3, b) == Branch::kMixed);
  CHECK(branch_for(0.15, b) == Branch::kMixed);
  CHECK(branch_for(0.3000001, b) == Branch::kLlm);
  CHECK(branch_for(0.1499999, b) == Branch::kCu);
}

TEST_CASE("branch property over random score sets") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> count(1, 8);
  std::uniform_real_distribution<double> llm(0.0, 0.45), cu(-1.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = count(rng);
    std::vector<double> l(n), c(n);
    for (int i = 0; i < n; ++i) {
      l[i] = llm(rng);
      c[i] = cu(rng);
    }
    const auto [branch, best] = oracle::fusion(l, c, 0.15, 0.3);
    const auto d = select_frontier(candidates(l, c));
    REQUIRE(d.branch == to_branch(branch));
    REQUIRE(d.chosen == static_cast<int>(best));
  }
}

TEST_CASE("nearest target cell by travel distance") {
  MapStack m = new_map(200, 0.05, 2);
  auto put = [&](int channel, Cell c) {
    m.mark(MapStack::kExplored, c);
    m.mark(MapStack::kObstacle, c);
    if (channel >= 0) m.mark(MapStack::kFirstSemantic + channel, c);
  };
  const Cell agent{100, 100};
  m.mark(MapStack::kExplored, agent);

  auto field = [&] {
    const Cell src[] = {agent};
    FmmOptions opt;
    opt.resolution = 0.05;
    return fmm_field(m.obstacle(), src, opt);
  };

  CHECK_FALSE(check_target_visible(m, 0, field()).has_value());

  const Cell a{100, 160};  // 3 m east, open line
  put(0, a);
  CHECK(check_target_visible(m, 0, field()) == a);

  // 2 m south in a straight line, but a long wall makes the walk about 6 m.
  const Cell b{60, 100};
  for (int c = 40; c <= 160; ++c) put(-1, {80, c});
  put(0, b);
  const auto f = field();
  MaskGrid blocked = m.obstacle();
  const auto g = oracle::graph_distance(blocked, {agent});
  REQUIRE(g[{61, 100}] * 0.05 > 5.0);
  CHECK(check_target_visible(m, 0, f) == a);
  CHECK_FALSE(check_target_visible(m, 1, f).has_value());
}

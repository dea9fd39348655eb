#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "frontnav/semantics.hpp"

using namespace frontnav;

namespace {

const std::vector<std::string>& kTargets = default_targets();

RoomSample room(std::set<std::string> objects, std::set<std::string> targets) {
  return {std::move(objects), std::move(targets)};
}

}  // namespace

TEST_CASE("entropy of reference distributions") {
  CHECK(entropy_of({1, 0, 0, 0, 0, 0}) == 0.0);
  const double u = 1.0 / 6.0;
  CHECK(std::abs(entropy_of({u, u, u, u, u, u}) - std::log(6.0)) <= 1e-12);
  CHECK(std::abs(entropy_of({0.5, 0.5, 0, 0, 0, 0}) - std::log(2.0)) <= 1e-12);
  CHECK_THROWS_AS(entropy_of({0.5, 0.4}), CoocError);
}

TEST_CASE("co-occurrence table from room records") {
  std::vector<RoomSample> rooms;
  rooms.push_back(room({"sink", "towel"}, {"toilet"}));
  rooms.push_back(room({"sink"}, {"toilet"}));
  for (const auto& t : kTargets) rooms.push_back(room({"lamp"}, {t}));
  rooms.push_back(room({"rug"}, {}));

  const CoocTable table = build_cooc(rooms, kTargets);
  const auto sink = *table.object_index("sink");
  const auto lamp = *table.object_index("lamp");
  const auto rug = *table.object_index("rug");
  const auto toilet = *table.target_index("toilet");
  CHECK(table.count(sink, toilet) == 2.0);
  CHECK(table.p(sink, toilet) == 1.0);
  CHECK(table.entropy(sink) == 0.0);
  CHECK(std::abs(table.entropy(lamp) - std::log(6.0)) <= 1e-12);
  CHECK(std::isnan(table.entropy(rug)));
  CHECK_FALSE(table.has_evidence(rug));
  CHECK_FALSE(table.whitelisted(rug));
  CHECK(table.whitelisted(sink));
  CHECK(entropy_of(table, sink) == 0.0);

  const CoocTable back = CoocTable::from_csv(table.to_csv());
  CHECK(back.objects() == table.objects());
  CHECK(back.whitelist() == table.whitelist());
  for (std::size_t o = 0; o < table.object_count(); ++o)
    for (std::size_t t = 0; t < table.target_count(); ++t) CHECK(back.count(o, t) == table.count(o, t));
}

TEST_CASE("whitelist is the 15 lowest-entropy objects") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> objects;
  std::vector<std::vector<double>> counts;
  for (int o = 0; o < 50; ++o) {
    objects.push_back("obj" + std::to_string(o));
    std::vector<double> row(6);
    // Mix sharp and flat rows so the entropies spread out.
    const double sharp = u(rng) * 8.0;
    for (auto& v : row) v = std::pow(u(rng), sharp) * 10.0;
    counts.push_back(row);
  }
  const CoocTable table(objects, kTargets, counts, 15);

  std::vector<std::pair<double, std::size_t>> h;
  for (std::size_t o = 0; o < 50; ++o) {
    double total = 0.0, e = 0.0;
    for (double v : counts[o]) total += v;
    for (double v : counts[o])
      if (v > 0) e -= v / total * std::log(v / total);
    CHECK(std::abs(table.entropy(o) - e) <= 1e-12);
    h.push_back({e, o});
  }
  std::sort(h.begin(), h.end());
  std::set<std::size_t> expect;
  for (int i = 0; i < 15; ++i) expect.insert(h[i].second);
  const std::set<std::size_t> got(table.whitelist().begin(), table.whitelist().end());
  CHECK(got == expect);
}

TEST_CASE("objects near a frontier") {
  const std::vector<std::string> names = {"sink", "door", "towel", "bathtub", "mirror"};
  std::vector<std::vector<double>> counts = {
      {0, 0, 0, 0, 9, 0}, {1, 1, 1, 1, 1, 1}, {0, 0, 0, 1, 8, 0}, {0, 0, 0, 0, 5, 1}, {0, 1, 0, 2, 3, 0}};
  MapStack m = new_map(100, 0.05, static_cast<int>(names.size()));
  Frontier f;
  f.centroid = {50, 50};

  SUBCASE("empty window") {
    const CoocTable table(names, kTargets, counts, 15);
    CHECK(objects_near(m, f, 1.0, table, names).empty());
  }
  SUBCASE("whitelist filter") {
    const CoocTable table(names, kTargets, counts, 1);
    m.mark(MapStack::kFirstSemantic + 0, {52, 52});
    m.mark(MapStack::kFirstSemantic + 1, {48, 50});
    CHECK(objects_near(m, f, 1.0, table, names) == std::vector<CategoryId>{0});
  }
  SUBCASE("ordered by cell count") {
    const CoocTable table(names, kTargets, counts, 15);
    const int want[] = {1, 3, 5, 0, 0};  // cells per category inside the window
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> off(-9, 9);
    for (int k = 0; k < 5; ++k) {
      int placed = 0;
      while (placed < want[k]) {
        const Cell c{50 + off(rng), 50 + off(rng)};
        bool taken = false;
        for (int j = 0; j < 5; ++j) taken |= m.semantic(j)[c] != 0;
        if (taken) continue;
        m.mark(MapStack::kFirstSemantic + k, c);
        ++placed;
      }
    }
    // A mirror cell outside the 1 m window does not count.
    m.mark(MapStack::kFirstSemantic + 4, {50, 75});

    // Brute force: count cells per category in the window, sort by count then id.
    std::vector<std::pair<int, int>> tally;
    for (int k = 0; k < 5; ++k) {
      int n = 0;
      for (int r = 40; r <= 60; ++r)
        for (int c = 40; c <= 60; ++c) n += m.semantic(k)(r, c);
      if (n) tally.push_back({-n, k});
    }
    std::sort(tally.begin(), tally.end());
    std::vector<CategoryId> expect;
    for (auto [n, k] : tally) expect.push_back(k);
    CHECK(expect == std::vector<CategoryId>{2, 1, 0});
    CHECK(objects_near(m, f, 1.0, table, names) == expect);
  }
}

TEST_CASE("zero-shot query strings") {
  auto q = zero_shot_queries({"sink", "bathtub"}, {"toilet"}, 3);
  REQUIRE(q.size() == 1);
  CHECK(q[0].text == "A frontier area containing sink, bathtub, toilet.");
  CHECK(q[0].frontier_id == 3);
  CHECK(q[0].target == "toilet");
  CHECK(zero_shot_queries({}, {"tv"}, 0)[0].text == "A frontier area containing tv.");

  q = zero_shot_queries({"sink"}, kTargets, 0);
  REQUIRE(q.size() == 6);
  const std::string prefix = "A frontier area containing sink, ";
  for (std::size_t i = 0; i < 6; ++i) CHECK(q[i].text == prefix + kTargets[i] + ".");
}

TEST_CASE("feed-forward query strings") {
  CHECK(feed_forward_query({"sink", "bathtub", "toilet"}, 0).text ==
        "This frontier contains sink, bathtub, and toilet.");
  CHECK(feed_forward_query({"sink", "bathtub"}, 0).text == "This frontier contains sink, and bathtub.");
  CHECK(feed_forward_query({"chair"}, 0).text == "This frontier contains chair.");
  CHECK(feed_forward_query({}, 0).text == "This frontier contains nothing.");
  CHECK(feed_forward_query({}, 0).paradigm == Paradigm::kFeedForward);
}

TEST_CASE("query templates are injective") {
  const std::vector<std::vector<std::string>> sets = {
      {}, {"sink"}, {"bathtub"}, {"sink", "bathtub"}, {"bathtub", "sink"}, {"sink", "bathtub", "towel"}};
  std::set<std::string> zs, ff;
  for (const auto& s : sets) {
    for (const auto& q : zero_shot_queries(s, kTargets, 0)) zs.insert(q.text);
    ff.insert(feed_forward_query(s, 0).text);
  }
  CHECK(zs.size() == sets.size() * kTargets.size());
  CHECK(ff.size() == sets.size());
}

TEST_CASE("room samples from scene annotations") {
  const Scene s = generate_scene(4);
  const auto rooms = room_samples(s);
  REQUIRE(rooms.size() == s.rooms().size());
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    std::set<std::string> objects, present;
    for (CategoryId c : s.rooms()[i].objects) {
      const auto& name = s.category_names()[c];
      objects.insert(name);
      if (std::find(kTargets.begin(), kTargets.end(), name) != kTargets.end()) present.insert(name);
    }
    CHECK(rooms[i].objects == objects);
    CHECK(rooms[i].targets_present == present);
  }
  const auto path = std::filesystem::temp_directory_path() / "frontnav_rooms_test.jsonl";
  save_room_samples(rooms, path);
  const auto back = load_room_samples(path);
  REQUIRE(back.size() == rooms.size());
  for (std::size_t i = 0; i < rooms.size(); ++i) {
    CHECK(back[i].objects == rooms[i].objects);
    CHECK(back[i].targets_present == rooms[i].targets_present);
  }
  std::filesystem::remove(path);
}

// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "stepgame/generator.hpp"

using namespace stepgame;

namespace {

// Recomputes the gold label from chain-provenance edges only. Independent of
// the stored SceneGraph positions: rebuilds them from the edge equations.
AnswerLabel gold_from_chain_edges(const SampleSpec& spec) {
  PositionMap positions;
  positions[spec.chain.entities[0]] = {0, 0};
  bool progress = true;
  std::vector<Edge> chain_edges;
  for (const Edge& e : spec.graph.edges) {
    if (e.prov == Provenance::Chain) chain_edges.push_back(e);
  }
  while (progress) {
    progress = false;
    for (const Edge& e : chain_edges) {
      const bool has_s = positions.contains(e.subject);
      const bool has_o = positions.contains(e.object);
      if (has_s == has_o) continue;
      if (has_o) {
        positions[e.subject] = positions[e.object] + offset_of(e.rel);
      } else {
        positions[e.object] = positions[e.subject] - offset_of(e.rel);
      }
      progress = true;
    }
  }
  return answer(positions, spec.question_first, spec.question_second);
}

}  // namespace

TEST_CASE("sample_chain structure and determinism") {
  const std::string pool = entity_pool(26);
  Pcg32 rng(42);
  const Chain chain = sample_chain(3, pool, rng);
  CHECK(chain.entities.size() == 4);
  CHECK(chain.relations.size() == 3);
  CHECK(std::set<char>(chain.entities.begin(), chain.entities.end()).size() == 4);

  Pcg32 rng_a(99), rng_b(99);
  const Chain a = sample_chain(5, pool, rng_a);
  const Chain b = sample_chain(5, pool, rng_b);
  CHECK(a.entities == b.entities);
  CHECK(a.relations == b.relations);

  Pcg32 rng_small(7);
  const Chain forced = sample_chain(1, "AB", rng_small);
  CHECK(std::set<char>(forced.entities.begin(), forced.entities.end()) ==
        std::set<char>{'A', 'B'});

  Pcg32 rng_fail(1);
  CHECK_THROWS_AS(sample_chain(3, "AB", rng_fail), ValidationError);
}

TEST_CASE("select_question draws an ordered pair of chain entities") {
  const std::string pool = entity_pool(26);
  Pcg32 rng(5);
  const Chain chain = sample_chain(1, "AB", rng);
  for (int i = 0; i < 50; ++i) {
    const auto [first, second] = select_question(chain, rng);
    CHECK(first != second);
    CHECK(chain.entities.find(first) != std::string::npos);
    CHECK(chain.entities.find(second) != std::string::npos);
  }
}

TEST_CASE("select_question is deterministic per seed") {
  const std::string pool = entity_pool(26);
  Pcg32 seed_a(123), seed_b(123);
  const Chain chain_a = sample_chain(4, pool, seed_a);
  const Chain chain_b = sample_chain(4, pool, seed_b);
  CHECK(select_question(chain_a, seed_a) == select_question(chain_b, seed_b));
}

TEST_CASE("add_irrelevant attaches fresh entities without touching the chain") {
  const std::string pool = entity_pool(26);
  Pcg32 rng(77);
  const Chain chain = sample_chain(1, pool, rng);
  SceneGraph graph;
  graph.positions = resolve_positions(chain);
  graph.edges.push_back({chain.entities[0], chain.relations[0], chain.entities[1],
                         Provenance::Chain});

  std::vector<Entity> remaining;
  for (Entity e : pool) {
    if (chain.entities.find(e) == std::string::npos) remaining.push_back(e);
  }

  SceneGraph untouched = graph;
  CHECK(add_irrelevant(untouched, remaining, 0, rng) == 0);
  CHECK(untouched.edges.size() == 1);
  CHECK(untouched.positions.size() == 2);

  CHECK(add_irrelevant(graph, remaining, 2, rng) == 2);
  CHECK(graph.positions.size() == 4);
  CHECK(graph.edges.size() == 3);
  // Chain edges untouched and gold preserved.
  CHECK(graph.edges[0].prov == Provenance::Chain);
  CHECK(answer(graph.positions, chain.entities[0], chain.entities[1]) ==
        to_label(chain.relations[0]));
}

TEST_CASE("add_disconnected builds an isolated component") {
  const std::string pool = entity_pool(26);
  Pcg32 rng(123);
  const Chain chain = sample_chain(2, pool, rng);
  SceneGraph graph;
  graph.positions = resolve_positions(chain);
  for (std::size_t i = 0; i < chain.relations.size(); ++i) {
    graph.edges.push_back({chain.entities[i], chain.relations[i], chain.entities[i + 1],
                           Provenance::Chain});
  }
  std::vector<Entity> remaining;
  for (Entity e : pool) {
    if (chain.entities.find(e) == std::string::npos) remaining.push_back(e);
  }

  const int added = add_disconnected(graph, remaining, 1, rng);
  CHECK(added == 1);
  int disconnected_edges = 0;
  for (const Edge& e : graph.edges) {
    if (e.prov != Provenance::Disconnected) continue;
    ++disconnected_edges;
    CHECK(chain.entities.find(e.subject) == std::string::npos);
    CHECK(chain.entities.find(e.object) == std::string::npos);
  }
  CHECK(disconnected_edges == 1);

  // Same seed, same noise chain.
  Pcg32 rng_a(5), rng_b(5);
  SceneGraph ga = graph, gb = graph;
  std::vector<Entity> ra = remaining, rb = remaining;
  add_disconnected(ga, ra, 3, rng_a);
  add_disconnected(gb, rb, 3, rng_b);
  REQUIRE(ga.edges.size() == gb.edges.size());
  for (std::size_t i = 0; i < ga.edges.size(); ++i) {
    CHECK(ga.edges[i].subject == gb.edges[i].subject);
    CHECK(ga.edges[i].rel == gb.edges[i].rel);
    CHECK(ga.edges[i].object == gb.edges[i].object);
  }
}

TEST_CASE("add_supporting is a no-op on two-entity chains") {
  const std::string pool = entity_pool(26);
  Pcg32 rng(9);
  const Chain chain = sample_chain(1, pool, rng);
  SceneGraph graph;
  graph.positions = resolve_positions(chain);
  graph.edges.push_back({chain.entities[0], chain.relations[0], chain.entities[1],
                         Provenance::Chain});
  std::vector<Entity> remaining{'Y', 'Z'};
  CHECK(add_supporting(graph, chain, remaining, 2, rng) == 0);
  CHECK(graph.edges.size() == 1);
}

TEST_CASE("supporting detours satisfy the exact-offset equations") {
  // A right of B with decomposition u=(1,1), v=(0,-1): the detour entity
  // sits top-right of B and the chain head sits down of it; the original
  // answer stays right.
  const GridVec u{1, 1};
  const GridVec v{0, -1};
  CHECK(u + v == offset_of(Relation::Right));
  CHECK(label_of_displacement(u) == AnswerLabel::TopRight);
  CHECK(label_of_displacement(v) == AnswerLabel::Down);

  const std::string pool = entity_pool(26);
  Pcg32 rng(2024);
  for (int iter = 0; iter < 500; ++iter) {
    const int k = 2 + static_cast<int>(rng.bounded(5));
    const Chain chain = sample_chain(k, pool, rng);
    SceneGraph graph;
    graph.positions = resolve_positions(chain);
    for (std::size_t i = 0; i < chain.relations.size(); ++i) {
      graph.edges.push_back({chain.entities[i], chain.relations[i], chain.entities[i + 1],
                             Provenance::Chain});
    }
    std::vector<Entity> remaining;
    for (Entity e : pool) {
      if (chain.entities.find(e) == std::string::npos) remaining.push_back(e);
    }
    const int added = add_supporting(graph, chain, remaining, 2, rng);
    CHECK(added == 2);
    for (const Edge& e : graph.edges) {
      if (e.prov != Provenance::Supporting) continue;
      CHECK(graph.positions.at(e.subject) - graph.positions.at(e.object) == offset_of(e.rel));
    }
  }
}

TEST_CASE("make_sample_spec: determinism, gold correctness, noise record") {
  GenConfig cfg;
  cfg.k = 4;
  cfg.master_seed = 7;
  cfg.noise.enabled = false;

  const SampleSpec a = make_sample_spec(cfg, "test", 3);
  const SampleSpec b = make_sample_spec(cfg, "test", 3);
  CHECK(a.chain.entities == b.chain.entities);
  CHECK(a.chain.relations == b.chain.relations);
  CHECK(a.question_first == b.question_first);
  CHECK(a.question_second == b.question_second);
  CHECK(a.gold == b.gold);
  CHECK(a.sample_seed == b.sample_seed);

  CHECK(a.noise.irrelevant == 0);
  CHECK(a.noise.disconnected == 0);
  CHECK(a.noise.supporting == 0);
  CHECK(a.gold == answer(resolve_positions(a.chain), a.question_first, a.question_second));

  const SampleSpec c = make_sample_spec(cfg, "test", 4);
  CHECK(c.sample_seed != a.sample_seed);
}

TEST_CASE("noise neutrality: gold recomputed from chain edges only") {
  GenConfig cfg;
  cfg.master_seed = 99;
  cfg.noise.enabled = true;
  cfg.noise.irrelevant.probability = 1.0;
  cfg.noise.disconnected.probability = 1.0;
  cfg.noise.supporting.probability = 1.0;

  int noisy = 0;
  for (int k = 1; k <= 10; ++k) {
    cfg.k = k;
    for (std::uint64_t i = 0; i < 200; ++i) {
      const SampleSpec spec = make_sample_spec(cfg, "unit", i);
      const int statements = spec.k + spec.noise.irrelevant + spec.noise.disconnected +
                             2 * spec.noise.supporting;
      CHECK(static_cast<int>(spec.graph.edges.size()) == statements);
      if (spec.noise.irrelevant + spec.noise.disconnected + spec.noise.supporting > 0) ++noisy;
      CHECK(gold_from_chain_edges(spec) == spec.gold);
      // Every edge of every provenance is truth-consistent with positions.
      for (const Edge& e : spec.graph.edges) {
        CHECK(spec.graph.positions.at(e.subject) - spec.graph.positions.at(e.object) ==
              offset_of(e.rel));
      }
      // Noise entities never collide with chain entities.
      CHECK(spec.graph.positions.size() == spec.chain.entities.size() + spec.noise.irrelevant +
                                              (spec.noise.disconnected > 0
                                                   ? spec.noise.disconnected + 1
                                                   : 0) +
                                              spec.noise.supporting);
    }
  }
  CHECK(noisy == 2000);  // probability 1 per type (supporting needs k >= 2)
}

TEST_CASE("dedup exclusion redraws colliding chains") {
  GenConfig cfg;
  cfg.k = 2;
  cfg.master_seed = 31;

  const SampleSpec base = make_sample_spec(cfg, "test", 0);
  const std::string key =
      chain_question_key(base.chain, base.question_first, base.question_second);

  std::unordered_set<std::string> excluded{key};
  const std::uint64_t seed = derive_sample_seed(cfg.master_seed, "test", 0);
  Pcg32 rng(seed);
  const SampleSpec redrawn = make_sample_spec(cfg, rng, &excluded);
  CHECK(chain_question_key(redrawn.chain, redrawn.question_first, redrawn.question_second) !=
        key);
}

TEST_CASE("noise shrinks to the available pool instead of failing") {
  const std::string pool = entity_pool(26);
  Pcg32 rng(64);
  const Chain chain = sample_chain(2, pool, rng);
  SceneGraph graph;
  graph.positions = resolve_positions(chain);
  for (std::size_t i = 0; i < chain.relations.size(); ++i) {
    graph.edges.push_back({chain.entities[i], chain.relations[i], chain.entities[i + 1],
                           Provenance::Chain});
  }

  std::vector<Entity> one_left{'Z'};
  SceneGraph g1 = graph;
  CHECK(add_irrelevant(g1, one_left, 3, rng) == 1);
  CHECK(one_left.empty());

  std::vector<Entity> two_left{'Y', 'Z'};
  SceneGraph g2 = graph;
  CHECK(add_disconnected(g2, two_left, 3, rng) == 1);  // needs length+1 entities

  std::vector<Entity> none;
  SceneGraph g3 = graph;
  CHECK(add_disconnected(g3, none, 2, rng) == 0);
  CHECK(add_supporting(g3, chain, none, 2, rng) == 0);
  CHECK(g3.edges.size() == graph.edges.size());

  GenConfig bad;
  bad.k = 26;
  CHECK_THROWS_AS(make_sample_spec(bad, "t", 0), ValidationError);
}

TEST_CASE("complexity_count matches the closed form") {
  CHECK(complexity_count(1, 26).to_string() == "10400");
  CHECK(complexity_count(2, 26).to_string() == "23961600");
  CHECK(complexity_count(1, 2).to_string() == "32");
  CHECK_THROWS_AS(complexity_count(0, 26), ValidationError);
  CHECK_THROWS_AS(complexity_count(3, 3), ValidationError);

  // Strictly increasing in k (pool fixed, k + 2 <= pool) and in pool size.
  for (int k = 1; k + 2 <= 26; ++k) {
    CHECK(complexity_count(k, 26) < complexity_count(k + 1, 26));
  }
  for (int pool = 3; pool < 26; ++pool) {
    CHECK(complexity_count(2, pool) < complexity_count(2, pool + 1));
  }
}

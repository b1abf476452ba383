// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#include "stepgame/generator.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <string>

#include "stepgame/errors.hpp"

namespace stepgame {
namespace {

// Draws one fresh entity uniformly and removes it (swap-pop keeps this O(1)
// and deterministic).
Entity take_fresh(std::vector<Entity>& pool_remaining, Pcg32& rng) {
  const auto idx = rng.bounded(static_cast<std::uint32_t>(pool_remaining.size()));
  std::swap(pool_remaining[idx], pool_remaining.back());
  const Entity e = pool_remaining.back();
  pool_remaining.pop_back();
  return e;
}

// Uniform entity among those already placed in the graph. positions is an
// ordered map, so indexing by rank is deterministic.
Entity pick_existing(const SceneGraph& graph, Pcg32& rng) {
  const auto idx = rng.bounded(static_cast<std::uint32_t>(graph.positions.size()));
  auto it = graph.positions.begin();
  std::advance(it, idx);
  return it->first;
}

// All ordered pairs (u, v) of unit relations with offset(u) + offset(v) ==
// offset(r): four per cardinal relation, two per diagonal.
std::vector<std::pair<Relation, Relation>> decompositions(Relation r) {
  std::vector<std::pair<Relation, Relation>> out;
  for (Relation u : kAllRelations) {
    for (Relation v : kAllRelations) {
      if (offset_of(u) + offset_of(v) == offset_of(r)) out.emplace_back(u, v);
    }
  }
  return out;
}

constexpr int kMaxDedupAttempts = 200;

}  // namespace

void NoiseConfig::validate() const {
  for (const auto& [name, cfg] : std::initializer_list<std::pair<const char*, NoiseTypeConfig>>{
           {"irrelevant", irrelevant}, {"disconnected", disconnected}, {"supporting", supporting}}) {
    if (cfg.probability < 0.0 || cfg.probability > 1.0) {
      throw ValidationError(std::string("noise.") + name + ": probability must be in [0,1]");
    }
    if (cfg.min_count < 0 || cfg.max_count < cfg.min_count) {
      throw ValidationError(std::string("noise.") + name + ": empty or negative count range");
    }
  }
  if (disconnected.min_count < 1 && disconnected.probability > 0.0 && enabled) {
    throw ValidationError("noise.disconnected: length must be at least 1");
  }
}

void GenConfig::validate() const {
  if (entity_pool_size < 2 || entity_pool_size > kMaxEntityPool) {
    throw ValidationError("entity_pool_size must be in [2, 26]");
  }
  if (k < 1 || k > entity_pool_size - 1) {
    throw ValidationError("k must satisfy 1 <= k <= entity_pool_size - 1");
  }
  noise.validate();
}

std::string entity_pool(int size) {
  if (size < 1 || size > kMaxEntityPool) throw ValidationError("entity pool size out of range");
  std::string pool(static_cast<std::size_t>(size), 'A');
  for (int i = 0; i < size; ++i) pool[static_cast<std::size_t>(i)] = static_cast<char>('A' + i);
  return pool;
}

Chain sample_chain(int k, std::string_view pool, Pcg32& rng) {
  if (k < 1) throw ValidationError("sample_chain: k must be >= 1");
  if (static_cast<int>(pool.size()) < k + 1) {
    throw ValidationError("sample_chain: pool smaller than k+1 entities");
  }
  // Partial Fisher-Yates: the first k+1 slots become a uniform draw of
  // distinct entities in uniform order.
  std::string scratch(pool);
  const auto n = static_cast<std::uint32_t>(scratch.size());
  for (int i = 0; i <= k; ++i) {
    const auto j = static_cast<std::uint32_t>(i) + rng.bounded(n - static_cast<std::uint32_t>(i));
    std::swap(scratch[static_cast<std::size_t>(i)], scratch[j]);
  }
  Chain chain;
  chain.entities = scratch.substr(0, static_cast<std::size_t>(k) + 1);
  chain.relations.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    chain.relations.push_back(kAllRelations[rng.bounded(8)]);
  }
  return chain;
}

std::pair<Entity, Entity> select_question(const Chain& chain, Pcg32& rng) {
  const auto n = static_cast<std::uint32_t>(chain.entities.size());
  if (n < 2) throw ValidationError("select_question: chain needs at least 2 entities");
  const std::uint32_t i = rng.bounded(n);
  std::uint32_t j = rng.bounded(n - 1);
  if (j >= i) ++j;
  return {chain.entities[i], chain.entities[j]};
}

int add_irrelevant(SceneGraph& graph, std::vector<Entity>& pool_remaining, int count, Pcg32& rng) {
  const int applied = std::min<int>(count, static_cast<int>(pool_remaining.size()));
  for (int n = 0; n < applied; ++n) {
    const Entity anchor = pick_existing(graph, rng);
    const Relation rel = kAllRelations[rng.bounded(8)];
    const Entity fresh = take_fresh(pool_remaining, rng);
    graph.positions[fresh] = graph.positions[anchor] + offset_of(rel);
    graph.edges.push_back({fresh, rel, anchor, Provenance::Irrelevant});
  }
  return applied;
}

int add_disconnected(SceneGraph& graph, std::vector<Entity>& pool_remaining, int length,
                     Pcg32& rng) {
  const int applied = std::min<int>(length, static_cast<int>(pool_remaining.size()) - 1);
  if (applied < 1) return 0;
  std::vector<Entity> members;
  members.reserve(static_cast<std::size_t>(applied) + 1);
  for (int i = 0; i <= applied; ++i) members.push_back(take_fresh(pool_remaining, rng));
  // Its own component; the anchor position is arbitrary because answers only
  // ever compare entities reachable from the question pair.
  graph.positions[members[0]] = {0, 0};
  for (int i = 0; i < applied; ++i) {
    const Relation rel = kAllRelations[rng.bounded(8)];
    graph.positions[members[static_cast<std::size_t>(i) + 1]] =
        graph.positions[members[static_cast<std::size_t>(i)]] - offset_of(rel);
    graph.edges.push_back({members[static_cast<std::size_t>(i)], rel,
                           members[static_cast<std::size_t>(i) + 1], Provenance::Disconnected});
  }
  return applied;
}

int add_supporting(SceneGraph& graph, const Chain& chain, std::vector<Entity>& pool_remaining,
                   int count, Pcg32& rng) {
  if (chain.entities.size() <= 2) return 0;
  const int applied = std::min<int>(count, static_cast<int>(pool_remaining.size()));
  for (int n = 0; n < applied; ++n) {
    const auto edge_idx = rng.bounded(static_cast<std::uint32_t>(chain.relations.size()));
    const Entity a = chain.entities[edge_idx];
    const Entity b = chain.entities[edge_idx + 1];
    const Relation r = chain.relations[edge_idx];
    const auto ways = decompositions(r);
    const auto& [u, v] = ways[rng.bounded(static_cast<std::uint32_t>(ways.size()))];
    const Entity z = take_fresh(pool_remaining, rng);
    graph.positions[z] = graph.positions[b] + offset_of(u);
    // offset(u) + offset(v) == offset(r), so both statements hold exactly.
    graph.edges.push_back({z, u, b, Provenance::Supporting});
    graph.edges.push_back({a, v, z, Provenance::Supporting});
  }
  return applied;
}

std::string chain_question_key(const Chain& chain, Entity first, Entity second) {
  std::vector<std::string> parts;
  parts.reserve(chain.relations.size());
  for (std::size_t i = 0; i < chain.relations.size(); ++i) {
    Entity s = chain.entities[i];
    Entity o = chain.entities[i + 1];
    Relation r = chain.relations[i];
    if (s > o) {
      std::swap(s, o);
      r = inverse_of(r);
    }
    std::string part;
    part.push_back(s);
    part.append(relation_name(r));
    part.push_back(o);
    parts.push_back(std::move(part));
  }
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const auto& p : parts) {
    key += p;
    key.push_back('|');
  }
  key.push_back('?');
  key.push_back(first);
  key.push_back(second);
  return key;
}

SampleSpec make_sample_spec(const GenConfig& cfg, Pcg32& rng,
                            const std::unordered_set<std::string>* excluded_keys) {
  cfg.validate();
  const std::string pool = entity_pool(cfg.entity_pool_size);

  SampleSpec spec;
  spec.k = cfg.k;
  for (int attempt = 0;; ++attempt) {
    spec.chain = sample_chain(cfg.k, pool, rng);
    std::tie(spec.question_first, spec.question_second) = select_question(spec.chain, rng);
    if (excluded_keys == nullptr || attempt >= kMaxDedupAttempts ||
        !excluded_keys->contains(
            chain_question_key(spec.chain, spec.question_first, spec.question_second))) {
      break;
    }
  }

  spec.graph.positions = resolve_positions(spec.chain);
  for (std::size_t i = 0; i < spec.chain.relations.size(); ++i) {
    spec.graph.edges.push_back({spec.chain.entities[i], spec.chain.relations[i],
                                spec.chain.entities[i + 1], Provenance::Chain});
  }
  spec.gold = answer(spec.graph.positions, spec.question_first, spec.question_second);

  if (cfg.noise.enabled) {
    // Unused pool entities, in pool order.
    std::vector<Entity> remaining;
    for (Entity e : pool) {
      if (spec.chain.entities.find(e) == std::string::npos) remaining.push_back(e);
    }
    // Fixed draw order: irrelevant, disconnected, supporting.
    const auto draw_count = [&rng](const NoiseTypeConfig& t) {
      return t.min_count +
             static_cast<int>(rng.bounded(static_cast<std::uint32_t>(t.max_count - t.min_count + 1)));
    };
    if (rng.chance(cfg.noise.irrelevant.probability)) {
      spec.noise.irrelevant =
          add_irrelevant(spec.graph, remaining, draw_count(cfg.noise.irrelevant), rng);
    }
    if (rng.chance(cfg.noise.disconnected.probability)) {
      spec.noise.disconnected =
          add_disconnected(spec.graph, remaining, draw_count(cfg.noise.disconnected), rng);
    }
    if (cfg.k >= 2 && rng.chance(cfg.noise.supporting.probability)) {
      spec.noise.supporting =
          add_supporting(spec.graph, spec.chain, remaining, draw_count(cfg.noise.supporting), rng);
    }
  }
  return spec;
}

SampleSpec make_sample_spec(const GenConfig& cfg, std::string_view stream_tag,
                            std::uint64_t index) {
  const std::uint64_t seed = derive_sample_seed(cfg.master_seed, stream_tag, index);
  Pcg32 rng(seed);
  SampleSpec spec = make_sample_spec(cfg, rng);
  spec.sample_seed = seed;
  return spec;
}

BigUint complexity_count(int k, int pool_size) {
  if (k < 1) throw ValidationError("complexity_count: k must be >= 1");
  if (pool_size < k + 1) throw ValidationError("complexity_count: pool_size must be >= k+1");

  const auto ku = static_cast<std::uint32_t>(k);
  BigUint total(1);
  // Ordered entity sequences: (k+1)! * C(pool, k+1), with the binomial
  // expanded stepwise so every intermediate division is exact.
  for (std::uint32_t i = 2; i <= ku + 1; ++i) total.mul(i);
  for (std::uint32_t i = 0; i <= ku; ++i) {
    total.mul(static_cast<std::uint32_t>(pool_size) - i);
    total.divmod(i + 1);
  }
  // Each of the k relations: 8 values times 2 surface directions.
  for (std::uint32_t i = 0; i < ku; ++i) total.mul(16);
  // Sentence orders contribute k!/2 and the ordered question pair
  // 2*C(k+1,2); the halving and doubling cancel.
  for (std::uint32_t i = 2; i <= ku; ++i) total.mul(i);
  total.mul(ku + 1);
  total.mul(ku);
  total.divmod(2);
  return total;
}

}  // namespace stepgame

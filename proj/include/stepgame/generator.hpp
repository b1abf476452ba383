// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "stepgame/bigint.hpp"
#include "stepgame/relations.hpp"
#include "stepgame/rng.hpp"

namespace stepgame {

// One distracting-noise type: inclusion probability plus an inclusive count
// range. For irrelevant noise the count is the number of branch entities,
// for disconnected noise it is the chain length in edges, for supporting
// noise it is the number of two-edge detours.
struct NoiseTypeConfig {
  double probability = 1.0 / 3.0;
  int min_count = 1;
  int max_count = 3;
};

struct NoiseConfig {
  bool enabled = false;
  NoiseTypeConfig irrelevant{1.0 / 3.0, 1, 3};
  NoiseTypeConfig disconnected{1.0 / 3.0, 1, 3};
  NoiseTypeConfig supporting{1.0 / 3.0, 1, 2};

  void validate() const;  // throws ValidationError
};

struct GenConfig {
  int k = 1;
  int entity_pool_size = kMaxEntityPool;
  std::uint64_t master_seed = 0;
  NoiseConfig noise;

  void validate() const;  // throws ValidationError
};

// Sentence-level noise bookkeeping: irrelevant and disconnected store
// edge counts, supporting stores the number of insertions (two edges each),
// so a spec yields exactly k + irrelevant + disconnected + 2*supporting
// statements.
struct NoiseRecord {
  int irrelevant = 0;
  int disconnected = 0;
  int supporting = 0;
};

// Structural (pre-rendering) sample: the chain, the full noisy scene graph,
// the question pair and the gold label computed from the chain alone.
struct SampleSpec {
  Chain chain;
  SceneGraph graph;
  Entity question_first = 'A';
  Entity question_second = 'B';
  AnswerLabel gold = AnswerLabel::Overlap;
  int k = 0;
  NoiseRecord noise;
  std::uint64_t sample_seed = 0;
};

// First `size` letters of the entity alphabet.
std::string entity_pool(int size);

// k+1 distinct entities in uniformly random order plus k relations drawn
// uniformly and independently. Throws ValidationError if the pool is too
// small.
Chain sample_chain(int k, std::string_view pool, Pcg32& rng);

// Two distinct chain entities, uniformly over ordered pairs. The order is
// the question direction.
std::pair<Entity, Entity> select_question(const Chain& chain, Pcg32& rng);

// Attaches `count` fresh entities, each by one uniformly random relation
// edge to a uniformly chosen entity already in the graph (so branches can
// extend earlier branches). Returns the number of entities actually added;
// the count shrinks when the pool runs out.
int add_irrelevant(SceneGraph& graph, std::vector<Entity>& pool_remaining, int count, Pcg32& rng);

// Adds an independent chain of `length` edges over fresh entities, anchored
// at the origin of its own component. No edge touches existing entities.
// Returns the number of edges actually added.
int add_disconnected(SceneGraph& graph, std::vector<Entity>& pool_remaining, int length,
                     Pcg32& rng);

// For each insertion picks a chain edge (a, r, b) and a uniform decomposition
// offset(r) = u + v into two unit steps, then adds a fresh entity z at
// positions[b] + u with edges (z, u, b) and (a, v, z). Both edges satisfy the
// exact-offset equation, so every added statement is true. No-op on chains
// with fewer than 3 entities. Returns insertions actually added.
int add_supporting(SceneGraph& graph, const Chain& chain, std::vector<Entity>& pool_remaining,
                   int count, Pcg32& rng);

// Canonical structural key of a chain + question pair: canonicalized sorted
// edge triples plus the ordered question entities. Used for leakage analysis
// and cross-split deduplication.
std::string chain_question_key(const Chain& chain, Entity first, Entity second);

// Builds the structural sample by consuming `rng`: chain, question, gold,
// then noise in the fixed order irrelevant / disconnected / supporting.
// When `excluded_keys` is given, chain+question draws whose key is in the
// set are rejected and redrawn from the same stream (bounded attempts).
SampleSpec make_sample_spec(const GenConfig& cfg, Pcg32& rng,
                            const std::unordered_set<std::string>* excluded_keys = nullptr);

// Convenience wrapper: seeds a fresh pcg32 stream from
// derive_sample_seed(cfg.master_seed, stream_tag, index).
SampleSpec make_sample_spec(const GenConfig& cfg, std::string_view stream_tag,
                            std::uint64_t index);

// Exact number of distinct samples for a given hop count and entity pool.
// Throws ValidationError unless k >= 1 and pool_size >= k+1.
BigUint complexity_count(int k, int pool_size);

}  // namespace stepgame

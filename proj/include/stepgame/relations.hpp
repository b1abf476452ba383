// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stepgame/errors.hpp"

namespace stepgame {

// The eight story relations. The order here is the canonical order used
// for tie-breaking, histograms and serialization tables.
enum class Relation : std::uint8_t {
  Top,
  Down,
  Left,
  Right,
  TopLeft,
  TopRight,
  DownLeft,
  DownRight,
};

inline constexpr std::array<Relation, 8> kAllRelations = {
    Relation::Top,      Relation::Down,     Relation::Left,     Relation::Right,
    Relation::TopLeft,  Relation::TopRight, Relation::DownLeft, Relation::DownRight,
};

// The nine answer values: the eight relations plus overlap, which arises
// exactly when the queried displacement is the zero vector.
enum class AnswerLabel : std::uint8_t {
  Top,
  Down,
  Left,
  Right,
  TopLeft,
  TopRight,
  DownLeft,
  DownRight,
  Overlap,
};

inline constexpr std::array<AnswerLabel, 9> kAllLabels = {
    AnswerLabel::Top,      AnswerLabel::Down,      AnswerLabel::Left,
    AnswerLabel::Right,    AnswerLabel::TopLeft,   AnswerLabel::TopRight,
    AnswerLabel::DownLeft, AnswerLabel::DownRight, AnswerLabel::Overlap,
};

// Integer grid vector. x grows rightward, y grows upward.
struct GridVec {
  int x = 0;
  int y = 0;

  friend constexpr GridVec operator+(GridVec a, GridVec b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr GridVec operator-(GridVec a, GridVec b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr GridVec operator-(GridVec a) { return {-a.x, -a.y}; }
  friend constexpr bool operator==(GridVec a, GridVec b) { return a.x == b.x && a.y == b.y; }
  friend constexpr bool operator!=(GridVec a, GridVec b) { return !(a == b); }
};

// Unit offset of a relation: right = (+1, 0), top = (0, +1), diagonals are
// the component-wise combinations.
constexpr GridVec offset_of(Relation r) {
  switch (r) {
    case Relation::Top:       return {0, 1};
    case Relation::Down:      return {0, -1};
    case Relation::Left:      return {-1, 0};
    case Relation::Right:     return {1, 0};
    case Relation::TopLeft:   return {-1, 1};
    case Relation::TopRight:  return {1, 1};
    case Relation::DownLeft:  return {-1, -1};
    case Relation::DownRight: return {1, -1};
  }
  return {0, 0};  // unreachable
}

// 180-degree rotation. An involution with no fixed point:
// offset_of(inverse_of(r)) == -offset_of(r).
constexpr Relation inverse_of(Relation r) {
  switch (r) {
    case Relation::Top:       return Relation::Down;
    case Relation::Down:      return Relation::Top;
    case Relation::Left:      return Relation::Right;
    case Relation::Right:     return Relation::Left;
    case Relation::TopLeft:   return Relation::DownRight;
    case Relation::TopRight:  return Relation::DownLeft;
    case Relation::DownLeft:  return Relation::TopRight;
    case Relation::DownRight: return Relation::TopLeft;
  }
  return r;  // unreachable
}

// Maps a displacement to its answer label via the sign of each component;
// (0,0) maps to overlap. Non-adjacent pairs at displacement (3,0) therefore
// still answer "right": the nine-label space carries no magnitude.
constexpr AnswerLabel label_of_displacement(long long dx, long long dy) {
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  if (sx == 0 && sy == 0) return AnswerLabel::Overlap;
  if (sx == 0) return sy > 0 ? AnswerLabel::Top : AnswerLabel::Down;
  if (sy == 0) return sx > 0 ? AnswerLabel::Right : AnswerLabel::Left;
  if (sx > 0) return sy > 0 ? AnswerLabel::TopRight : AnswerLabel::DownRight;
  return sy > 0 ? AnswerLabel::TopLeft : AnswerLabel::DownLeft;
}

constexpr AnswerLabel label_of_displacement(GridVec d) {
  return label_of_displacement(d.x, d.y);
}

constexpr AnswerLabel to_label(Relation r) {
  return static_cast<AnswerLabel>(static_cast<std::uint8_t>(r));
}

// Overlap inverts to overlap; every other label inverts like its relation.
constexpr AnswerLabel inverse_label(AnswerLabel l) {
  if (l == AnswerLabel::Overlap) return AnswerLabel::Overlap;
  return to_label(inverse_of(static_cast<Relation>(static_cast<std::uint8_t>(l))));
}

constexpr std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::Top:       return "top";
    case Relation::Down:      return "down";
    case Relation::Left:      return "left";
    case Relation::Right:     return "right";
    case Relation::TopLeft:   return "top-left";
    case Relation::TopRight:  return "top-right";
    case Relation::DownLeft:  return "down-left";
    case Relation::DownRight: return "down-right";
  }
  return "";  // unreachable
}

constexpr std::string_view label_name(AnswerLabel l) {
  return l == AnswerLabel::Overlap
             ? std::string_view("overlap")
             : relation_name(static_cast<Relation>(static_cast<std::uint8_t>(l)));
}

inline std::optional<Relation> relation_from_name(std::string_view name) {
  for (Relation r : kAllRelations) {
    if (relation_name(r) == name) return r;
  }
  return std::nullopt;
}

inline std::optional<AnswerLabel> label_from_name(std::string_view name) {
  for (AnswerLabel l : kAllLabels) {
    if (label_name(l) == name) return l;
  }
  return std::nullopt;
}

// Entities are single uppercase letters drawn from a 26-symbol pool.
using Entity = char;

inline constexpr int kMaxEntityPool = 26;

constexpr bool is_entity_name(char c) { return c >= 'A' && c <= 'Z'; }

// Ordered sequence of k+1 distinct entities joined by k relations;
// relations[i] is the relation of entities[i] with respect to entities[i+1].
struct Chain {
  std::string entities;             // k+1 distinct letters, in chain order
  std::vector<Relation> relations;  // k relations

  int hops() const { return static_cast<int>(relations.size()); }
};

enum class Provenance : std::uint8_t { Chain, Irrelevant, Disconnected, Supporting };

// A directed labeled edge: subject is `rel` of object.
struct Edge {
  Entity subject;
  Relation rel;
  Entity object;
  Provenance prov;
};

// Entities with resolved integer grid positions plus labeled edges.
// Positions are consistent per connected component; distinct entities may
// share a position.
struct SceneGraph {
  std::map<Entity, GridVec> positions;
  std::vector<Edge> edges;
};

using PositionMap = std::map<Entity, GridVec>;

// Anchors entities[0] at (0,0) and walks the chain:
// positions[entities[i]] = positions[entities[i+1]] + offset_of(relations[i]).
PositionMap resolve_positions(const Chain& chain);

// Relation of `a` with respect to `b`: label_of_displacement(pos[a] - pos[b]).
// Throws ValidationError if either entity is unknown.
AnswerLabel answer(const PositionMap& positions, Entity a, Entity b);

}  // namespace stepgame

// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#include "stepgame/relations.hpp"

namespace stepgame {

PositionMap resolve_positions(const Chain& chain) {
  PositionMap positions;
  if (chain.entities.empty()) return positions;
  positions[chain.entities[0]] = {0, 0};
  for (std::size_t i = 0; i < chain.relations.size(); ++i) {
    // entities[i] = entities[i+1] + offset  =>  entities[i+1] = entities[i] - offset
    positions[chain.entities[i + 1]] =
        positions[chain.entities[i]] - offset_of(chain.relations[i]);
  }
  return positions;
}

AnswerLabel answer(const PositionMap& positions, Entity a, Entity b) {
  const auto ia = positions.find(a);
  const auto ib = positions.find(b);
  if (ia == positions.end() || ib == positions.end()) {
    throw ValidationError(std::string("answer: unknown entity '") +
                          (ia == positions.end() ? a : b) + "'");
  }
  return label_of_displacement(ia->second - ib->second);
}

}  // namespace stepgame

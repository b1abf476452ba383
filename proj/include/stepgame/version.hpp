// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace stepgame {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stepgame

// Copyright (c) 2026 The stepgame authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace stepgame {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, bad configuration, malformed records.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem and stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// A sentence, story or data line that does not match the expected form.
class ParseFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace stepgame

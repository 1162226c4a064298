// Copyright (c) 2026 the schedlab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace schedlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejected input: argument outside its documented domain.
struct DomainError : Error {
  using Error::Error;
};

// Malformed file contents (bad length, non-finite entries, ...).
struct DataError : Error {
  using Error::Error;
};

// Unreadable / unwritable path.
struct IoError : Error {
  using Error::Error;
};

// b(t) = 0: the conditional density degenerates to a sum of deltas.
struct DegenerateNoiseError : Error {
  using Error::Error;
};

// Every grid point has zero posterior mass for the given point.
struct NoSupportError : Error {
  using Error::Error;
};

}  // namespace schedlab

// Copyright (c) TreeCert contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace treecert {

/// Malformed or inconsistent user input: schema violations, bad numbers,
/// dimension mismatches. The CLI maps this to exit status 2.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An internal check that guards the soundness of a result failed (a loop
/// invariant that is not inductive, an instance with no reachable leaf).
/// Never caught inside the library. The CLI maps this to exit status 3.
class SoundnessError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

} // namespace treecert

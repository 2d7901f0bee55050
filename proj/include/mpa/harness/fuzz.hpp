//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mpa {

/// cap-idempotence, run-set-equality, negate-involution, gmsc-agreement,
/// embedding.
const std::vector<std::string> &fuzz_properties();

struct FuzzOptions {
  std::uint64_t seed = 1;
  std::size_t cases = 1000;
  std::size_t max_nodes = 6;
  /// Empty: cycle through every property.
  std::string property;
  std::filesystem::path corpus;
  bool parallel = true;
};

struct FuzzCase {
  std::size_t index = 0;
  std::string property;
  std::string tree;
  bool ok = true;
  std::string detail;
};

struct FuzzReport {
  std::vector<FuzzCase> cases;
  std::size_t failures = 0;

  void write(std::ostream &out) const;
};

/// Case i draws from its own generator seeded by (seed, i), so reports do not
/// depend on scheduling.
FuzzReport fuzz(const FuzzOptions &opts);

}  // namespace mpa

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "hextm/tsetlin.hpp"

namespace hextm {

inline constexpr const char* kModelHeader = "hextm-model v1";

// Text container: header line, `key value` config lines, the weight row,
// then one hex-encoded state row per clause. Output is byte-stable for a
// given bank.
void write_model(const ClauseBank& bank, std::ostream& out);
void save_model(const ClauseBank& bank, const std::filesystem::path& path);

struct ModelExpectations {
  std::optional<int> num_features;
  std::optional<int> n_clauses;
};

// Throws ParseError on malformed input or when the stored o / n differ
// from `expect`.
ClauseBank read_model(std::istream& in, const ModelExpectations& expect = {});
ClauseBank load_model(const std::filesystem::path& path, const ModelExpectations& expect = {});

}  // namespace hextm

#pragma once

#include "safeindex/forest.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace safeindex {

inline constexpr int kModelVersion = 1;

/// Versioned JSON document with a stable key order:
/// {"version", "vote_threshold", ["min_adult_votes",] "trees"}; internal nodes
/// are {"attr", "thr", "left", "right"}, leaves {"label", "weights"}.
std::string serialize_forest(const Forest& forest);

/// Throws DataError on malformed or unsupported documents.
Forest deserialize_forest(std::string_view json);

void save_forest(const Forest& forest, const std::filesystem::path& path);
Forest load_forest(const std::filesystem::path& path);

/// Indented text rendering, one test per line:
///
///     ratio_en-words <= 0.05:
///     |   prop_french-words <= 0.012: safe [a=0.2 s=40.1]
///     |   prop_french-words > 0.012: adult [a=3.5 s=0]
///     ratio_en-words > 0.05: adult [a=12 s=0]
///
/// Bracketed numbers are the training weights that reached the leaf.
std::string render_tree(const Tree& tree);

} // namespace safeindex

#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace gesq::cli {

/// Bundled reference CSV for a table id, if there is one.
std::optional<std::string_view> reference_table(std::string_view id);
std::vector<std::string_view> reference_table_ids();

}  // namespace gesq::cli

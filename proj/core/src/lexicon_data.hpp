#pragma once

#include <string_view>

namespace reqdsl::detail {

/// Contents of a bundled lexicon file, or an empty view for unknown names.
std::string_view builtin_lexicon_file(std::string_view name);

}  // namespace reqdsl::detail

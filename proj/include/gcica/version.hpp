#pragma once

#include <string_view>

namespace gcica {

/// Build version, `git describe` style.
std::string_view version();

}  // namespace gcica

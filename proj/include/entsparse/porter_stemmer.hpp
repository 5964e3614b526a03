#pragma once

#include <string>
#include <string_view>

namespace entsparse {

// Porter (1980) suffix stripping. Input is expected lowercase ASCII; any
// other word is returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace entsparse

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace coinami::crypto {

std::string hex_encode(std::string_view bytes);
std::optional<std::string> hex_decode(std::string_view hex);

/// Standard base64 with '=' padding.
std::string base64_encode(std::string_view bytes);
std::optional<std::string> base64_decode(std::string_view text);

bool is_hex(std::string_view s);

}  // namespace coinami::crypto

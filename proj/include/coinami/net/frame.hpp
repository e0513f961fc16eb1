#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace coinami::net {

/// One frame = decimal byte count, '\n', then exactly that many bytes.
constexpr size_t kMaxFrameBytes = 256u << 20;

std::string encode_frame(std::string_view payload);

/// Incremental frame reassembly for a byte stream.
class FrameParser {
  public:
    void feed(std::string_view data);
    /// Next complete frame payload, if one is buffered.
    /// Throws std::runtime_error on a malformed or oversized header.
    std::optional<std::string> next();

  private:
    std::string buf_;
};

}  // namespace coinami::net

#include "coinami/net/frame.hpp"

#include <charconv>
#include <stdexcept>

namespace coinami::net {

std::string encode_frame(std::string_view payload) {
    std::string out = std::to_string(payload.size());
    out += '\n';
    out += payload;
    return out;
}

void FrameParser::feed(std::string_view data) {
    buf_.append(data);
}

std::optional<std::string> FrameParser::next() {
    size_t nl = buf_.find('\n');
    if (nl == std::string::npos) {
        if (buf_.size() > 32) throw std::runtime_error("frame header too long");
        return std::nullopt;
    }
    size_t len{};
    auto [ptr, ec] = std::from_chars(buf_.data(), buf_.data() + nl, len);
    if (ec != std::errc{} || ptr != buf_.data() + nl || nl == 0)
        throw std::runtime_error("malformed frame header");
    if (len > kMaxFrameBytes) throw std::runtime_error("frame too large");
    if (buf_.size() < nl + 1 + len) return std::nullopt;
    std::string payload = buf_.substr(nl + 1, len);
    buf_.erase(0, nl + 1 + len);
    return payload;
}

}  // namespace coinami::net

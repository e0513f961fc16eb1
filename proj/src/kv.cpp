#include "coinami/kv.hpp"

#include <charconv>

namespace coinami::kv {

bool valid_key(std::string_view key) {
    if (key.empty()) return false;
    for (char c : key) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
        if (!ok) return false;
    }
    return true;
}

bool valid_value(std::string_view value) {
    for (char c : value) {
        if (c == '\n' || c == '\0') return false;
    }
    return true;
}

void Doc::add(std::string_view key, std::string_view value) {
    if (!valid_key(key)) throw DocError("invalid key: " + std::string(key));
    if (!valid_value(value)) throw DocError("invalid value for key: " + std::string(key));
    entries_.emplace_back(std::string(key), std::string(value));
}

void Doc::add_int(std::string_view key, int64_t value) {
    add(key, std::to_string(value));
}

void Doc::add_uint(std::string_view key, uint64_t value) {
    add(key, std::to_string(value));
}

const std::string* Doc::find(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return &v;
    }
    return nullptr;
}

const std::string& Doc::get(std::string_view key) const {
    const std::string* v = find(key);
    if (!v) throw DocError("missing field: " + std::string(key));
    return *v;
}

int64_t Doc::get_int(std::string_view key) const {
    const std::string& s = get(key);
    int64_t out{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DocError("non-integer field: " + std::string(key));
    return out;
}

uint64_t Doc::get_uint(std::string_view key) const {
    const std::string& s = get(key);
    uint64_t out{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DocError("non-integer field: " + std::string(key));
    return out;
}

std::string Doc::render() const {
    std::string out;
    size_t total = 0;
    for (const auto& [k, v] : entries_) total += k.size() + v.size() + 2;
    out.reserve(total);
    for (const auto& [k, v] : entries_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

Doc Doc::parse(std::string_view text) {
    Doc doc;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) throw DocError("unterminated line");
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw DocError("line without '='");
        std::string_view key = line.substr(0, eq);
        std::string_view value = line.substr(eq + 1);
        if (!valid_key(key)) throw DocError("invalid key in document");
        doc.entries_.emplace_back(std::string(key), std::string(value));
    }
    return doc;
}

}  // namespace coinami::kv

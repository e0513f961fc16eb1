#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coinami::kv {

struct DocError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Canonical key/value document: ordered "key=value" lines, one per
/// field, '\n' terminated. Key order is fixed by the writer, so the
/// rendering is byte-stable and can serve as a hashing or signing
/// preimage. Values must not contain newlines; binary payloads go
/// through base64 first.
class Doc {
  public:
    Doc() = default;

    void add(std::string_view key, std::string_view value);
    void add_int(std::string_view key, int64_t value);
    void add_uint(std::string_view key, uint64_t value);

    /// First value for key, or nullptr.
    const std::string* find(std::string_view key) const;
    bool has(std::string_view key) const { return find(key) != nullptr; }

    /// Value for key; throws DocError when absent.
    const std::string& get(std::string_view key) const;
    int64_t get_int(std::string_view key) const;
    uint64_t get_uint(std::string_view key) const;

    std::string render() const;
    static Doc parse(std::string_view text);

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

bool valid_key(std::string_view key);
bool valid_value(std::string_view value);

}  // namespace coinami::kv

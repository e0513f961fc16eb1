#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace coinami::crypto {

using Digest256 = std::array<uint8_t, 32>;

class Sha256 {
  public:
    Sha256();
    void update(std::string_view data);
    void update(const uint8_t* data, size_t len);
    Digest256 finish();

  private:
    void process_block(const uint8_t* block);

    uint32_t state_[8];
    uint64_t total_len_ = 0;
    uint8_t buf_[64];
    size_t buf_len_ = 0;
};

Digest256 sha256(std::string_view data);
std::string sha256_hex(std::string_view data);

Digest256 hmac_sha256(std::string_view key, std::string_view data);

/// PBKDF2-HMAC-SHA256, single 32-byte output block.
Digest256 pbkdf2_sha256(std::string_view password, std::string_view salt, uint32_t iterations);

/// Constant-time equality over equal-length byte strings.
bool same_bytes(std::string_view a, std::string_view b);

std::string digest_to_string(const Digest256& d);

}  // namespace coinami::crypto

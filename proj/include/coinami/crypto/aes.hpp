#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace coinami::crypto {

/// AES-128, forward direction only (CTR mode never decrypts blocks).
class Aes128 {
  public:
    explicit Aes128(const std::array<uint8_t, 16>& key);

    void encrypt_block(const uint8_t in[16], uint8_t out[16]) const;

    /// CTR keystream xor; same call encrypts and decrypts.
    std::string ctr_xor(const std::array<uint8_t, 16>& iv, std::string_view data) const;

  private:
    uint8_t round_keys_[176];
};

}  // namespace coinami::crypto

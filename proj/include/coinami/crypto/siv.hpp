#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace coinami::crypto {

/// Deterministic authenticated encryption in the SIV style:
/// iv = HMAC-SHA256(mac_key, plaintext) truncated to 16 bytes, then
/// AES-128-CTR under enc_key with that iv. The same plaintext always
/// produces the same ciphertext, and the iv doubles as the
/// authentication tag (recomputed and compared on open).
struct SivKey {
    std::array<uint8_t, 32> mac_key;
    std::array<uint8_t, 16> enc_key;

    /// Derives independent mac/enc subkeys from arbitrary key material.
    static SivKey derive(std::string_view master);

    /// Short stable identifier, safe to reveal.
    std::string key_id() const;
};

/// Returns iv(16) || ciphertext.
std::string siv_seal(const SivKey& key, std::string_view plaintext);

/// Returns the plaintext, or nullopt when the tag check fails.
std::optional<std::string> siv_open(const SivKey& key, std::string_view sealed);

}  // namespace coinami::crypto

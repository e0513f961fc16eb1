#include "coinami/crypto/siv.hpp"

#include <cstring>

#include "coinami/crypto/aes.hpp"
#include "coinami/crypto/encoding.hpp"
#include "coinami/crypto/sha256.hpp"

namespace coinami::crypto {

SivKey SivKey::derive(std::string_view master) {
    SivKey k;
    Digest256 mac = hmac_sha256(master, "coinami.siv.mac");
    Digest256 enc = hmac_sha256(master, "coinami.siv.enc");
    k.mac_key = mac;
    std::memcpy(k.enc_key.data(), enc.data(), 16);
    return k;
}

std::string SivKey::key_id() const {
    std::string mac_bytes(reinterpret_cast<const char*>(mac_key.data()), mac_key.size());
    return sha256_hex(mac_bytes).substr(0, 16);
}

namespace {
std::array<uint8_t, 16> compute_iv(const SivKey& key, std::string_view plaintext) {
    std::string mac_bytes(reinterpret_cast<const char*>(key.mac_key.data()), key.mac_key.size());
    Digest256 tag = hmac_sha256(mac_bytes, plaintext);
    std::array<uint8_t, 16> iv;
    std::memcpy(iv.data(), tag.data(), 16);
    return iv;
}
}  // namespace

std::string siv_seal(const SivKey& key, std::string_view plaintext) {
    std::array<uint8_t, 16> iv = compute_iv(key, plaintext);
    Aes128 aes(key.enc_key);
    std::string out(reinterpret_cast<const char*>(iv.data()), 16);
    out += aes.ctr_xor(iv, plaintext);
    return out;
}

std::optional<std::string> siv_open(const SivKey& key, std::string_view sealed) {
    if (sealed.size() < 16) return std::nullopt;
    std::array<uint8_t, 16> iv;
    std::memcpy(iv.data(), sealed.data(), 16);
    Aes128 aes(key.enc_key);
    std::string plain = aes.ctr_xor(iv, sealed.substr(16));
    std::array<uint8_t, 16> expect = compute_iv(key, plain);
    if (!same_bytes(std::string_view(reinterpret_cast<const char*>(iv.data()), 16),
                    std::string_view(reinterpret_cast<const char*>(expect.data()), 16)))
        return std::nullopt;
    return plain;
}

}  // namespace coinami::crypto

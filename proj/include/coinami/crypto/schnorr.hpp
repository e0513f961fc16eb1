#pragma once

#include <string>
#include <string_view>

#include "coinami/crypto/bigint.hpp"

namespace coinami::crypto {

/// Schnorr signatures over the 1024-bit MODP group with 160-bit prime
/// order subgroup from RFC 5114 section 2.1. Nonces are derived
/// deterministically from the private key and message, so signing the
/// same message twice yields identical signatures.
namespace schnorr {

constexpr size_t kPubBytes = 128;   // group element, big-endian
constexpr size_t kScalarBytes = 20; // subgroup order is 160 bits

const BigUint& group_p();
const BigUint& group_q();
const BigUint& group_g();

struct KeyPair {
    BigUint priv;  // x in [1, q)
    BigUint pub;   // g^x mod p

    std::string pub_hex() const { return pub.to_hex(kPubBytes); }
    std::string priv_hex() const { return priv.to_hex(kScalarBytes); }
};

/// Fresh keypair from OS entropy.
KeyPair keygen();
/// Reproducible keypair for tests and fixtures.
KeyPair keygen_seeded(uint64_t seed);
KeyPair keypair_from_priv_hex(std::string_view priv_hex);

/// Signature is hex(e || s), two 20-byte scalars, 80 hex chars.
std::string sign(const KeyPair& key, std::string_view message);
bool verify(std::string_view pub_hex, std::string_view message, std::string_view signature_hex);

bool is_valid_pub_hex(std::string_view pub_hex);

}  // namespace schnorr
}  // namespace coinami::crypto

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coinami/crypto/schnorr.hpp"

namespace coinami::verifier {

/// Root-signed authority credential. The rendering below the
/// signature line is the signing preimage; the fingerprint of the full
/// rendering identifies the certificate in tokens.
struct Certificate {
    std::string subject_pubkey;  // hex
    std::string subject_name;
    int64_t valid_from = 0;   // unix seconds, inclusive
    int64_t valid_until = 0;  // unix seconds, exclusive
    std::string signature;    // hex, by the root key

    std::string preimage() const;
    std::string render() const;
    static Certificate parse(std::string_view text);

    /// SHA-256 of the full rendering, lowercase hex.
    std::string fingerprint() const;

    bool operator==(const Certificate&) const = default;
};

Certificate issue_certificate(const crypto::schnorr::KeyPair& root_key,
                              std::string_view subject_pubkey, std::string_view subject_name,
                              int64_t valid_from, int64_t valid_until);

bool verify_certificate(const Certificate& cert, std::string_view root_pubkey,
                        int64_t at_time);

class CertificateStore {
  public:
    /// Returns the fingerprint.
    std::string add(Certificate cert);
    const Certificate* find(std::string_view fingerprint) const;
    std::vector<const Certificate*> all() const;
    size_t size() const { return by_fingerprint_.size(); }

  private:
    std::map<std::string, Certificate, std::less<>> by_fingerprint_;
};

}  // namespace coinami::verifier

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "coinami/verifier/certificate.hpp"

namespace coinami::verifier {

/// The block-validity proof: an authority's signature over a completed
/// job, with a counter so one block can require several completed
/// assignments. Final (mintable) iff counter == required.
struct SignedToken {
    std::string job_id;
    std::string miner_pubkey;    // hex
    std::string result_digest;   // hex sha256 of the accepted result bytes
    int64_t counter = 0;
    int64_t required = 0;        // difficulty D
    std::string authority_cert;  // certificate fingerprint, hex
    std::string signature;       // hex, by the authority key

    bool is_final() const { return counter == required; }

    std::string preimage() const;
    std::string render() const;
    static SignedToken parse(std::string_view text);

    bool operator==(const SignedToken&) const = default;
};

struct InvalidPriorToken : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Throws InvalidPriorToken unless `prior` can seed the next counter
/// step for this miner under this authority.
void validate_prior_token(const SignedToken& prior, std::string_view authority_pubkey,
                          std::string_view authority_cert_fingerprint,
                          std::string_view miner_pubkey, int64_t difficulty_d);

/// Signs the next counter step for a miner. A prior token must belong
/// to the same miner and this authority, verify, and not be final; its
/// absence starts a fresh chain at counter 1.
SignedToken issue_token(const crypto::schnorr::KeyPair& authority_key,
                        const std::string& authority_cert_fingerprint, std::string_view job_id,
                        std::string_view miner_pubkey, std::string_view result_digest,
                        const std::optional<SignedToken>& prior, int64_t difficulty_d);

/// Signature check only, against a known authority key.
bool token_signature_valid(const SignedToken& token, std::string_view authority_pubkey);

/// Full chain check: certificate known and root-signed, authority
/// signature valid, and the counter complete.
bool verify_token(const SignedToken& token, std::string_view root_pubkey,
                  const CertificateStore& certs, int64_t at_time);

}  // namespace coinami::verifier

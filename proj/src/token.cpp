#include "coinami/verifier/token.hpp"

#include "coinami/kv.hpp"

namespace coinami::verifier {

std::string SignedToken::preimage() const {
    kv::Doc doc;
    doc.add("format", "coinami.token.v1");
    doc.add("job_id", job_id);
    doc.add("miner_pubkey", miner_pubkey);
    doc.add("result_digest", result_digest);
    doc.add_int("counter", counter);
    doc.add_int("required", required);
    doc.add("authority_cert", authority_cert);
    return doc.render();
}

std::string SignedToken::render() const {
    std::string out = preimage();
    out += "signature=";
    out += signature;
    out += '\n';
    return out;
}

SignedToken SignedToken::parse(std::string_view text) {
    kv::Doc doc = kv::Doc::parse(text);
    if (doc.get("format") != "coinami.token.v1") throw kv::DocError("unknown token format");
    SignedToken t;
    t.job_id = doc.get("job_id");
    t.miner_pubkey = doc.get("miner_pubkey");
    t.result_digest = doc.get("result_digest");
    t.counter = doc.get_int("counter");
    t.required = doc.get_int("required");
    t.authority_cert = doc.get("authority_cert");
    t.signature = doc.get("signature");
    return t;
}

void validate_prior_token(const SignedToken& prior, std::string_view authority_pubkey,
                          std::string_view authority_cert_fingerprint,
                          std::string_view miner_pubkey, int64_t difficulty_d) {
    if (prior.miner_pubkey != miner_pubkey)
        throw InvalidPriorToken("prior token belongs to a different miner");
    if (prior.authority_cert != authority_cert_fingerprint)
        throw InvalidPriorToken("prior token belongs to a different authority");
    if (prior.required != difficulty_d)
        throw InvalidPriorToken("prior token carries a different difficulty");
    if (prior.is_final()) throw InvalidPriorToken("prior token is already final");
    if (prior.counter < 1 || prior.counter > prior.required)
        throw InvalidPriorToken("prior token counter out of range");
    if (!token_signature_valid(prior, authority_pubkey))
        throw InvalidPriorToken("prior token signature invalid");
}

SignedToken issue_token(const crypto::schnorr::KeyPair& authority_key,
                        const std::string& authority_cert_fingerprint, std::string_view job_id,
                        std::string_view miner_pubkey, std::string_view result_digest,
                        const std::optional<SignedToken>& prior, int64_t difficulty_d) {
    if (difficulty_d < 1) throw std::invalid_argument("difficulty must be >= 1");
    int64_t counter = 1;
    if (prior) {
        validate_prior_token(*prior, authority_key.pub_hex(), authority_cert_fingerprint,
                             miner_pubkey, difficulty_d);
        counter = prior->counter + 1;
    }
    SignedToken t;
    t.job_id = std::string(job_id);
    t.miner_pubkey = std::string(miner_pubkey);
    t.result_digest = std::string(result_digest);
    t.counter = counter;
    t.required = difficulty_d;
    t.authority_cert = authority_cert_fingerprint;
    t.signature = crypto::schnorr::sign(authority_key, t.preimage());
    return t;
}

bool token_signature_valid(const SignedToken& token, std::string_view authority_pubkey) {
    return crypto::schnorr::verify(authority_pubkey, token.preimage(), token.signature);
}

bool verify_token(const SignedToken& token, std::string_view root_pubkey,
                  const CertificateStore& certs, int64_t at_time) {
    if (token.counter < 1 || token.required < 1) return false;
    if (token.counter != token.required) return false;
    const Certificate* cert = certs.find(token.authority_cert);
    if (!cert) return false;
    if (!verify_certificate(*cert, root_pubkey, at_time)) return false;
    return token_signature_valid(token, cert->subject_pubkey);
}

}  // namespace coinami::verifier

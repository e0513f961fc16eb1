#include "coinami/verifier/certificate.hpp"

#include "coinami/crypto/sha256.hpp"
#include "coinami/kv.hpp"

namespace coinami::verifier {

std::string Certificate::preimage() const {
    kv::Doc doc;
    doc.add("format", "coinami.cert.v1");
    doc.add("subject_pubkey", subject_pubkey);
    doc.add("subject_name", subject_name);
    doc.add_int("valid_from", valid_from);
    doc.add_int("valid_until", valid_until);
    return doc.render();
}

std::string Certificate::render() const {
    std::string out = preimage();
    out += "signature=";
    out += signature;
    out += '\n';
    return out;
}

Certificate Certificate::parse(std::string_view text) {
    kv::Doc doc = kv::Doc::parse(text);
    if (doc.get("format") != "coinami.cert.v1") throw kv::DocError("unknown certificate format");
    Certificate c;
    c.subject_pubkey = doc.get("subject_pubkey");
    c.subject_name = doc.get("subject_name");
    c.valid_from = doc.get_int("valid_from");
    c.valid_until = doc.get_int("valid_until");
    c.signature = doc.get("signature");
    return c;
}

std::string Certificate::fingerprint() const {
    return crypto::sha256_hex(render());
}

Certificate issue_certificate(const crypto::schnorr::KeyPair& root_key,
                              std::string_view subject_pubkey, std::string_view subject_name,
                              int64_t valid_from, int64_t valid_until) {
    Certificate c;
    c.subject_pubkey = std::string(subject_pubkey);
    c.subject_name = std::string(subject_name);
    c.valid_from = valid_from;
    c.valid_until = valid_until;
    c.signature = crypto::schnorr::sign(root_key, c.preimage());
    return c;
}

bool verify_certificate(const Certificate& cert, std::string_view root_pubkey,
                        int64_t at_time) {
    if (at_time < cert.valid_from || at_time >= cert.valid_until) return false;
    if (!crypto::schnorr::is_valid_pub_hex(cert.subject_pubkey)) return false;
    return crypto::schnorr::verify(root_pubkey, cert.preimage(), cert.signature);
}

std::string CertificateStore::add(Certificate cert) {
    std::string fp = cert.fingerprint();
    by_fingerprint_.emplace(fp, std::move(cert));
    return fp;
}

const Certificate* CertificateStore::find(std::string_view fingerprint) const {
    auto it = by_fingerprint_.find(fingerprint);
    return it == by_fingerprint_.end() ? nullptr : &it->second;
}

std::vector<const Certificate*> CertificateStore::all() const {
    std::vector<const Certificate*> out;
    out.reserve(by_fingerprint_.size());
    for (const auto& [fp, cert] : by_fingerprint_) out.push_back(&cert);
    return out;
}

}  // namespace coinami::verifier

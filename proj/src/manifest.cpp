#include "coinami/assignment/manifest.hpp"

#include <cstdlib>

#include "coinami/crypto/encoding.hpp"
#include "coinami/crypto/sha256.hpp"
#include "coinami/kv.hpp"

namespace coinami::assignment {

double AssignmentManifest::decoy_fraction_value() const {
    char* end = nullptr;
    double v = std::strtod(decoy_fraction.c_str(), &end);
    if (!end || *end != '\0' || v <= 0.0 || v >= 1.0)
        throw kv::DocError("decoy_fraction must be a real in (0,1)");
    return v;
}

std::string AssignmentManifest::render() const {
    kv::Doc doc;
    doc.add("format", "coinami.manifest.v1");
    doc.add("job_id", job_id);
    doc.add("reference_id", reference_id);
    doc.add_int("k", params.k);
    doc.add_int("stride", params.stride);
    doc.add_int("max_edits", params.max_edits);
    doc.add_int("band", params.band);
    doc.add_uint("read_pair_count", read_pair_count);
    doc.add_uint("decoy_pair_count", decoy_pair_count);
    doc.add("decoy_fraction", decoy_fraction);
    doc.add_int("deadline_secs", deadline_secs);
    doc.add("payload_digest", payload_digest);
    return doc.render();
}

AssignmentManifest AssignmentManifest::parse(std::string_view text) {
    kv::Doc doc = kv::Doc::parse(text);
    if (doc.get("format") != "coinami.manifest.v1")
        throw kv::DocError("unknown manifest format");
    AssignmentManifest m;
    m.job_id = doc.get("job_id");
    m.reference_id = doc.get("reference_id");
    m.params.k = static_cast<int>(doc.get_int("k"));
    m.params.stride = static_cast<int>(doc.get_int("stride"));
    m.params.max_edits = static_cast<int>(doc.get_int("max_edits"));
    m.params.band = static_cast<int>(doc.get_int("band"));
    m.params.validate();
    m.read_pair_count = doc.get_uint("read_pair_count");
    m.decoy_pair_count = doc.get_uint("decoy_pair_count");
    m.decoy_fraction = doc.get("decoy_fraction");
    m.deadline_secs = doc.get_int("deadline_secs");
    m.payload_digest = doc.get("payload_digest");
    if (!crypto::is_hex(m.payload_digest) || m.payload_digest.size() != 64)
        throw kv::DocError("payload_digest must be 64 hex chars");
    m.decoy_fraction_value();  // range check
    return m;
}

std::string AssignmentBundle::payload_digest() const {
    crypto::Sha256 h;
    h.update(mate1_fastq);
    h.update(mate2_fastq);
    return crypto::hex_encode(crypto::digest_to_string(h.finish()));
}

std::string AssignmentBundle::render() const {
    kv::Doc doc;
    doc.add("format", "coinami.bundle.v1");
    doc.add("manifest", crypto::base64_encode(manifest.render()));
    doc.add("mate1", crypto::base64_encode(mate1_fastq));
    doc.add("mate2", crypto::base64_encode(mate2_fastq));
    return doc.render();
}

AssignmentBundle AssignmentBundle::parse(std::string_view text) {
    kv::Doc doc = kv::Doc::parse(text);
    if (doc.get("format") != "coinami.bundle.v1")
        throw kv::DocError("unknown bundle format");
    auto manifest_bytes = crypto::base64_decode(doc.get("manifest"));
    auto mate1 = crypto::base64_decode(doc.get("mate1"));
    auto mate2 = crypto::base64_decode(doc.get("mate2"));
    if (!manifest_bytes || !mate1 || !mate2) throw kv::DocError("bad base64 in bundle");
    AssignmentBundle b;
    b.manifest = AssignmentManifest::parse(*manifest_bytes);
    b.mate1_fastq = std::move(*mate1);
    b.mate2_fastq = std::move(*mate2);
    return b;
}

}  // namespace coinami::assignment

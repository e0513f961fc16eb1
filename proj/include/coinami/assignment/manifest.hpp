#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "coinami/mapper/mapper.hpp"

namespace coinami::assignment {

/// Job metadata shipped with every assignment. The rendering is a
/// canonical key/value document with fixed key order; payload_digest
/// is the lowercase hex SHA-256 of mate1 bytes followed by mate2
/// bytes.
struct AssignmentManifest {
    std::string job_id;
    std::string reference_id;
    mapper::MappingParams params;
    uint64_t read_pair_count = 0;
    uint64_t decoy_pair_count = 0;
    std::string decoy_fraction = "0.05";  // kept verbatim as configured
    int64_t deadline_secs = 600;
    std::string payload_digest;

    double decoy_fraction_value() const;

    std::string render() const;
    /// Throws kv::DocError on malformed input.
    static AssignmentManifest parse(std::string_view text);

    bool operator==(const AssignmentManifest&) const = default;
};

/// The unit shipped to miners: manifest plus both mate FASTQ streams,
/// packed into one key/value archive (FASTQ bytes base64-encoded).
struct AssignmentBundle {
    AssignmentManifest manifest;
    std::string mate1_fastq;
    std::string mate2_fastq;

    std::string render() const;
    static AssignmentBundle parse(std::string_view text);

    std::string payload_digest() const;
    bool digest_ok() const { return payload_digest() == manifest.payload_digest; }

    bool operator==(const AssignmentBundle&) const = default;
};

}  // namespace coinami::assignment

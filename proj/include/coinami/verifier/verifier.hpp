#pragma once

#include <map>
#include <string>
#include <string_view>

#include "coinami/assignment/factory.hpp"
#include "coinami/genomics/alignment.hpp"

namespace coinami::verifier {

enum class RejectReason {
    None,
    DecoyMismatch,
    MissingReads,
    UnknownName,
    NotSorted,
    BadFormat,
};

const char* to_string(RejectReason reason);

struct VerificationReport {
    std::string job_id;
    bool accepted = false;
    RejectReason reason = RejectReason::None;
    std::string detail;
    uint64_t decoys_checked = 0;
    uint64_t decoys_failed = 0;
    /// Decoys removed, qnames rewritten to "S<sample_id>:R<serial>".
    std::map<std::string, genomics::AlignmentFile> per_sample;
};

/// One linear scan over a parsed, sort-validated result: decrypt every
/// qname, compare decoys against their name-embedded expectations and
/// drop them, route sample records, and enforce that every issued name
/// appears exactly twice (one record per mate).
VerificationReport verify_result(const genomics::AlignmentFile& result,
                                 const assignment::AssignmentManifest& manifest,
                                 const assignment::DecoySecrets& secrets,
                                 const assignment::NameCrypter& crypter);

/// Parses first; malformed or unsorted bytes become Reject verdicts
/// rather than exceptions.
VerificationReport verify_result_text(std::string_view result_text,
                                      const assignment::AssignmentManifest& manifest,
                                      const assignment::DecoySecrets& secrets,
                                      const assignment::NameCrypter& crypter);

}  // namespace coinami::verifier

#include "coinami/verifier/verifier.hpp"

namespace coinami::verifier {

using assignment::PlainName;
using genomics::AlignmentFile;
using genomics::AlignmentRecord;

const char* to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::None: return "None";
        case RejectReason::DecoyMismatch: return "DecoyMismatch";
        case RejectReason::MissingReads: return "MissingReads";
        case RejectReason::UnknownName: return "UnknownName";
        case RejectReason::NotSorted: return "NotSorted";
        case RejectReason::BadFormat: return "BadFormat";
    }
    return "?";
}

namespace {

VerificationReport rejection(std::string job_id, RejectReason reason, std::string detail) {
    VerificationReport r;
    r.job_id = std::move(job_id);
    r.accepted = false;
    r.reason = reason;
    r.detail = std::move(detail);
    return r;
}

bool matches_expectation(const AlignmentRecord& rec, const assignment::MateExpectation& e) {
    if (rec.unmapped()) return false;
    return rec.rname == e.rname && rec.pos == e.pos && rec.cigar.str() == e.cigar &&
           rec.md == e.md;
}

}  // namespace

VerificationReport verify_result(const AlignmentFile& result,
                                 const assignment::AssignmentManifest& manifest,
                                 const assignment::DecoySecrets& secrets,
                                 const assignment::NameCrypter& crypter) {
    VerificationReport report;
    report.job_id = manifest.job_id;

    struct NameCount {
        int mate1 = 0;
        int mate2 = 0;
    };
    std::map<std::string, NameCount> seen;

    for (const auto& rec : result.records) {
        auto plain = crypter.decrypt(rec.qname);
        if (!plain)
            return rejection(manifest.job_id, RejectReason::UnknownName,
                             "undecryptable read name");
        if (plain->job_id != manifest.job_id)
            return rejection(manifest.job_id, RejectReason::UnknownName,
                             "read name from another job");
        if (!secrets.names.count(rec.qname))
            return rejection(manifest.job_id, RejectReason::UnknownName,
                             "read name not issued for this job");

        bool m1 = rec.flags & genomics::kFlagMate1;
        bool m2 = rec.flags & genomics::kFlagMate2;
        if (m1 == m2)
            return rejection(manifest.job_id, RejectReason::MissingReads,
                             "record lacks a single mate flag");
        auto& count = seen[rec.qname];
        (m1 ? count.mate1 : count.mate2)++;

        if (plain->is_decoy()) {
            const auto& expect = m1 ? plain->decoy().mate1 : plain->decoy().mate2;
            if (count.mate1 + count.mate2 == 1) ++report.decoys_checked;
            if (!matches_expectation(rec, expect)) ++report.decoys_failed;
            continue;  // decoy alignments never reach sample outputs
        }
        const auto& s = plain->sample();
        auto [it, inserted] = report.per_sample.try_emplace(s.sample_id);
        if (inserted) it->second.header = result.header;
        AlignmentRecord routed = rec;
        routed.qname = "S" + s.sample_id + ":R" + std::to_string(s.serial);
        it->second.records.push_back(std::move(routed));
    }

    if (report.decoys_failed > 0)
        return rejection(manifest.job_id, RejectReason::DecoyMismatch,
                         std::to_string(report.decoys_failed) + " decoy pair(s) misplaced");

    // completeness: every issued name, exactly one record per mate
    if (seen.size() != secrets.names.size())
        return rejection(manifest.job_id, RejectReason::MissingReads,
                         "result omits issued read pairs");
    for (const auto& [name, count] : seen) {
        if (count.mate1 != 1 || count.mate2 != 1)
            return rejection(manifest.job_id, RejectReason::MissingReads,
                             "read pair present wrong number of times");
    }
    if (report.decoys_checked != manifest.decoy_pair_count)
        return rejection(manifest.job_id, RejectReason::MissingReads,
                         "decoy count disagrees with manifest");

    for (auto& [sample_id, file] : report.per_sample) genomics::sort_records(file);
    report.accepted = true;
    return report;
}

VerificationReport verify_result_text(std::string_view result_text,
                                      const assignment::AssignmentManifest& manifest,
                                      const assignment::DecoySecrets& secrets,
                                      const assignment::NameCrypter& crypter) {
    try {
        AlignmentFile parsed = genomics::parse_alignment_file(result_text);
        return verify_result(parsed, manifest, secrets, crypter);
    } catch (const genomics::NotSorted& e) {
        return rejection(manifest.job_id, RejectReason::NotSorted, e.what());
    } catch (const genomics::MalformedRecord& e) {
        return rejection(manifest.job_id, RejectReason::BadFormat, e.what());
    }
}

}  // namespace coinami::verifier

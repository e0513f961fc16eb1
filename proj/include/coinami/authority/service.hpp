#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "coinami/assignment/factory.hpp"
#include "coinami/authority/scheduler.hpp"
#include "coinami/genomics/fastq.hpp"
#include "coinami/kv.hpp"
#include "coinami/verifier/token.hpp"
#include "coinami/verifier/verifier.hpp"

namespace coinami::authority {

struct AuthorityConfig {
    crypto::schnorr::KeyPair key;
    verifier::Certificate certificate;
    std::string root_pubkey;
    genomics::ReferenceGenome reference;
    assignment::SampleSet sample_pool;
    mapper::MappingParams params;
    int64_t difficulty_d = 1;
    int64_t deadline_secs = 600;
    std::string decoy_fraction = "0.05";
    double decoy_sub_rate = 0.01;
    int fragment_len = 300;
    /// Pairs taken from each sample per assignment.
    uint64_t pairs_per_assignment = 200;
    /// Assignments kept ready ahead of demand.
    size_t ready_jobs = 8;
    uint64_t seed = 1;
    /// 0 recycles the sample pool forever; otherwise stop after this
    /// many assignments.
    uint64_t max_jobs = 0;
};

/// The middle-tier daemon core: manufactures assignments, leases them
/// out, verifies returned mappings, and signs tokens. Wire-format
/// dispatch lives in handle(); tests may call the typed methods
/// directly.
class AuthorityService {
  public:
    AuthorityService(AuthorityConfig config, Clock& clock);

    struct ClaimResult {
        bool ok = false;
        std::string error;  // NO_JOBS
        std::string job_id;
        std::string bundle_text;
        int64_t lease_deadline = 0;
    };
    ClaimResult claim_job(const std::string& miner_pubkey);

    struct SubmitResult {
        bool ok = false;
        std::string error;  // LEASE_EXPIRED | NOT_LEASE_HOLDER | UNKNOWN_JOB |
                            // INVALID_PRIOR_TOKEN | REJECT
        verifier::RejectReason reject_reason = verifier::RejectReason::None;
        std::optional<verifier::SignedToken> token;
    };
    SubmitResult submit_result(const std::string& job_id, const std::string& miner_pubkey,
                               std::string_view result_bytes,
                               const std::optional<verifier::SignedToken>& prior);

    /// Bundle text for a known job, empty otherwise.
    std::string fetch_assignment(const std::string& job_id) const;

    const std::string& reference_id() const { return reference_id_; }
    const std::string& reference_fasta() const { return reference_fasta_; }
    const verifier::Certificate& certificate() const { return config_.certificate; }

    /// Tops the ready queue up to config.ready_jobs.
    void pump();
    std::vector<std::string> expire_leases();

    const JobScheduler& scheduler() const { return scheduler_; }
    JobScheduler& scheduler() { return scheduler_; }

    /// Demultiplexed outputs of an accepted job.
    const std::map<std::string, genomics::AlignmentFile>* completed_outputs(
        const std::string& job_id) const;

    /// Wire endpoint dispatch (v1): JOB_CLAIM, ASSIGNMENT_FETCH,
    /// RESULT_SUBMIT, REFERENCE_FETCH, CERT_FETCH.
    kv::Doc handle(const kv::Doc& request);

  private:
    struct JobData {
        assignment::AssignmentManifest manifest;
        std::string bundle_text;
        assignment::DecoySecrets secrets;
        std::map<std::string, genomics::AlignmentFile> outputs;
        bool completed = false;
    };

    void generate_one_job();
    std::shared_ptr<JobData> job_data(const std::string& job_id) const;

    AuthorityConfig config_;
    Clock& clock_;
    std::string cert_fingerprint_;
    std::string reference_id_;
    std::string reference_fasta_;
    mapper::KmerIndex index_;
    assignment::NameCrypter crypter_;
    JobScheduler scheduler_;

    mutable std::mutex jobs_mu_;
    std::map<std::string, std::shared_ptr<JobData>> jobs_;
    std::vector<uint64_t> sample_cursors_;
    uint64_t jobs_generated_ = 0;
    crypto::SplitMix64 rng_;

    std::mutex token_mu_;  // serializes counter chains; per miner would suffice
};

}  // namespace coinami::authority

#include "coinami/authority/service.hpp"

#include "coinami/crypto/encoding.hpp"
#include "coinami/crypto/sha256.hpp"
#include <cstdio>

namespace coinami::authority {

using assignment::AssignmentBundle;

AuthorityService::AuthorityService(AuthorityConfig config, Clock& clock)
    : config_(std::move(config)),
      clock_(clock),
      cert_fingerprint_(config_.certificate.fingerprint()),
      reference_fasta_(genomics::serialize_fasta(config_.reference)),
      index_(mapper::KmerIndex::build(config_.reference, config_.params.k)),
      crypter_(assignment::NameCrypter::from_master(
          "coinami.name-key." + config_.key.priv_hex())),
      rng_(config_.seed) {
    config_.params.validate();
    if (config_.difficulty_d < 1) throw std::invalid_argument("difficulty_d must be >= 1");
    reference_id_ = "ref-" + crypto::sha256_hex(reference_fasta_).substr(0, 16);
    sample_cursors_.assign(config_.sample_pool.samples.size(), 0);
    pump();
}

void AuthorityService::generate_one_job() {
    assignment::SampleSet slice;
    uint64_t total_pairs = 0;
    bool endless = config_.max_jobs == 0;
    for (size_t i = 0; i < config_.sample_pool.samples.size(); ++i) {
        const auto& pool = config_.sample_pool.samples[i];
        if (pool.pairs.empty()) continue;
        assignment::SampleData part;
        part.sample_id = pool.sample_id;
        part.first_serial = sample_cursors_[i];
        for (uint64_t n = 0; n < config_.pairs_per_assignment; ++n) {
            uint64_t cursor = sample_cursors_[i];
            if (!endless && cursor >= pool.pairs.size()) break;
            part.pairs.push_back(pool.pairs[cursor % pool.pairs.size()]);
            ++sample_cursors_[i];
        }
        total_pairs += part.pairs.size();
        if (!part.pairs.empty()) slice.samples.push_back(std::move(part));
    }
    if (total_pairs == 0) return;

    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "%06llx",
                  static_cast<unsigned long long>(rng_.next() & 0xffffffULL));
    std::string job_id = "JOB" + cert_fingerprint_.substr(0, 8) + "-" +
                         std::to_string(++jobs_generated_) + "-" + suffix;

    int read_len = static_cast<int>(slice.samples[0].pairs[0].mate1.seq.size());
    uint64_t decoy_count =
        assignment::decoy_count_for(total_pairs, [&] {
            assignment::AssignmentManifest probe;
            probe.decoy_fraction = config_.decoy_fraction;
            return probe.decoy_fraction_value();
        }());
    // an assignment without a single decoy would be unverifiable
    if (decoy_count == 0) decoy_count = 1;
    auto decoys = assignment::generate_decoys(config_.reference, index_, config_.params,
                                              decoy_count, read_len, config_.fragment_len,
                                              config_.decoy_sub_rate, rng_);

    assignment::MultiplexConfig mux;
    mux.job_id = job_id;
    mux.reference_id = reference_id_;
    mux.params = config_.params;
    mux.decoy_fraction = config_.decoy_fraction;
    mux.deadline_secs = config_.deadline_secs;
    mux.shuffle_seed = rng_.next();
    auto out = assignment::multiplex(slice, decoys, crypter_, mux);

    auto data = std::make_shared<JobData>();
    data->manifest = out.bundle.manifest;
    data->bundle_text = out.bundle.render();
    data->secrets = std::move(out.secrets);
    {
        std::lock_guard lock(jobs_mu_);
        jobs_.emplace(job_id, std::move(data));
    }
    scheduler_.add_job(job_id);
}

void AuthorityService::pump() {
    while (scheduler_.open_count() < config_.ready_jobs) {
        if (config_.max_jobs != 0 && jobs_generated_ >= config_.max_jobs) return;
        size_t before = jobs_generated_;
        generate_one_job();
        if (jobs_generated_ == before) return;  // pool exhausted
    }
}

std::shared_ptr<AuthorityService::JobData> AuthorityService::job_data(
    const std::string& job_id) const {
    std::lock_guard lock(jobs_mu_);
    auto it = jobs_.find(job_id);
    return it == jobs_.end() ? nullptr : it->second;
}

AuthorityService::ClaimResult AuthorityService::claim_job(const std::string& miner_pubkey) {
    ClaimResult result;
    expire_leases();
    pump();
    auto job_id = scheduler_.claim(miner_pubkey, clock_.now(), config_.deadline_secs);
    if (!job_id) {
        result.error = "NO_JOBS";
        return result;
    }
    auto data = job_data(*job_id);
    result.ok = true;
    result.job_id = *job_id;
    result.bundle_text = data->bundle_text;
    result.lease_deadline = scheduler_.lookup(*job_id)->deadline;
    return result;
}

std::vector<std::string> AuthorityService::expire_leases() {
    return scheduler_.expire_leases(clock_.now());
}

std::string AuthorityService::fetch_assignment(const std::string& job_id) const {
    auto data = job_data(job_id);
    return data ? data->bundle_text : std::string();
}

AuthorityService::SubmitResult AuthorityService::submit_result(
    const std::string& job_id, const std::string& miner_pubkey, std::string_view result_bytes,
    const std::optional<verifier::SignedToken>& prior) {
    SubmitResult result;
    expire_leases();

    // Reject a bogus prior before burning the lease on verification;
    // the miner may retry without it.
    if (prior) {
        try {
            verifier::validate_prior_token(*prior, config_.key.pub_hex(), cert_fingerprint_,
                                           miner_pubkey, config_.difficulty_d);
        } catch (const verifier::InvalidPriorToken&) {
            result.error = "INVALID_PRIOR_TOKEN";
            return result;
        }
    }

    switch (scheduler_.begin_submission(job_id, miner_pubkey, clock_.now())) {
        case SubmitGate::Ok: break;
        case SubmitGate::UnknownJob: result.error = "UNKNOWN_JOB"; return result;
        case SubmitGate::NotLeaseHolder: result.error = "NOT_LEASE_HOLDER"; return result;
        case SubmitGate::AlreadyCompleted:
        case SubmitGate::LeaseExpired: result.error = "LEASE_EXPIRED"; return result;
    }

    auto data = job_data(job_id);
    auto report = verifier::verify_result_text(result_bytes, data->manifest, data->secrets,
                                               crypter_);
    if (!report.accepted) {
        scheduler_.finish_submission(job_id, false);
        result.error = "REJECT";
        result.reject_reason = report.reason;
        return result;
    }

    std::string digest = crypto::sha256_hex(result_bytes);
    {
        std::lock_guard lock(token_mu_);
        result.token = verifier::issue_token(config_.key, cert_fingerprint_, job_id,
                                             miner_pubkey, digest, prior,
                                             config_.difficulty_d);
    }
    {
        std::lock_guard lock(jobs_mu_);
        data->outputs = std::move(report.per_sample);
        data->completed = true;
    }
    scheduler_.finish_submission(job_id, true);
    result.ok = true;
    return result;
}

const std::map<std::string, genomics::AlignmentFile>* AuthorityService::completed_outputs(
    const std::string& job_id) const {
    auto data = job_data(job_id);
    if (!data || !data->completed) return nullptr;
    return &data->outputs;
}

namespace {

kv::Doc error_doc(std::string_view code, std::string_view detail = {}) {
    kv::Doc doc;
    doc.add("type", "ERROR");
    doc.add("error", code);
    if (!detail.empty()) doc.add("detail", detail);
    return doc;
}

}  // namespace

kv::Doc AuthorityService::handle(const kv::Doc& request) {
    try {
        if (request.get("v") != "1") return error_doc("BAD_VERSION");
        const std::string& type = request.get("type");
        if (type == "JOB_CLAIM") {
            const std::string& miner = request.get("miner_pubkey");
            if (!crypto::schnorr::is_valid_pub_hex(miner)) return error_doc("BAD_PUBKEY");
            ClaimResult r = claim_job(miner);
            if (!r.ok) return error_doc(r.error);
            kv::Doc doc;
            doc.add("type", "OK");
            doc.add("job_id", r.job_id);
            doc.add("bundle", crypto::base64_encode(r.bundle_text));
            doc.add_int("lease_deadline", r.lease_deadline);
            return doc;
        }
        if (type == "ASSIGNMENT_FETCH") {
            std::string bundle = fetch_assignment(request.get("job_id"));
            if (bundle.empty()) return error_doc("NOT_FOUND");
            kv::Doc doc;
            doc.add("type", "OK");
            doc.add("bundle", crypto::base64_encode(bundle));
            return doc;
        }
        if (type == "RESULT_SUBMIT") {
            auto result_bytes = crypto::base64_decode(request.get("result"));
            if (!result_bytes) return error_doc("BAD_ENCODING");
            std::optional<verifier::SignedToken> prior;
            if (const std::string* p = request.find("prior_token"); p && !p->empty()) {
                auto bytes = crypto::base64_decode(*p);
                if (!bytes) return error_doc("BAD_ENCODING");
                prior = verifier::SignedToken::parse(*bytes);
            }
            SubmitResult r = submit_result(request.get("job_id"), request.get("miner_pubkey"),
                                           *result_bytes, prior);
            if (!r.ok) {
                kv::Doc doc = error_doc(r.error);
                if (r.error == "REJECT") doc.add("reason", verifier::to_string(r.reject_reason));
                return doc;
            }
            kv::Doc doc;
            doc.add("type", "OK");
            doc.add("token", crypto::base64_encode(r.token->render()));
            return doc;
        }
        if (type == "REFERENCE_FETCH") {
            if (request.get("reference_id") != reference_id_) return error_doc("NOT_FOUND");
            kv::Doc doc;
            doc.add("type", "OK");
            doc.add("fasta", crypto::base64_encode(reference_fasta_));
            return doc;
        }
        if (type == "CERT_FETCH") {
            kv::Doc doc;
            doc.add("type", "OK");
            doc.add("cert", crypto::base64_encode(config_.certificate.render()));
            return doc;
        }
        return error_doc("UNKNOWN_TYPE");
    } catch (const kv::DocError& e) {
        return error_doc("BAD_REQUEST", e.what());
    }
}

}  // namespace coinami::authority

#include <doctest.h>

#include "coinami/crypto/encoding.hpp"
#include "coinami/genomics/md.hpp"
#include "coinami/authority/service.hpp"
#include "coinami/miner/work.hpp"
#include "coinami/net/tcp.hpp"
#include "testutil.hpp"

using namespace coinami;
using namespace coinami::authority;
using coinami::crypto::SplitMix64;

namespace {

struct ServiceFixture {
    testutil::AuthorityFixture keys = testutil::make_authority_fixture(100);
    genomics::ReferenceGenome ref = testutil::make_reference(101, 6000);
    ManualClock clock{500};
    crypto::schnorr::KeyPair miner = crypto::schnorr::keygen_seeded(102);

    AuthorityConfig config(int64_t d = 1, uint64_t max_jobs = 3) {
        SplitMix64 rng(103);
        AuthorityConfig c;
        c.key = keys.authority;
        c.certificate = keys.cert;
        c.root_pubkey = keys.root.pub_hex();
        c.reference = ref;
        c.sample_pool = testutil::make_sample_set(ref, rng, 2, 12);
        c.difficulty_d = d;
        c.deadline_secs = 60;
        c.pairs_per_assignment = 4;
        c.ready_jobs = 2;
        c.seed = 7;
        c.max_jobs = max_jobs;
        return c;
    }

    std::string honest_result(const std::string& bundle_text) {
        auto bundle = assignment::AssignmentBundle::parse(bundle_text);
        REQUIRE(bundle.digest_ok());
        return miner::process_assignment(bundle, ref, 1).result_bytes;
    }
};

}  // namespace

TEST_CASE("authority service: claim, work, submit, final token at D=1") {
    ServiceFixture fx;
    AuthorityService service(fx.config(), fx.clock);
    std::string miner_pub = fx.miner.pub_hex();

    auto claim = service.claim_job(miner_pub);
    REQUIRE(claim.ok);
    CHECK(claim.lease_deadline == 560);
    CHECK(service.fetch_assignment(claim.job_id) == claim.bundle_text);

    std::string result = fx.honest_result(claim.bundle_text);
    auto submit = service.submit_result(claim.job_id, miner_pub, result, std::nullopt);
    REQUIRE(submit.ok);
    REQUIRE(submit.token);
    CHECK(submit.token->is_final());
    CHECK(submit.token->counter == 1);
    CHECK(submit.token->miner_pubkey == miner_pub);
    CHECK(submit.token->result_digest == crypto::sha256_hex(result));
    CHECK(verifier::verify_token(*submit.token, fx.keys.root.pub_hex(), fx.keys.store, 500));

    // demultiplexed outputs persist for the data owner
    const auto* outputs = service.completed_outputs(claim.job_id);
    REQUIRE(outputs);
    CHECK(outputs->size() == 2);
}

TEST_CASE("authority service: difficulty D=3 counts down to one final token") {
    ServiceFixture fx;
    AuthorityService service(fx.config(3, 4), fx.clock);
    std::string miner_pub = fx.miner.pub_hex();

    std::optional<verifier::SignedToken> held;
    int finals = 0;
    for (int i = 0; i < 3; ++i) {
        auto claim = service.claim_job(miner_pub);
        REQUIRE(claim.ok);
        auto submit = service.submit_result(claim.job_id, miner_pub,
                                            fx.honest_result(claim.bundle_text), held);
        REQUIRE(submit.ok);
        CHECK(submit.token->counter == i + 1);
        CHECK(submit.token->required == 3);
        if (submit.token->is_final()) {
            ++finals;
            held.reset();
        } else {
            held = submit.token;
        }
    }
    CHECK(finals == 1);
}

TEST_CASE("authority service: gatekeeping and rejection requeue") {
    ServiceFixture fx;
    AuthorityService service(fx.config(1, 2), fx.clock);
    std::string miner_pub = fx.miner.pub_hex();
    auto other = crypto::schnorr::keygen_seeded(104);

    auto claim = service.claim_job(miner_pub);
    REQUIRE(claim.ok);
    std::string result = fx.honest_result(claim.bundle_text);

    SUBCASE("someone else cannot submit on the lease") {
        auto submit = service.submit_result(claim.job_id, other.pub_hex(), result, std::nullopt);
        CHECK_FALSE(submit.ok);
        CHECK(submit.error == "NOT_LEASE_HOLDER");
    }

    SUBCASE("late submission bounces and the job is re-claimable") {
        fx.clock.advance(100);
        auto submit = service.submit_result(claim.job_id, miner_pub, result, std::nullopt);
        CHECK_FALSE(submit.ok);
        CHECK(submit.error == "LEASE_EXPIRED");
        bool found = false;
        for (int i = 0; i < 3 && !found; ++i) {
            auto again = service.claim_job(miner_pub);
            REQUIRE(again.ok);
            found = again.job_id == claim.job_id;
        }
        CHECK(found);
    }

    SUBCASE("tampered result is rejected and the job returns to the queue") {
        auto file = genomics::parse_alignment_file(result);
        // names are opaque out here, so nudge every mapped record;
        // the decoys among them trip the check
        const auto& bases = fx.ref.sequences[0].bases;
        for (auto& rec : file.records) {
            if (rec.unmapped()) continue;
            if (rec.pos + rec.cigar.reference_span() >= static_cast<int64_t>(bases.size()))
                continue;
            rec.pos += 1;
            rec.md = genomics::compute_md(
                bases.substr(rec.pos - 1, rec.cigar.reference_span()), rec.seq, rec.cigar);
        }
        genomics::sort_records(file);
        auto submit = service.submit_result(claim.job_id, miner_pub,
                                            genomics::serialize_alignment_file(file),
                                            std::nullopt);
        CHECK_FALSE(submit.ok);
        CHECK(submit.error == "REJECT");
        // the job goes back in line for someone to redo
        CHECK(service.scheduler().lookup(claim.job_id)->state == JobState::Available);
    }

    SUBCASE("bogus prior token is rejected before verification") {
        verifier::SignedToken junk;
        junk.job_id = "FAKE";
        junk.miner_pubkey = miner_pub;
        junk.result_digest = std::string(64, 'a');
        junk.counter = 1;
        junk.required = 1;
        junk.authority_cert = fx.keys.fingerprint;
        junk.signature = std::string(80, '0');
        auto submit = service.submit_result(claim.job_id, miner_pub, result, junk);
        CHECK_FALSE(submit.ok);
        CHECK(submit.error == "INVALID_PRIOR_TOKEN");
        // lease still held; an honest retry without the token succeeds
        auto retry = service.submit_result(claim.job_id, miner_pub, result, std::nullopt);
        CHECK(retry.ok);
    }
}

TEST_CASE("authority service: wire dispatch covers every endpoint") {
    ServiceFixture fx;
    AuthorityService service(fx.config(), fx.clock);
    std::string miner_pub = fx.miner.pub_hex();

    kv::Doc cert_req;
    cert_req.add("type", "CERT_FETCH");
    cert_req.add("v", "1");
    kv::Doc cert_resp = service.handle(cert_req);
    REQUIRE(cert_resp.get("type") == "OK");
    auto cert = verifier::Certificate::parse(*crypto::base64_decode(cert_resp.get("cert")));
    CHECK(cert == fx.keys.cert);

    kv::Doc claim_req;
    claim_req.add("type", "JOB_CLAIM");
    claim_req.add("v", "1");
    claim_req.add("miner_pubkey", miner_pub);
    kv::Doc claim_resp = service.handle(claim_req);
    REQUIRE(claim_resp.get("type") == "OK");
    std::string bundle_text = *crypto::base64_decode(claim_resp.get("bundle"));
    auto bundle = assignment::AssignmentBundle::parse(bundle_text);

    kv::Doc fetch_req;
    fetch_req.add("type", "ASSIGNMENT_FETCH");
    fetch_req.add("v", "1");
    fetch_req.add("job_id", claim_resp.get("job_id"));
    CHECK(service.handle(fetch_req).get("type") == "OK");

    kv::Doc ref_req;
    ref_req.add("type", "REFERENCE_FETCH");
    ref_req.add("v", "1");
    ref_req.add("reference_id", bundle.manifest.reference_id);
    kv::Doc ref_resp = service.handle(ref_req);
    REQUIRE(ref_resp.get("type") == "OK");
    auto fasta = *crypto::base64_decode(ref_resp.get("fasta"));
    CHECK(genomics::parse_fasta(fasta).sequences[0].bases == fx.ref.sequences[0].bases);

    kv::Doc submit_req;
    submit_req.add("type", "RESULT_SUBMIT");
    submit_req.add("v", "1");
    submit_req.add("job_id", claim_resp.get("job_id"));
    submit_req.add("miner_pubkey", miner_pub);
    submit_req.add("result",
                   crypto::base64_encode(fx.honest_result(bundle_text)));
    kv::Doc submit_resp = service.handle(submit_req);
    REQUIRE(submit_resp.get("type") == "OK");
    auto token = verifier::SignedToken::parse(*crypto::base64_decode(submit_resp.get("token")));
    CHECK(token.is_final());

    kv::Doc bad_version;
    bad_version.add("type", "CERT_FETCH");
    bad_version.add("v", "9");
    CHECK(service.handle(bad_version).get("type") == "ERROR");

    kv::Doc unknown;
    unknown.add("type", "NOPE");
    unknown.add("v", "1");
    CHECK(service.handle(unknown).get("error") == "UNKNOWN_TYPE");
}

TEST_CASE("authority service: full round trip over real sockets") {
    ServiceFixture fx;
    AuthorityService service(fx.config(), fx.clock);
    net::TcpServer server("127.0.0.1", 0,
                          [&service](const kv::Doc& req) { return service.handle(req); });

    net::TcpClient client("127.0.0.1", server.port());
    kv::Doc claim_req;
    claim_req.add("type", "JOB_CLAIM");
    claim_req.add("v", "1");
    claim_req.add("miner_pubkey", fx.miner.pub_hex());
    kv::Doc claim_resp = client.request(claim_req);
    REQUIRE(claim_resp.get("type") == "OK");

    std::string bundle_text = *crypto::base64_decode(claim_resp.get("bundle"));
    kv::Doc submit_req;
    submit_req.add("type", "RESULT_SUBMIT");
    submit_req.add("v", "1");
    submit_req.add("job_id", claim_resp.get("job_id"));
    submit_req.add("miner_pubkey", fx.miner.pub_hex());
    submit_req.add("result", crypto::base64_encode(fx.honest_result(bundle_text)));
    kv::Doc submit_resp = client.request(submit_req);
    REQUIRE(submit_resp.get("type") == "OK");
    server.stop();
}

TEST_CASE("authority service: NO_JOBS once the pool is exhausted") {
    ServiceFixture fx;
    auto config = fx.config(1, 1);
    AuthorityService service(std::move(config), fx.clock);
    auto first = service.claim_job(fx.miner.pub_hex());
    REQUIRE(first.ok);
    auto second = service.claim_job(fx.miner.pub_hex());
    CHECK_FALSE(second.ok);
    CHECK(second.error == "NO_JOBS");
}

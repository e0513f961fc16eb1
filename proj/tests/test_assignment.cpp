#include <doctest.h>

#include <cmath>
#include <set>

#include "coinami/assignment/factory.hpp"
#include "testutil.hpp"

using namespace coinami;
using namespace coinami::assignment;
using coinami::crypto::SplitMix64;

namespace {

PlainName sample_name(std::string job, std::string sid, uint64_t serial) {
    PlainName n;
    n.job_id = std::move(job);
    n.kind = PlainName::Sample{std::move(sid), serial};
    return n;
}

PlainName decoy_name(std::string job) {
    PlainName n;
    n.job_id = std::move(job);
    n.kind = PlainName::Decoy{{"chr1", 156433, "100M", "MD:Z:35T64"},
                              {"chr1", 156533, "100M", "MD:Z:100"}};
    return n;
}

}  // namespace

TEST_CASE("plain name: canonical renderings and parse round trip") {
    PlainName s = sample_name("JOB12345", "s1", 17);
    CHECK(s.render() == "JOB12345|Ss1|R17");
    CHECK(*PlainName::parse(s.render()) == s);

    PlainName d = decoy_name("JOB12345");
    CHECK(d.render() ==
          "JOB12345|DECOY|chr1|156433|100M|MD:Z:35T64|chr1|156533|100M|MD:Z:100");
    CHECK(*PlainName::parse(d.render()) == d);

    CHECK_FALSE(PlainName::parse("JOB|weird"));
    CHECK_FALSE(PlainName::parse("JOB|S|R1"));
    CHECK_FALSE(PlainName::parse("JOB|Sx|Rnope"));
    CHECK_FALSE(PlainName::parse("JOB|DECOY|chr1|0|100M|MD:Z:1|chr1|1|100M|MD:Z:1"));
    PlainName bad = sample_name("JO|B", "x", 1);
    CHECK_THROWS_AS(bad.render(), std::invalid_argument);
}

TEST_CASE("name encryption: round trip, mate equality, job salt") {
    NameCrypter crypter = NameCrypter::from_master("authority secret");
    PlainName d1 = decoy_name("JOB1");
    PlainName d2 = decoy_name("JOB2");
    std::string c1 = crypter.encrypt(d1);
    std::string c2 = crypter.encrypt(d2);
    CHECK(c1 != c2);                      // same decoy, different job, different name
    CHECK(crypter.encrypt(d1) == c1);     // deterministic: both mates share the name
    CHECK(*crypter.decrypt(c1) == d1);
    CHECK(*crypter.decrypt(c2) == d2);

    std::string tampered = c1;
    tampered[10] = tampered[10] == 'A' ? 'B' : 'A';
    CHECK_FALSE(crypter.decrypt(tampered));

    NameCrypter other = NameCrypter::from_master("another secret");
    CHECK_FALSE(other.decrypt(c1));
}

TEST_CASE("name encryption: length cannot reveal the kind") {
    NameCrypter crypter = NameCrypter::from_master("k");
    std::string a = crypter.encrypt(sample_name("JOB1", "s1", 0));
    std::string b = crypter.encrypt(sample_name("JOB1", "averylongsampleidentifier", 123456));
    std::string c = crypter.encrypt(decoy_name("JOB1"));
    CHECK(a.size() == b.size());
    CHECK(b.size() == c.size());
    for (const auto& name : {a, b, c})
        for (char ch : name)
            CHECK((std::isalnum(static_cast<unsigned char>(ch)) || ch == '+' || ch == '/' ||
                   ch == '='));
}

TEST_CASE("decoy generation: count zero and mapper-confirmed expectations") {
    genomics::ReferenceGenome ref = testutil::make_reference(31, 10000);
    mapper::MappingParams params;
    mapper::KmerIndex index = mapper::KmerIndex::build(ref, params.k);
    SplitMix64 rng(32);
    CHECK(generate_decoys(ref, index, params, 0, 100, 300, 0.01, rng).empty());

    auto decoys = generate_decoys(ref, index, params, 50, 100, 300, 0.01, rng);
    REQUIRE(decoys.size() == 50);
    for (const auto& d : decoys) {
        // generation already re-ran the mapper; spot-check a few against it again
        auto m1 = mapper::map_read(d.pair.mate1, index, ref, params);
        REQUIRE(m1.mapped());
        CHECK(m1.best->rname == d.expect1.rname);
        CHECK(m1.best->pos == d.expect1.pos);
        CHECK(m1.best->cigar.str() == d.expect1.cigar);
        CHECK(m1.best->md == d.expect1.md);
        auto m2 = mapper::map_read(d.pair.mate2, index, ref, params);
        REQUIRE(m2.mapped());
        CHECK(m2.best->pos == d.expect2.pos);
        CHECK(m2.best->md == d.expect2.md);
    }
}

TEST_CASE("decoy generation: impossible placement raises") {
    // a reference of a single repeated base can never map uniquely
    genomics::ReferenceGenome ref;
    ref.sequences.push_back({"chr1", std::string(2000, 'A')});
    mapper::MappingParams params;
    mapper::KmerIndex index = mapper::KmerIndex::build(ref, params.k);
    SplitMix64 rng(33);
    CHECK_THROWS_AS(generate_decoys(ref, index, params, 3, 100, 300, 0.0, rng),
                    CannotPlaceDecoys);
}

TEST_CASE("decoy count for the target fraction") {
    CHECK(decoy_count_for(950, 0.05) == 50);  // 50 decoys in a set of 1000
    CHECK(decoy_count_for(600, 0.05) == 32);
    CHECK(decoy_count_for(0, 0.05) == 0);
}

TEST_CASE("multiplex: determinism, pairing, manifest bookkeeping") {
    genomics::ReferenceGenome ref = testutil::make_reference(34, 8000);
    mapper::MappingParams params;
    mapper::KmerIndex index = mapper::KmerIndex::build(ref, params.k);
    SplitMix64 rng(35);
    SampleSet samples = testutil::make_sample_set(ref, rng, 2, 2);
    NameCrypter crypter = NameCrypter::from_master("mux key");

    MultiplexConfig config;
    config.job_id = "JOBX";
    config.reference_id = "ref-test";
    config.params = params;
    config.deadline_secs = 600;
    config.shuffle_seed = 77;

    auto out1 = multiplex(samples, {}, crypter, config);
    auto out2 = multiplex(samples, {}, crypter, config);
    CHECK(out1.bundle.render() == out2.bundle.render());  // byte-identical reruns
    CHECK(out1.bundle.manifest.read_pair_count == 4);
    CHECK(out1.bundle.manifest.decoy_pair_count == 0);
    CHECK(out1.bundle.digest_ok());

    auto mate1 = genomics::parse_fastq(out1.bundle.mate1_fastq);
    auto mate2 = genomics::parse_fastq(out1.bundle.mate2_fastq);
    REQUIRE(mate1.size() == 4);
    REQUIRE(mate2.size() == 4);
    for (size_t i = 0; i < mate1.size(); ++i) {
        CHECK(mate1[i].name == mate2[i].name);  // pairing stays positional
        auto plain = crypter.decrypt(mate1[i].name);
        REQUIRE(plain);
        CHECK(plain->job_id == "JOBX");
    }
    CHECK(out1.secrets.names.size() == 4);

    // different seed, different order, same multiset of names
    config.shuffle_seed = 78;
    auto out3 = multiplex(samples, {}, crypter, config);
    CHECK(out3.bundle.mate1_fastq != out1.bundle.mate1_fastq);
    std::set<std::string> n1, n3;
    for (const auto& r : mate1) n1.insert(r.name);
    for (const auto& r : genomics::parse_fastq(out3.bundle.mate1_fastq)) n3.insert(r.name);
    CHECK(n1 == n3);
}

TEST_CASE("multiplex: 950 sample pairs and 50 decoys make a 5% assignment") {
    genomics::ReferenceGenome ref = testutil::make_reference(36, 20000);
    mapper::MappingParams params;
    mapper::KmerIndex index = mapper::KmerIndex::build(ref, params.k);
    SplitMix64 rng(37);
    SampleSet samples = testutil::make_sample_set(ref, rng, 2, 475, 100, 300, 0.0);
    uint64_t n_decoys = decoy_count_for(950, 0.05);
    REQUIRE(n_decoys == 50);
    auto decoys = generate_decoys(ref, index, params, n_decoys, 100, 300, 0.01, rng);
    NameCrypter crypter = NameCrypter::from_master("ratio key");
    MultiplexConfig config;
    config.job_id = "JOBR";
    config.reference_id = "ref";
    config.params = params;
    config.shuffle_seed = 5;
    auto out = multiplex(samples, decoys, crypter, config);
    CHECK(out.bundle.manifest.read_pair_count == 1000);
    CHECK(out.bundle.manifest.decoy_pair_count == 50);
    // emitted fraction within a pair of round(f * total)
    uint64_t expect = static_cast<uint64_t>(
        std::llround(0.05 * static_cast<double>(out.bundle.manifest.read_pair_count)));
    CHECK(out.bundle.manifest.decoy_pair_count >= expect - 1);
    CHECK(out.bundle.manifest.decoy_pair_count <= expect + 1);
}

TEST_CASE("multiplex: name bijection over a generated assignment") {
    genomics::ReferenceGenome ref = testutil::make_reference(38, 8000);
    mapper::MappingParams params;
    mapper::KmerIndex index = mapper::KmerIndex::build(ref, params.k);
    SplitMix64 rng(39);
    SampleSet samples = testutil::make_sample_set(ref, rng, 3, 30);
    auto decoys = generate_decoys(ref, index, params, 5, 100, 300, 0.01, rng);
    NameCrypter crypter = NameCrypter::from_master("bijection key");
    MultiplexConfig config;
    config.job_id = "JOBB";
    config.reference_id = "ref";
    config.params = params;
    config.shuffle_seed = 9;
    auto out = multiplex(samples, decoys, crypter, config);
    CHECK(out.secrets.names.size() == 95);
    size_t name_len = 0;
    for (const auto& [cipher, plain] : out.secrets.names) {
        if (name_len == 0) name_len = cipher.size();
        CHECK(cipher.size() == name_len);  // uniform name shape
        auto roundtrip = crypter.decrypt(cipher);
        REQUIRE(roundtrip);
        CHECK(*roundtrip == plain);
    }
}

TEST_CASE("multiplex: rejects uneven read lengths") {
    SampleSet samples;
    SampleData data;
    data.sample_id = "s";
    data.pairs.push_back({{"", "ACGTACGTACGTACGTACGT", std::string(20, 'I')},
                          {"", "ACGTACGTACGTACGT", std::string(16, 'I')}});
    samples.samples.push_back(data);
    NameCrypter crypter = NameCrypter::from_master("k");
    MultiplexConfig config;
    config.job_id = "J";
    config.reference_id = "r";
    CHECK_THROWS_AS(multiplex(samples, {}, crypter, config), std::invalid_argument);
}

TEST_CASE("decoy guess bound") {
    CHECK(decoy_guess_bound(4, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(decoy_guess_bound(100, 0) == 1.0);
    CHECK(decoy_guess_bound(1000, 50) <= 1.06e-85);
    CHECK(decoy_guess_bound(1000, 50) > 0.0);
    // upper bound property: bound * C(total, decoys) >= 1
    double b = decoy_guess_bound(60, 7);
    CHECK(b * crypto::binomial(60, 7).to_double_floor() >= 1.0);
}

TEST_CASE("manifest and bundle round trips") {
    AssignmentManifest m;
    m.job_id = "JOB1";
    m.reference_id = "ref-abc";
    m.read_pair_count = 10;
    m.decoy_pair_count = 1;
    m.payload_digest = std::string(64, 'a');
    AssignmentManifest parsed = AssignmentManifest::parse(m.render());
    CHECK(parsed == m);
    CHECK(parsed.decoy_fraction_value() == doctest::Approx(0.05));

    AssignmentBundle b;
    b.manifest = m;
    b.mate1_fastq = "@x\nACGT\n+\nIIII\n";
    b.mate2_fastq = "@x\nTTTT\n+\nIIII\n";
    b.manifest.payload_digest = b.payload_digest();
    AssignmentBundle back = AssignmentBundle::parse(b.render());
    CHECK(back == b);
    CHECK(back.digest_ok());
    back.mate1_fastq[1] = 'y';
    CHECK_FALSE(back.digest_ok());
}

#include "coinami/assignment/factory.hpp"

#include <cmath>
#include <set>

#include "coinami/crypto/bigint.hpp"
#include "coinami/genomics/fastq.hpp"

namespace coinami::assignment {

using genomics::FastqRecord;
using genomics::ReferenceGenome;

namespace {

constexpr char kBases[] = "ACGT";

std::string noisy_copy(std::string_view source, double sub_rate, crypto::SplitMix64& rng) {
    std::string out(source);
    for (auto& c : out) {
        if (!rng.bernoulli(sub_rate)) continue;
        char replacement;
        do {
            replacement = kBases[rng.below(4)];
        } while (replacement == c);
        c = replacement;
    }
    return out;
}

std::string plausible_quality(size_t len, crypto::SplitMix64& rng) {
    std::string q(len, 'I');
    for (auto& c : q) c = static_cast<char>('A' + rng.below(9));  // 'A'..'I'
    return q;
}

MateExpectation expectation_from(const mapper::Alignment& aln) {
    return {aln.rname, aln.pos, aln.cigar.str(), aln.md};
}

}  // namespace

std::vector<DecoyRecord> generate_decoys(const ReferenceGenome& ref,
                                         const mapper::KmerIndex& index,
                                         const mapper::MappingParams& params, uint64_t count,
                                         int read_len, int fragment_len, double sub_rate,
                                         crypto::SplitMix64& rng) {
    if (sub_rate < 0.0 || sub_rate > 0.05)
        throw std::invalid_argument("sub_rate must be in [0, 0.05]");
    if (fragment_len < 2 * read_len)
        throw std::invalid_argument("fragment shorter than two reads");

    // Sequences long enough to host a fragment, weighted by the number
    // of valid start positions.
    std::vector<std::pair<size_t, int64_t>> eligible;  // (seq index, starts)
    int64_t total_starts = 0;
    for (size_t i = 0; i < ref.sequences.size(); ++i) {
        int64_t starts =
            static_cast<int64_t>(ref.sequences[i].bases.size()) - fragment_len + 1;
        if (starts > 0) {
            eligible.emplace_back(i, starts);
            total_starts += starts;
        }
    }
    if (count > 0 && eligible.empty())
        throw CannotPlaceDecoys("no reference sequence can host a fragment");

    std::vector<DecoyRecord> decoys;
    decoys.reserve(count);
    uint64_t attempts_left = 100 * count;
    while (decoys.size() < count) {
        if (attempts_left-- == 0)
            throw CannotPlaceDecoys("reference too repetitive for unique decoys");

        int64_t draw = static_cast<int64_t>(rng.below(static_cast<uint64_t>(total_starts)));
        size_t seq_idx = 0;
        for (const auto& [idx, starts] : eligible) {
            if (draw < starts) {
                seq_idx = idx;
                break;
            }
            draw -= starts;
        }
        const auto& seq = ref.sequences[seq_idx];
        int64_t start = draw;

        DecoyRecord d;
        d.pair.mate1.seq = noisy_copy(
            std::string_view(seq.bases).substr(start, read_len), sub_rate, rng);
        d.pair.mate1.qual = plausible_quality(read_len, rng);
        int64_t mate2_start = start + fragment_len - read_len;
        d.pair.mate2.seq = genomics::reverse_complement(
            noisy_copy(std::string_view(seq.bases).substr(mate2_start, read_len), sub_rate, rng));
        d.pair.mate2.qual = plausible_quality(read_len, rng);

        auto m1 = mapper::map_read(d.pair.mate1, index, ref, params);
        if (!m1.mapped() || !m1.unique || m1.best->rname != seq.name ||
            m1.best->pos != start + 1)
            continue;
        auto m2 = mapper::map_read(d.pair.mate2, index, ref, params);
        if (!m2.mapped() || !m2.unique || m2.best->rname != seq.name ||
            m2.best->pos != mate2_start + 1 || !m2.best->reverse)
            continue;
        d.expect1 = expectation_from(*m1.best);
        d.expect2 = expectation_from(*m2.best);
        decoys.push_back(std::move(d));
    }
    return decoys;
}

uint64_t decoy_count_for(uint64_t sample_pairs, double fraction) {
    if (fraction <= 0.0 || fraction >= 1.0)
        throw std::invalid_argument("fraction must be in (0,1)");
    return static_cast<uint64_t>(
        std::llround(fraction / (1.0 - fraction) * static_cast<double>(sample_pairs)));
}

MultiplexOutput multiplex(const SampleSet& samples, const std::vector<DecoyRecord>& decoys,
                          const NameCrypter& crypter, const MultiplexConfig& config) {
    struct Entry {
        const ReadPair* pair;
        PlainName plain;
    };
    std::vector<Entry> entries;

    std::set<std::string> sample_ids;
    size_t read_len = 0;
    auto note_len = [&read_len](const FastqRecord& r) {
        if (read_len == 0) read_len = r.seq.size();
        if (r.seq.size() != read_len || r.seq.size() != r.qual.size())
            throw std::invalid_argument("all assignment reads must share one length");
    };

    for (const auto& sample : samples.samples) {
        if (!sample_ids.insert(sample.sample_id).second)
            throw std::invalid_argument("duplicate sample id: " + sample.sample_id);
        for (size_t i = 0; i < sample.pairs.size(); ++i) {
            note_len(sample.pairs[i].mate1);
            note_len(sample.pairs[i].mate2);
            PlainName name;
            name.job_id = config.job_id;
            name.kind = PlainName::Sample{sample.sample_id, sample.first_serial + i};
            entries.push_back({&sample.pairs[i], std::move(name)});
        }
    }
    for (const auto& d : decoys) {
        note_len(d.pair.mate1);
        note_len(d.pair.mate2);
        PlainName name;
        name.job_id = config.job_id;
        name.kind = PlainName::Decoy{d.expect1, d.expect2};
        entries.push_back({&d.pair, std::move(name)});
    }

    crypto::SplitMix64 rng(config.shuffle_seed);
    crypto::shuffle(entries, rng);

    MultiplexOutput out;
    out.secrets.key_id = crypter.key_id();
    std::vector<FastqRecord> mate1, mate2;
    mate1.reserve(entries.size());
    mate2.reserve(entries.size());
    for (const auto& e : entries) {
        std::string enc = crypter.encrypt(e.plain);
        // serial construction makes plaintext names unique; a collision
        // here means key or naming breakage
        auto [it, inserted] = out.secrets.names.emplace(enc, e.plain);
        if (!inserted) throw std::logic_error("duplicate encrypted name");
        mate1.push_back({enc, e.pair->mate1.seq, e.pair->mate1.qual});
        mate2.push_back({enc, e.pair->mate2.seq, e.pair->mate2.qual});
    }

    out.bundle.mate1_fastq = genomics::serialize_fastq(mate1);
    out.bundle.mate2_fastq = genomics::serialize_fastq(mate2);
    out.bundle.manifest.job_id = config.job_id;
    out.bundle.manifest.reference_id = config.reference_id;
    out.bundle.manifest.params = config.params;
    out.bundle.manifest.read_pair_count = entries.size();
    out.bundle.manifest.decoy_pair_count = decoys.size();
    out.bundle.manifest.decoy_fraction = config.decoy_fraction;
    out.bundle.manifest.deadline_secs = config.deadline_secs;
    out.bundle.manifest.payload_digest = out.bundle.payload_digest();
    return out;
}

double decoy_guess_bound(uint64_t total, uint64_t decoys) {
    if (decoys > total) throw std::invalid_argument("decoys exceed total");
    crypto::BigUint c = crypto::binomial(total, decoys);
    if (c.bit_length() <= 1) return 1.0;  // C == 1
    double floor_c = c.to_double_floor();
    double bound = std::nextafter(1.0 / floor_c, 2.0);
    return bound > 1.0 ? 1.0 : bound;
}

}  // namespace coinami::assignment

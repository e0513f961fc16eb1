#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "coinami/assignment/manifest.hpp"
#include "coinami/assignment/names.hpp"
#include "coinami/crypto/rng.hpp"
#include "coinami/genomics/types.hpp"
#include "coinami/mapper/mapper.hpp"

namespace coinami::assignment {

struct ReadPair {
    genomics::FastqRecord mate1;
    genomics::FastqRecord mate2;
};

struct SampleData {
    std::string sample_id;
    std::vector<ReadPair> pairs;
    /// Serial of pairs[0]; lets an authority slice one sample pool
    /// across several assignments without reusing serials.
    uint64_t first_serial = 0;
};

struct SampleSet {
    std::vector<SampleData> samples;
};

struct DecoyRecord {
    ReadPair pair;
    MateExpectation expect1;
    MateExpectation expect2;
};

/// Authority-private map from encrypted name to plaintext. Never part
/// of the assignment.
struct DecoySecrets {
    std::string key_id;
    std::map<std::string, PlainName> names;
};

struct CannotPlaceDecoys : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Samples decoy pairs from the reference with per-base substitution
/// noise, keeping only pairs the mapper places uniquely back at their
/// sampled origin; the recorded expectations are the mapper's own
/// output. Throws CannotPlaceDecoys after 100*count failed attempts.
std::vector<DecoyRecord> generate_decoys(const genomics::ReferenceGenome& ref,
                                         const mapper::KmerIndex& index,
                                         const mapper::MappingParams& params, uint64_t count,
                                         int read_len, int fragment_len, double sub_rate,
                                         crypto::SplitMix64& rng);

/// Decoy pair count giving the target fraction of the final total:
/// round(fraction / (1 - fraction) * sample_pairs).
uint64_t decoy_count_for(uint64_t sample_pairs, double fraction);

struct MultiplexConfig {
    std::string job_id;
    std::string reference_id;
    mapper::MappingParams params;
    std::string decoy_fraction = "0.05";
    int64_t deadline_secs = 600;
    uint64_t shuffle_seed = 0;
};

struct MultiplexOutput {
    AssignmentBundle bundle;
    DecoySecrets secrets;
};

/// Renames every pair via the crypter, mixes samples and decoys, and
/// applies one seeded permutation to both mate files so pairing stays
/// positional. Deterministic in (inputs, key, job id, seed).
MultiplexOutput multiplex(const SampleSet& samples, const std::vector<DecoyRecord>& decoys,
                          const NameCrypter& crypter, const MultiplexConfig& config);

/// Upper bound on the probability of guessing the decoy subset:
/// 1 / C(total, decoys), exact binomial, rounded up.
double decoy_guess_bound(uint64_t total, uint64_t decoys);

}  // namespace coinami::assignment

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coinami/genomics/alignment.hpp"
#include "coinami/genomics/types.hpp"

namespace coinami::mapper {

struct MappingParams {
    int k = 16;         // seed length, 4..31
    int stride = 16;    // seed sampling step along the read
    int max_edits = 5;  // unit-cost edit budget
    int band = 5;       // half-width of the alignment window slack

    /// Throws std::invalid_argument when out of bounds.
    void validate() const;

    bool operator==(const MappingParams&) const = default;
};

struct ReferenceTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exhaustive k-mer occurrence index over a reference, 2-bit packed
/// keys. Immutable after build; shared freely across threads.
class KmerIndex {
  public:
    struct Hit {
        int32_t ref_idx;
        int32_t offset;  // 0-based
    };

    static KmerIndex build(const genomics::ReferenceGenome& ref, int k);

    const std::vector<Hit>* lookup(uint64_t packed_kmer) const;
    int k() const { return k_; }

    /// 2-bit packing; nullopt when the window holds a non-ACGT base.
    static std::optional<uint64_t> pack(std::string_view window);

  private:
    int k_ = 0;
    std::unordered_map<uint64_t, std::vector<Hit>> table_;
};

struct Alignment {
    std::string rname;
    int64_t pos = 0;  // 1-based leftmost reference position
    genomics::Cigar cigar;
    std::string md;
    int edits = 0;
    bool reverse = false;  // aligned as the reverse complement
};

struct MappingResult {
    std::optional<Alignment> best;
    bool unique = false;  // single location at the minimal edit distance

    bool mapped() const { return best.has_value(); }
    int mapq() const { return mapped() && unique ? 60 : 0; }
};

/// Seed-and-extend mapping. Deterministic: among all candidates at the
/// minimal edit distance within max_edits, returns the smallest
/// (reference index, position), forward strand winning ties.
MappingResult map_read(const genomics::FastqRecord& read, const KmerIndex& index,
                       const genomics::ReferenceGenome& ref, const MappingParams& params);

/// Positional brute force over every anchor and both strands; same
/// scoring and tie-break as map_read. Test oracle; cost is
/// O(|ref| * |read| window work), keep references small.
MappingResult brute_force_map(const genomics::FastqRecord& read,
                              const genomics::ReferenceGenome& ref,
                              const MappingParams& params);

/// Maps both mate files of an assignment into one sorted alignment
/// file. Mates are mapped independently; flags record the file of
/// origin. Duplicates are never removed. The final sort makes output
/// independent of thread count.
genomics::AlignmentFile map_assignment(const std::vector<genomics::FastqRecord>& mate1,
                                       const std::vector<genomics::FastqRecord>& mate2,
                                       const genomics::ReferenceGenome& ref,
                                       const MappingParams& params, int threads = 1);

/// Seed offsets sampled on a read: 0, stride, 2*stride, ..., plus the
/// final full window when the stride pattern leaves a tail.
std::vector<int> seed_offsets(int read_len, int k, int stride);

}  // namespace coinami::mapper

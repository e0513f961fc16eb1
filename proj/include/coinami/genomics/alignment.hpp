#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coinami/genomics/cigar.hpp"
#include "coinami/genomics/types.hpp"

namespace coinami::genomics {

// SAM-compatible flag bits; only these four are used.
constexpr uint32_t kFlagPaired = 0x1;
constexpr uint32_t kFlagUnmapped = 0x4;
constexpr uint32_t kFlagMate1 = 0x40;
constexpr uint32_t kFlagMate2 = 0x80;
constexpr uint32_t kFlagMask = kFlagPaired | kFlagUnmapped | kFlagMate1 | kFlagMate2;

struct AlignmentRecord {
    std::string qname;
    uint32_t flags = 0;
    std::string rname = "*";  // "*" when unmapped
    int64_t pos = 0;          // 1-based; 0 when unmapped
    int mapq = 0;             // 0..60
    Cigar cigar;              // empty when unmapped
    std::string seq;          // reference-forward orientation when mapped
    std::string md = "*";     // "MD:Z:..." or "*" when unmapped

    bool unmapped() const { return flags & kFlagUnmapped; }
    bool operator==(const AlignmentRecord&) const = default;
};

/// Sorted alignment container. Header names the reference sequences in
/// order; records are sorted by (reference index, pos, qname, flags,
/// cigar, seq) with unmapped records last, ordered by the same key.
struct AlignmentFile {
    struct HeaderLine {
        std::string name;
        int64_t length = 0;
        bool operator==(const HeaderLine&) const = default;
    };
    std::vector<HeaderLine> header;
    std::vector<AlignmentRecord> records;

    int header_index(std::string_view rname) const;
    bool operator==(const AlignmentFile&) const = default;
};

AlignmentFile::HeaderLine header_for(const ReferenceGenome::Sequence& seq);
std::vector<AlignmentFile::HeaderLine> header_for(const ReferenceGenome& genome);

/// Strict weak ordering used by the sortedness invariant.
bool record_less(const AlignmentFile& file, const AlignmentRecord& a, const AlignmentRecord& b);

void sort_records(AlignmentFile& file);

/// Index of the first out-of-order record (1-based), or 0 when sorted.
size_t first_unsorted_record(const AlignmentFile& file);

/// Parses the tab-separated alignment text. Validates field syntax,
/// header references and sort order. Throws MalformedRecord / NotSorted.
AlignmentFile parse_alignment_file(std::string_view text);

/// Byte-exact inverse of parse_alignment_file; throws NotSorted on
/// unsorted input.
std::string serialize_alignment_file(const AlignmentFile& file);

/// Per-reference byte offsets of the first record, written alongside
/// sorted files so consumers can seek by reference name.
std::string build_offset_index(const AlignmentFile& file);

}  // namespace coinami::genomics

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coinami::genomics {

/// Record-level parse failure; line numbers are 1-based.
struct MalformedRecord : std::runtime_error {
    MalformedRecord(size_t line_no_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_no_) + ": " + what_),
          line_no(line_no_) {}
    size_t line_no;
};

/// Sort-order violation; record indices are 1-based.
struct NotSorted : std::runtime_error {
    explicit NotSorted(size_t record_index_)
        : std::runtime_error("record " + std::to_string(record_index_) + " out of order"),
          record_index(record_index_) {}
    size_t record_index;
};

struct LengthMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_reference_base(char c) {
    return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}
inline bool is_read_base(char c) {
    return is_reference_base(c) || c == 'N';
}

char complement(char base);
std::string reverse_complement(std::string_view seq);

/// Reference sequences; bases restricted to {A,C,G,T}, names unique.
struct ReferenceGenome {
    struct Sequence {
        std::string name;
        std::string bases;
    };
    std::vector<Sequence> sequences;

    /// Index of the named sequence, or -1.
    int find(std::string_view name) const;
    int64_t total_length() const;
};

struct FastqRecord {
    std::string name;  // stored without the '@' prefix
    std::string seq;   // over {A,C,G,T,N}
    std::string qual;  // same length as seq, carried opaquely

    bool operator==(const FastqRecord&) const = default;
};

}  // namespace coinami::genomics

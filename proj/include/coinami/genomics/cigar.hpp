#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coinami/genomics/types.hpp"

namespace coinami::genomics {

/// Alignment operations: M match-or-mismatch, I insertion to the
/// reference, D deletion from the reference, S soft clip.
struct CigarOp {
    int64_t length;
    char code;

    bool operator==(const CigarOp&) const = default;
};

struct Cigar {
    std::vector<CigarOp> ops;

    /// Appends, merging with the previous op when codes match.
    void push(char code, int64_t length);

    /// Read bases consumed: M + I + S.
    int64_t read_span() const;
    /// Reference bases consumed: M + D.
    int64_t reference_span() const;
    int64_t match_span() const;

    bool empty() const { return ops.empty(); }

    /// "100M", "5S90M5S", ... Empty cigar renders as "*".
    std::string str() const;
    /// Throws MalformedRecord(0) on bad syntax or adjacent equal codes.
    static Cigar from_string(std::string_view text);

    bool operator==(const Cigar&) const = default;
};

/// Free-function form of Cigar::reference_span.
int64_t reference_span(const Cigar& cigar);

}  // namespace coinami::genomics

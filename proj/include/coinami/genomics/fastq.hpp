#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coinami/genomics/types.hpp"

namespace coinami::genomics {

/// Four-line records: "@name", sequence, "+", quality.
/// Throws MalformedRecord with the offending 1-based line number.
std::vector<FastqRecord> parse_fastq(std::string_view text);

/// Canonical form: bare "+" separator, '\n' line endings.
std::string serialize_fastq(const std::vector<FastqRecord>& records);

/// FASTA: ">name" then sequence lines. Input may be wrapped; output
/// is one unwrapped sequence line per record.
ReferenceGenome parse_fasta(std::string_view text);
std::string serialize_fasta(const ReferenceGenome& genome);

}  // namespace coinami::genomics

#pragma once

#include <string>
#include <string_view>

#include "coinami/genomics/cigar.hpp"

namespace coinami::genomics {

/// Builds the "MD:Z:..." reference-difference string for an alignment.
/// ref_window is the reference slice consumed by the cigar's M and D
/// ops, starting at the alignment position. Soft clips and insertions
/// consume read bases only. Throws LengthMismatch when the cigar does
/// not account for the window and read exactly.
std::string compute_md(std::string_view ref_window, std::string_view read_seq,
                       const Cigar& cigar);

/// Inverse direction: replays cigar + MD over the read to regenerate
/// the reference window compute_md consumed. Throws LengthMismatch on
/// inconsistent input. Serves as the consistency check for mapper
/// output and for verifying foreign alignments.
std::string reconstruct_reference_window(const Cigar& cigar, std::string_view md,
                                         std::string_view read_seq);

bool md_consistent(const Cigar& cigar, std::string_view md, std::string_view read_seq,
                   std::string_view ref_window);

}  // namespace coinami::genomics

#pragma once

#include <stdexcept>
#include <string>

#include "coinami/assignment/manifest.hpp"
#include "coinami/genomics/types.hpp"

namespace coinami::miner {

struct BundleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WorkResult {
    std::string result_bytes;  // serialized sorted alignment file
    std::string digest;        // sha256 hex of result_bytes
};

/// The proof-of-work step: check the bundle digest, map both mate
/// files with the manifest's parameters, and re-parse the serialized
/// output as a self-check before upload. Throws BundleError on a
/// corrupt bundle.
WorkResult process_assignment(const assignment::AssignmentBundle& bundle,
                              const genomics::ReferenceGenome& reference, int threads = 1);

}  // namespace coinami::miner

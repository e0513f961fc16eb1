#include "coinami/miner/work.hpp"

#include "coinami/crypto/sha256.hpp"
#include "coinami/genomics/alignment.hpp"
#include "coinami/genomics/fastq.hpp"
#include "coinami/mapper/mapper.hpp"

namespace coinami::miner {

WorkResult process_assignment(const assignment::AssignmentBundle& bundle,
                              const genomics::ReferenceGenome& reference, int threads) {
    if (!bundle.digest_ok()) throw BundleError("bundle payload digest mismatch");

    std::vector<genomics::FastqRecord> mate1, mate2;
    try {
        mate1 = genomics::parse_fastq(bundle.mate1_fastq);
        mate2 = genomics::parse_fastq(bundle.mate2_fastq);
    } catch (const genomics::MalformedRecord& e) {
        throw BundleError(std::string("bad FASTQ payload: ") + e.what());
    }
    if (mate1.size() != mate2.size() ||
        mate1.size() != bundle.manifest.read_pair_count)
        throw BundleError("pair count disagrees with manifest");

    genomics::AlignmentFile file =
        mapper::map_assignment(mate1, mate2, reference, bundle.manifest.params, threads);

    WorkResult out;
    out.result_bytes = genomics::serialize_alignment_file(file);
    // self-check: the upload must survive our own parser and sort gate
    genomics::parse_alignment_file(out.result_bytes);
    out.digest = crypto::sha256_hex(out.result_bytes);
    return out;
}

}  // namespace coinami::miner

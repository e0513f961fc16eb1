// Mapping throughput harness. Reports reads/second for the built-in
// mapper; the number depends entirely on the host and is informational.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>

#include "coinami/crypto/rng.hpp"
#include "coinami/genomics/fastq.hpp"
#include "coinami/mapper/mapper.hpp"
#include "coinami/util/fs.hpp"

using namespace coinami;

int main(int argc, char** argv) {
    CLI::App app{"coinami mapper benchmark"};
    std::string reference_path;
    int64_t synthetic_len = 100000;
    uint64_t n_reads = 20000;
    int read_len = 100;
    int threads = 1;
    uint64_t seed = 42;
    double sub_rate = 0.01;

    app.add_option("--reference", reference_path, "reference FASTA (else synthetic)");
    app.add_option("--synthetic-len", synthetic_len, "synthetic reference length");
    app.add_option("--reads", n_reads, "number of reads");
    app.add_option("--read-len", read_len, "read length");
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--seed", seed, "rng seed");
    app.add_option("--sub-rate", sub_rate, "per-base substitution rate");
    CLI11_PARSE(app, argc, argv);

    crypto::SplitMix64 rng(seed);
    genomics::ReferenceGenome ref;
    if (!reference_path.empty()) {
        ref = genomics::parse_fasta(util::read_file(reference_path));
    } else {
        std::string bases(synthetic_len, 'A');
        const char* alphabet = "ACGT";
        for (auto& c : bases) c = alphabet[rng.below(4)];
        ref.sequences.push_back({"chr1", std::move(bases)});
    }

    std::vector<genomics::FastqRecord> mate1, mate2;
    const std::string& bases = ref.sequences[0].bases;
    for (uint64_t i = 0; i < n_reads / 2; ++i) {
        int64_t pos = static_cast<int64_t>(rng.below(bases.size() - read_len + 1));
        std::string seq = bases.substr(pos, read_len);
        for (auto& c : seq) {
            if (rng.unit() < sub_rate) {
                const char* alphabet = "ACGT";
                c = alphabet[rng.below(4)];
            }
        }
        mate1.push_back({"r" + std::to_string(i), seq, std::string(read_len, 'I')});
        pos = static_cast<int64_t>(rng.below(bases.size() - read_len + 1));
        mate2.push_back({"r" + std::to_string(i),
                         genomics::reverse_complement(bases.substr(pos, read_len)),
                         std::string(read_len, 'I')});
    }

    mapper::MappingParams params;
    auto start = std::chrono::steady_clock::now();
    auto file = mapper::map_assignment(mate1, mate2, ref, params, threads);
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

    size_t mapped = 0;
    for (const auto& r : file.records)
        if (!r.unmapped()) ++mapped;
    double rps = static_cast<double>(file.records.size()) / elapsed.count();
    std::printf("reads %zu  mapped %zu  seconds %.3f  reads/sec %.0f  threads %d\n",
                file.records.size(), mapped, elapsed.count(), rps, threads);
    return 0;
}

// Python bindings for the core operations: format parsing, MD/CIGAR
// arithmetic, read mapping, and the assignment build/verify cycle.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coinami/assignment/factory.hpp"
#include "coinami/crypto/sha256.hpp"
#include "coinami/genomics/fastq.hpp"
#include "coinami/genomics/md.hpp"
#include "coinami/mapper/mapper.hpp"
#include "coinami/miner/work.hpp"
#include "coinami/verifier/verifier.hpp"

namespace py = pybind11;
using namespace coinami;

namespace {

mapper::MappingParams params_from_kwargs(int k, int stride, int max_edits, int band) {
    mapper::MappingParams p;
    p.k = k;
    p.stride = stride;
    p.max_edits = max_edits;
    p.band = band;
    p.validate();
    return p;
}

py::dict mapping_to_dict(const mapper::MappingResult& result) {
    py::dict d;
    d["mapped"] = result.mapped();
    if (result.mapped()) {
        d["rname"] = result.best->rname;
        d["pos"] = result.best->pos;
        d["cigar"] = result.best->cigar.str();
        d["md"] = result.best->md;
        d["edits"] = result.best->edits;
        d["reverse"] = result.best->reverse;
        d["mapq"] = result.mapq();
    }
    return d;
}

/// Reference plus its k-mer index, reusable across reads.
class Mapper {
  public:
    Mapper(const std::string& fasta_text, int k, int stride, int max_edits, int band)
        : params_(params_from_kwargs(k, stride, max_edits, band)),
          ref_(genomics::parse_fasta(fasta_text)),
          index_(mapper::KmerIndex::build(ref_, params_.k)) {}

    py::dict map_read(const std::string& seq) const {
        genomics::FastqRecord read{"r", seq, std::string(seq.size(), 'I')};
        return mapping_to_dict(mapper::map_read(read, index_, ref_, params_));
    }

    py::dict brute_force(const std::string& seq) const {
        genomics::FastqRecord read{"r", seq, std::string(seq.size(), 'I')};
        return mapping_to_dict(mapper::brute_force_map(read, ref_, params_));
    }

    std::string map_assignment(const std::string& mate1_fastq, const std::string& mate2_fastq,
                               int threads) const {
        auto m1 = genomics::parse_fastq(mate1_fastq);
        auto m2 = genomics::parse_fastq(mate2_fastq);
        auto file = mapper::map_assignment(m1, m2, ref_, params_, threads);
        return genomics::serialize_alignment_file(file);
    }

  private:
    mapper::MappingParams params_;
    genomics::ReferenceGenome ref_;
    mapper::KmerIndex index_;
};

/// Authority-side workflow holder: keeps the name key and per-job
/// secrets so callers can build assignments and verify results without
/// touching either directly.
class AssignmentFactory {
  public:
    AssignmentFactory(const std::string& fasta_text, const std::string& key_material, int k,
                      int stride, int max_edits, int band)
        : params_(params_from_kwargs(k, stride, max_edits, band)),
          ref_(genomics::parse_fasta(fasta_text)),
          index_(mapper::KmerIndex::build(ref_, params_.k)),
          crypter_(assignment::NameCrypter::from_master(key_material)) {}

    std::string build(const py::dict& samples, const std::string& job_id, uint64_t seed,
                      uint64_t decoy_pairs, double decoy_sub_rate, int fragment_len) {
        assignment::SampleSet set;
        for (const auto& item : samples) {
            assignment::SampleData data;
            data.sample_id = py::cast<std::string>(item.first);
            for (const auto& pair : py::cast<py::list>(item.second)) {
                auto t = py::cast<py::tuple>(pair);
                genomics::FastqRecord m1{"r", py::cast<std::string>(t[0]), {}};
                genomics::FastqRecord m2{"r", py::cast<std::string>(t[1]), {}};
                m1.qual.assign(m1.seq.size(), 'I');
                m2.qual.assign(m2.seq.size(), 'I');
                data.pairs.push_back({std::move(m1), std::move(m2)});
            }
            set.samples.push_back(std::move(data));
        }
        crypto::SplitMix64 rng(seed);
        int read_len = set.samples.empty() || set.samples[0].pairs.empty()
                           ? 100
                           : static_cast<int>(set.samples[0].pairs[0].mate1.seq.size());
        auto decoys = assignment::generate_decoys(ref_, index_, params_, decoy_pairs, read_len,
                                                  fragment_len, decoy_sub_rate, rng);
        assignment::MultiplexConfig config;
        config.job_id = job_id;
        config.reference_id = "ref-py";
        config.params = params_;
        config.shuffle_seed = rng.next();
        auto out = assignment::multiplex(set, decoys, crypter_, config);
        secrets_[job_id] = std::move(out.secrets);
        manifests_[job_id] = out.bundle.manifest;
        return out.bundle.render();
    }

    py::dict verify(const std::string& job_id, const std::string& result_text) const {
        auto secrets = secrets_.find(job_id);
        auto manifest = manifests_.find(job_id);
        if (secrets == secrets_.end() || manifest == manifests_.end())
            throw std::invalid_argument("unknown job id");
        auto report = verifier::verify_result_text(result_text, manifest->second,
                                                   secrets->second, crypter_);
        py::dict d;
        d["accepted"] = report.accepted;
        d["reason"] = std::string(verifier::to_string(report.reason));
        d["decoys_checked"] = report.decoys_checked;
        d["decoys_failed"] = report.decoys_failed;
        py::dict outputs;
        for (const auto& [sid, file] : report.per_sample)
            outputs[py::str(sid)] = genomics::serialize_alignment_file(file);
        d["per_sample"] = outputs;
        return d;
    }

  private:
    mapper::MappingParams params_;
    genomics::ReferenceGenome ref_;
    mapper::KmerIndex index_;
    assignment::NameCrypter crypter_;
    std::map<std::string, assignment::DecoySecrets> secrets_;
    std::map<std::string, assignment::AssignmentManifest> manifests_;
};

std::string process_assignment_py(const std::string& bundle_text,
                                  const std::string& fasta_text, int threads) {
    auto bundle = assignment::AssignmentBundle::parse(bundle_text);
    auto ref = genomics::parse_fasta(fasta_text);
    return miner::process_assignment(bundle, ref, threads).result_bytes;
}

}  // namespace

PYBIND11_MODULE(pycoinami, m) {
    m.doc() = "coinami core operations";

    m.def("compute_md",
          [](const std::string& ref_window, const std::string& read_seq,
             const std::string& cigar) {
              return genomics::compute_md(ref_window, read_seq,
                                          genomics::Cigar::from_string(cigar));
          },
          py::arg("ref_window"), py::arg("read_seq"), py::arg("cigar"));
    m.def("reconstruct_reference_window",
          [](const std::string& cigar, const std::string& md, const std::string& read_seq) {
              return genomics::reconstruct_reference_window(
                  genomics::Cigar::from_string(cigar), md, read_seq);
          },
          py::arg("cigar"), py::arg("md"), py::arg("read_seq"));
    m.def("reference_span", [](const std::string& cigar) {
        return genomics::reference_span(genomics::Cigar::from_string(cigar));
    });
    m.def("reverse_complement",
          [](const std::string& seq) { return genomics::reverse_complement(seq); });

    m.def("parse_fastq", [](const std::string& text) {
        py::list out;
        for (const auto& r : genomics::parse_fastq(text))
            out.append(py::make_tuple(r.name, r.seq, r.qual));
        return out;
    });
    m.def("serialize_fastq", [](const py::list& records) {
        std::vector<genomics::FastqRecord> rs;
        for (const auto& item : records) {
            auto t = py::cast<py::tuple>(item);
            rs.push_back({py::cast<std::string>(t[0]), py::cast<std::string>(t[1]),
                          py::cast<std::string>(t[2])});
        }
        return genomics::serialize_fastq(rs);
    });

    m.def("decoy_guess_bound", &assignment::decoy_guess_bound, py::arg("total"),
          py::arg("decoys"));
    m.def("sha256_hex", [](const std::string& data) { return crypto::sha256_hex(data); });
    m.def("process_assignment", &process_assignment_py, py::arg("bundle_text"),
          py::arg("fasta_text"), py::arg("threads") = 1);

    py::class_<Mapper>(m, "Mapper")
        .def(py::init<const std::string&, int, int, int, int>(), py::arg("fasta_text"),
             py::arg("k") = 16, py::arg("stride") = 16, py::arg("max_edits") = 5,
             py::arg("band") = 5)
        .def("map_read", &Mapper::map_read, py::arg("seq"))
        .def("brute_force", &Mapper::brute_force, py::arg("seq"))
        .def("map_assignment", &Mapper::map_assignment, py::arg("mate1_fastq"),
             py::arg("mate2_fastq"), py::arg("threads") = 1);

    py::class_<AssignmentFactory>(m, "AssignmentFactory")
        .def(py::init<const std::string&, const std::string&, int, int, int, int>(),
             py::arg("fasta_text"), py::arg("key_material"), py::arg("k") = 16,
             py::arg("stride") = 16, py::arg("max_edits") = 5, py::arg("band") = 5)
        .def("build", &AssignmentFactory::build, py::arg("samples"), py::arg("job_id"),
             py::arg("seed") = 1, py::arg("decoy_pairs") = 1,
             py::arg("decoy_sub_rate") = 0.01, py::arg("fragment_len") = 300)
        .def("verify", &AssignmentFactory::verify, py::arg("job_id"),
             py::arg("result_text"));
}

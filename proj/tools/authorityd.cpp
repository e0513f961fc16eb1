// Authority daemon: serves assignments over the wire API, verifies
// returned mappings, signs tokens, and persists demultiplexed
// per-sample outputs under the data directory.

#include <CLI11.hpp>
#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <thread>

#include "coinami/authority/service.hpp"
#include "coinami/genomics/fastq.hpp"
#include "coinami/miner/wallet.hpp"
#include "coinami/net/tcp.hpp"
#include "coinami/util/fs.hpp"

using namespace coinami;

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) {
    g_stop.store(true);
}

assignment::SampleSet load_samples(const std::string& dir) {
    assignment::SampleSet set;
    std::vector<std::string> mate1_files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.size() > 8 && name.ends_with("_1.fastq")) mate1_files.push_back(name);
    }
    std::sort(mate1_files.begin(), mate1_files.end());
    for (const auto& m1_name : mate1_files) {
        std::string sample_id = m1_name.substr(0, m1_name.size() - 8);
        std::string m2_name = sample_id + "_2.fastq";
        std::string m2_path = dir + "/" + m2_name;
        if (!util::file_exists(m2_path)) {
            std::fprintf(stderr, "warning: %s has no mate file %s, skipped\n",
                         m1_name.c_str(), m2_name.c_str());
            continue;
        }
        auto mate1 = genomics::parse_fastq(util::read_file(dir + "/" + m1_name));
        auto mate2 = genomics::parse_fastq(util::read_file(m2_path));
        if (mate1.size() != mate2.size())
            throw std::runtime_error("sample " + sample_id + ": mate files differ in length");
        assignment::SampleData data;
        data.sample_id = sample_id;
        for (size_t i = 0; i < mate1.size(); ++i)
            data.pairs.push_back({mate1[i], mate2[i]});
        set.samples.push_back(std::move(data));
    }
    return set;
}

void persist_completed(authority::AuthorityService& service, const std::string& datadir,
                       std::set<std::string>& written) {
    for (const auto& job_id : service.scheduler().job_ids()) {
        if (written.count(job_id)) continue;
        const auto* outputs = service.completed_outputs(job_id);
        if (!outputs) continue;
        std::string job_dir = datadir + "/completed/" + job_id;
        util::ensure_dir(job_dir);
        for (const auto& [sample_id, file] : *outputs) {
            std::string text = genomics::serialize_alignment_file(file);
            util::write_file(job_dir + "/" + sample_id + ".aln", text);
            util::write_file(job_dir + "/" + sample_id + ".aln.idx",
                             genomics::build_offset_index(file));
        }
        written.insert(job_id);
        std::printf("job %s completed, %zu sample file(s) written\n", job_id.c_str(),
                    outputs->size());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coinami authority daemon"};
    std::string listen = "127.0.0.1:7701";
    std::string cert_path, key_path, passphrase, samples_dir, reference_path;
    std::string datadir = "authority-data";
    std::string decoy_fraction = "0.05";
    int64_t difficulty_d = 1;
    int64_t deadline_secs = 600;
    uint64_t pairs_per_assignment = 200;
    uint64_t max_jobs = 0;
    uint64_t seed = 0;
    double decoy_sub_rate = 0.01;
    int fragment_len = 300;
    size_t ready_jobs = 8;

    app.add_option("--listen", listen, "listen address host:port");
    app.add_option("--root-cert", cert_path, "certificate issued by the root")->required();
    app.add_option("--key", key_path, "authority key file")->required();
    app.add_option("--passphrase", passphrase, "key passphrase")->required();
    app.add_option("--samples", samples_dir, "directory of <sample>_1.fastq/_2.fastq")
        ->required();
    app.add_option("--reference", reference_path, "reference FASTA")->required();
    app.add_option("--difficulty-d", difficulty_d, "assignments per token");
    app.add_option("--deadline-secs", deadline_secs, "lease deadline");
    app.add_option("--decoy-fraction", decoy_fraction, "decoy share of each assignment");
    app.add_option("--datadir", datadir, "output/state directory");
    app.add_option("--pairs-per-assignment", pairs_per_assignment,
                   "read pairs per sample per assignment");
    app.add_option("--max-jobs", max_jobs, "stop after this many assignments (0 = endless)");
    app.add_option("--seed", seed, "assignment generation seed (0 = random)");
    app.add_option("--decoy-sub-rate", decoy_sub_rate, "decoy substitution rate");
    app.add_option("--fragment-len", fragment_len, "decoy fragment length");
    app.add_option("--ready-jobs", ready_jobs, "assignments kept ready ahead of demand");
    CLI11_PARSE(app, argc, argv);

    try {
        authority::AuthorityConfig config;
        config.key = miner::load_keyfile(key_path, passphrase);
        config.certificate = verifier::Certificate::parse(util::read_file(cert_path));
        if (config.certificate.subject_pubkey != config.key.pub_hex())
            throw std::runtime_error("certificate subject does not match the key");
        config.reference = genomics::parse_fasta(util::read_file(reference_path));
        config.sample_pool = load_samples(samples_dir);
        if (config.sample_pool.samples.empty())
            throw std::runtime_error("no samples found in " + samples_dir);
        config.difficulty_d = difficulty_d;
        config.deadline_secs = deadline_secs;
        config.decoy_fraction = decoy_fraction;
        config.decoy_sub_rate = decoy_sub_rate;
        config.fragment_len = fragment_len;
        config.pairs_per_assignment = pairs_per_assignment;
        config.ready_jobs = ready_jobs;
        config.max_jobs = max_jobs;
        if (seed == 0) {
            std::random_device rd;
            seed = (static_cast<uint64_t>(rd()) << 32) | rd();
        }
        config.seed = seed;

        util::ensure_dir(datadir);
        util::ensure_dir(datadir + "/completed");

        authority::SystemClock clock;
        authority::AuthorityService service(std::move(config), clock);

        auto [host, port] = net::split_host_port(listen);
        net::TcpServer server(host, port,
                              [&service](const kv::Doc& req) { return service.handle(req); });
        std::printf("authorityd listening on %s:%u, reference %s\n", host.c_str(),
                    server.port(), service.reference_id().c_str());

        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);
        std::set<std::string> written;
        while (!g_stop.load()) {
            service.expire_leases();
            service.pump();
            persist_completed(service, datadir, written);
            std::this_thread::sleep_for(std::chrono::seconds(1));
        }
        server.stop();
        std::printf("authorityd stopped\n");
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

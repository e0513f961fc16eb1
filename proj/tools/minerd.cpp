// Miner daemon: claims assignments, maps them, submits results, and
// turns final tokens into blocks gossiped to peers.

#include <CLI11.hpp>
#include <atomic>
#include <csignal>
#include <cstdio>
#include <map>
#include <thread>

#include "coinami/authority/scheduler.hpp"
#include "coinami/crypto/encoding.hpp"
#include "coinami/genomics/fastq.hpp"
#include "coinami/miner/node.hpp"
#include "coinami/miner/wallet.hpp"
#include "coinami/miner/work.hpp"
#include "coinami/net/tcp.hpp"
#include "coinami/util/fs.hpp"

using namespace coinami;

namespace {

std::atomic<bool> g_stop{false};

void handle_signal(int) {
    g_stop.store(true);
}

void broadcast(const std::vector<std::string>& peers, const std::string& self_addr,
               kv::Doc doc, const std::string& skip = {}) {
    if (!self_addr.empty()) doc.add("from", self_addr);
    for (const auto& peer : peers) {
        if (peer == skip) continue;
        try {
            net::TcpClient client(peer);
            client.request(doc);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "gossip to %s failed: %s\n", peer.c_str(), e.what());
        }
    }
}

std::string token_path(const std::string& datadir, const std::string& cert_fp) {
    return datadir + "/token-" + cert_fp.substr(0, 8) + ".tok";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coinami miner daemon"};
    std::string key_path, passphrase, datadir = "miner-data", listen, root_pubkey;
    std::vector<std::string> authorities, peers;
    int threads = 1;

    app.add_option("--key", key_path, "miner key file")->required();
    app.add_option("--passphrase", passphrase, "key passphrase")->required();
    app.add_option("--authority", authorities, "authority address host:port")->required();
    app.add_option("--peer", peers, "peer gossip address host:port");
    app.add_option("--datadir", datadir, "state directory");
    app.add_option("--threads", threads, "mapping worker threads");
    app.add_option("--listen", listen, "gossip listen address host:port (empty = off)");
    app.add_option("--root-pubkey", root_pubkey, "root authority public key (hex)")
        ->required();
    CLI11_PARSE(app, argc, argv);

    try {
        auto key = miner::load_keyfile(key_path, passphrase);
        std::string pubkey = key.pub_hex();
        util::ensure_dir(datadir);
        util::ensure_dir(datadir + "/refs");
        util::ensure_dir(datadir + "/certs");

        miner::Node node(root_pubkey, {});

        // previously seen certificates first: persisted blocks cannot
        // re-validate without them
        for (const auto& entry : std::filesystem::directory_iterator(datadir + "/certs")) {
            try {
                auto cert = verifier::Certificate::parse(util::read_file(entry.path().string()));
                if (crypto::schnorr::verify(root_pubkey, cert.preimage(), cert.signature))
                    node.add_certificate(cert);
            } catch (const std::exception&) {
            }
        }

        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);

        std::string chain_path = datadir + "/chain.dat";
        if (util::file_exists(chain_path)) {
            size_t n = node.load_chain(util::read_file(chain_path));
            std::printf("loaded %zu block(s), tip height %lld\n", n,
                        static_cast<long long>(node.tip_height()));
        }

        std::string self_addr;
        std::unique_ptr<net::TcpServer> gossip_server;
        if (!listen.empty()) {
            auto [host, port] = net::split_host_port(listen);
            gossip_server = std::make_unique<net::TcpServer>(
                host, port, [&](const kv::Doc& msg) {
                    miner::Node::Outcome out = node.handle_gossip(msg);
                    std::string from = msg.has("from") ? msg.get("from") : "";
                    for (const auto& relay : out.relay)
                        broadcast(peers, self_addr, relay, from);
                    if (!out.relay.empty())
                        util::write_file(chain_path, node.serialize_chain());
                    if (out.reply) return *out.reply;
                    kv::Doc ok;
                    ok.add("type", "OK");
                    return ok;
                });
            self_addr = host + ":" + std::to_string(gossip_server->port());
            std::printf("gossip listening on %s\n", self_addr.c_str());
        }


        // certificates and any held non-final tokens, per authority;
        // an authority that is down at boot is retried, not fatal
        std::map<std::string, std::string> cert_fp_by_authority;
        std::map<std::string, std::optional<verifier::SignedToken>> held_tokens;
        for (const auto& addr : authorities) {
            while (!g_stop.load()) {
                try {
                    kv::Doc req;
                    req.add("type", "CERT_FETCH");
                    req.add("v", "1");
                    net::TcpClient client(addr);
                    kv::Doc resp = client.request(req);
                    if (resp.get("type") != "OK") throw std::runtime_error("CERT_FETCH failed");
                    auto cert_bytes = crypto::base64_decode(resp.get("cert"));
                    auto cert = verifier::Certificate::parse(*cert_bytes);
                    if (!crypto::schnorr::verify(root_pubkey, cert.preimage(), cert.signature))
                        throw std::runtime_error("authority " + addr +
                                                 " has no valid certificate");
                    std::string fp = cert.fingerprint();
                    cert_fp_by_authority[addr] = fp;
                    util::write_file(datadir + "/certs/" + fp.substr(0, 16) + ".cert",
                                     cert.render());
                    node.add_certificate(cert);
                    std::string tpath = token_path(datadir, fp);
                    if (util::file_exists(tpath)) {
                        auto t = verifier::SignedToken::parse(util::read_file(tpath));
                        if (!t.is_final()) held_tokens[addr] = t;
                        std::printf("resuming token chain %lld/%lld with %s\n",
                                    static_cast<long long>(t.counter),
                                    static_cast<long long>(t.required), addr.c_str());
                    }
                    break;
                } catch (const std::exception& e) {
                    std::fprintf(stderr, "waiting for %s: %s\n", addr.c_str(), e.what());
                    std::this_thread::sleep_for(std::chrono::seconds(2));
                }
            }
        }
        if (g_stop.load()) return 0;

        std::map<std::string, genomics::ReferenceGenome> ref_cache;
        authority::SystemClock clock;
        int64_t backoff = 1;
        size_t next_authority = 0;

        while (!g_stop.load()) {
            const std::string& addr = authorities[next_authority];
            next_authority = (next_authority + 1) % authorities.size();
            try {
                net::TcpClient client(addr);
                kv::Doc claim;
                claim.add("type", "JOB_CLAIM");
                claim.add("v", "1");
                claim.add("miner_pubkey", pubkey);
                kv::Doc resp = client.request(claim);
                if (resp.get("type") != "OK") {
                    if (next_authority == 0) {
                        std::printf("no jobs available, backing off %llds\n",
                                    static_cast<long long>(backoff));
                        std::this_thread::sleep_for(std::chrono::seconds(backoff));
                        backoff = std::min<int64_t>(backoff * 2, 60);
                    }
                    continue;
                }
                backoff = 1;
                std::string job_id = resp.get("job_id");
                auto bundle_bytes = crypto::base64_decode(resp.get("bundle"));
                auto bundle = assignment::AssignmentBundle::parse(*bundle_bytes);
                std::printf("claimed %s (%llu pairs)\n", job_id.c_str(),
                            static_cast<unsigned long long>(
                                bundle.manifest.read_pair_count));

                const std::string& ref_id = bundle.manifest.reference_id;
                if (!ref_cache.count(ref_id)) {
                    std::string ref_path = datadir + "/refs/" + ref_id + ".fa";
                    std::string fasta;
                    if (util::file_exists(ref_path)) {
                        fasta = util::read_file(ref_path);
                    } else {
                        kv::Doc freq;
                        freq.add("type", "REFERENCE_FETCH");
                        freq.add("v", "1");
                        freq.add("reference_id", ref_id);
                        kv::Doc fresp = client.request(freq);
                        if (fresp.get("type") != "OK")
                            throw std::runtime_error("reference fetch failed");
                        fasta = *crypto::base64_decode(fresp.get("fasta"));
                        util::write_file(ref_path, fasta);
                    }
                    ref_cache.emplace(ref_id, genomics::parse_fasta(fasta));
                }

                miner::WorkResult work =
                    miner::process_assignment(bundle, ref_cache.at(ref_id), threads);

                kv::Doc submit;
                submit.add("type", "RESULT_SUBMIT");
                submit.add("v", "1");
                submit.add("job_id", job_id);
                submit.add("miner_pubkey", pubkey);
                auto held = held_tokens.find(addr);
                if (held != held_tokens.end() && held->second)
                    submit.add("prior_token",
                               crypto::base64_encode(held->second->render()));
                submit.add("result", crypto::base64_encode(work.result_bytes));
                kv::Doc sresp = client.request(submit);
                if (sresp.get("type") != "OK") {
                    std::fprintf(stderr, "submission of %s rejected: %s\n", job_id.c_str(),
                                 sresp.get("error").c_str());
                    continue;  // never resubmit identical bytes
                }
                auto token =
                    verifier::SignedToken::parse(*crypto::base64_decode(sresp.get("token")));
                std::string fp = cert_fp_by_authority[addr];
                if (!token.is_final()) {
                    held_tokens[addr] = token;
                    util::write_file(token_path(datadir, fp), token.render());
                    std::printf("token %lld/%lld for %s\n",
                                static_cast<long long>(token.counter),
                                static_cast<long long>(token.required), job_id.c_str());
                    continue;
                }
                held_tokens[addr].reset();
                std::remove(token_path(datadir, fp).c_str());
                auto announce = node.mine_block(token, clock.now());
                if (!announce) {
                    std::fprintf(stderr, "mined block failed local validation\n");
                    continue;
                }
                util::write_file(chain_path, node.serialize_chain());
                broadcast(peers, self_addr, *announce);
                std::printf("block %s at height %lld, balance %llu\n",
                            announce->get("block_hash").substr(0, 16).c_str(),
                            static_cast<long long>(node.tip_height()),
                            static_cast<unsigned long long>(node.balance(pubkey)));
            } catch (const std::exception& e) {
                std::fprintf(stderr, "error with %s: %s\n", addr.c_str(), e.what());
                std::this_thread::sleep_for(std::chrono::seconds(backoff));
                backoff = std::min<int64_t>(backoff * 2, 60);
            }
        }
        if (gossip_server) gossip_server->stop();
        util::write_file(chain_path, node.serialize_chain());
        std::printf("minerd stopped\n");
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

// Root authority tool: key generation, certificate issuance, and
// certificate verification.

#include <CLI11.hpp>
#include <cstdio>

#include "coinami/authority/scheduler.hpp"
#include "coinami/miner/wallet.hpp"
#include "coinami/util/fs.hpp"
#include "coinami/verifier/certificate.hpp"

using namespace coinami;

int main(int argc, char** argv) {
    CLI::App app{"coinami root certificate authority"};
    app.require_subcommand(1);

    auto* keygen = app.add_subcommand("keygen", "generate a root keypair");
    std::string kg_out, kg_pass;
    keygen->add_option("--out", kg_out, "key file path")->required();
    keygen->add_option("--passphrase", kg_pass, "key file passphrase")->required();

    auto* issue = app.add_subcommand("issue", "issue an authority certificate");
    std::string is_key, is_pass, is_pub, is_name, is_out;
    int64_t is_days = 365;
    issue->add_option("--root-key", is_key, "root key file")->required();
    issue->add_option("--passphrase", is_pass, "root key passphrase")->required();
    issue->add_option("--authority-pubkey", is_pub, "subject public key (hex)")->required();
    issue->add_option("--name", is_name, "subject name")->required();
    issue->add_option("--valid-days", is_days, "validity window in days");
    issue->add_option("--out", is_out, "certificate output path")->required();

    auto* verify = app.add_subcommand("verify", "verify an authority certificate");
    std::string vf_cert, vf_root;
    int64_t vf_at = 0;
    verify->add_option("--cert", vf_cert, "certificate file")->required();
    verify->add_option("--root-pubkey", vf_root, "root public key (hex)")->required();
    verify->add_option("--at", vf_at, "verification time (unix secs; 0 = now)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*keygen) {
            auto key = crypto::schnorr::keygen();
            miner::save_keyfile(kg_out, key, kg_pass);
            std::printf("pubkey %s\n", key.pub_hex().c_str());
            return 0;
        }
        if (*issue) {
            auto key = miner::load_keyfile(is_key, is_pass);
            if (!crypto::schnorr::is_valid_pub_hex(is_pub)) {
                std::fprintf(stderr, "invalid authority pubkey\n");
                return 1;
            }
            authority::SystemClock clock;
            int64_t now = clock.now();
            auto cert = verifier::issue_certificate(key, is_pub, is_name, now,
                                                    now + is_days * 86400);
            util::write_file(is_out, cert.render());
            std::printf("fingerprint %s\n", cert.fingerprint().c_str());
            return 0;
        }
        if (*verify) {
            auto cert = verifier::Certificate::parse(util::read_file(vf_cert));
            int64_t at = vf_at != 0 ? vf_at : authority::SystemClock().now();
            bool ok = verifier::verify_certificate(cert, vf_root, at);
            std::printf("%s\n", ok ? "OK" : "FAIL");
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

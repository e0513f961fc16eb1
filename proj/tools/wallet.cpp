// CLI wallet: key generation, balance lookup against a local chain
// file, and coin transfer via gossip.

#include <CLI11.hpp>
#include <cstdio>

#include "coinami/miner/node.hpp"
#include "coinami/miner/wallet.hpp"
#include "coinami/net/tcp.hpp"
#include "coinami/util/fs.hpp"

using namespace coinami;

namespace {

ledger::ChainState load_local_chain(const std::string& chain_path) {
    // the chain file is this host's own persisted state; token
    // re-verification would need the certificate set, which wallets
    // do not carry
    ledger::ChainState chain({"", false}, nullptr);
    if (util::file_exists(chain_path)) chain.load_store(util::read_file(chain_path));
    return chain;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coinami wallet"};
    app.require_subcommand(1);

    auto* keygen = app.add_subcommand("keygen", "generate a keypair");
    std::string kg_out, kg_pass;
    keygen->add_option("--out", kg_out, "key file path")->required();
    keygen->add_option("--passphrase", kg_pass, "key file passphrase")->required();

    auto* balance = app.add_subcommand("balance", "sum unspent outputs for a key");
    std::string bl_key, bl_pass, bl_pubkey, bl_chain = "miner-data/chain.dat";
    balance->add_option("--key", bl_key, "key file");
    balance->add_option("--passphrase", bl_pass, "key passphrase");
    balance->add_option("--pubkey", bl_pubkey, "public key hex (alternative to --key)");
    balance->add_option("--chain", bl_chain, "chain file");

    auto* send = app.add_subcommand("send", "transfer coins");
    std::string sd_key, sd_pass, sd_to, sd_chain = "miner-data/chain.dat";
    std::vector<std::string> sd_peers;
    uint64_t sd_amount = 0;
    send->add_option("--key", sd_key, "key file")->required();
    send->add_option("--passphrase", sd_pass, "key passphrase")->required();
    send->add_option("--to", sd_to, "recipient public key hex")->required();
    send->add_option("--amount", sd_amount, "coin units")->required();
    send->add_option("--chain", sd_chain, "chain file");
    send->add_option("--peer", sd_peers, "gossip peer to announce through")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*keygen) {
            auto key = crypto::schnorr::keygen();
            miner::save_keyfile(kg_out, key, kg_pass);
            std::printf("pubkey %s\n", key.pub_hex().c_str());
            std::printf("balance 0\n");
            return 0;
        }
        if (*balance) {
            std::string pubkey = bl_pubkey;
            if (pubkey.empty()) {
                if (bl_key.empty()) {
                    std::fprintf(stderr, "need --key or --pubkey\n");
                    return 1;
                }
                pubkey = miner::load_keyfile(bl_key, bl_pass).pub_hex();
            }
            auto chain = load_local_chain(bl_chain);
            std::printf("balance %llu\n",
                        static_cast<unsigned long long>(chain.balance(pubkey)));
            return 0;
        }
        if (*send) {
            if (!crypto::schnorr::is_valid_pub_hex(sd_to)) {
                std::fprintf(stderr, "invalid recipient key\n");
                return 1;
            }
            auto key = miner::load_keyfile(sd_key, sd_pass);
            auto chain = load_local_chain(sd_chain);
            ledger::Transaction tx =
                miner::build_send_tx(chain.utxo(), key, sd_to, sd_amount);
            kv::Doc announce = miner::Node::make_tx_announce(tx);
            for (const auto& peer : sd_peers) {
                net::TcpClient client(peer);
                client.request(announce);
            }
            std::printf("txid %s\n", tx.txid().c_str());
            std::printf("the balance reflects the transfer once a block includes it\n");
            return 0;
        }
    } catch (const miner::InsufficientFunds& e) {
        std::fprintf(stderr, "insufficient funds: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

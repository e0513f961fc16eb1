#include "coinami/miner/wallet.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "coinami/crypto/encoding.hpp"
#include "coinami/crypto/sha256.hpp"
#include "coinami/crypto/siv.hpp"
#include "coinami/kv.hpp"

namespace coinami::miner {

namespace {
constexpr uint32_t kKdfIterations = 10000;

crypto::SivKey key_for_passphrase(std::string_view passphrase, std::string_view salt) {
    crypto::Digest256 derived = crypto::pbkdf2_sha256(passphrase, salt, kKdfIterations);
    return crypto::SivKey::derive(crypto::digest_to_string(derived));
}
}  // namespace

std::string encode_keyfile(const crypto::schnorr::KeyPair& key, std::string_view passphrase,
                           uint64_t salt_seed) {
    if (passphrase.empty()) throw KeyFileError("a passphrase is required");
    std::string salt = crypto::sha256_hex("coinami.salt." + std::to_string(salt_seed)).substr(0, 32);
    crypto::SivKey siv = key_for_passphrase(passphrase, salt);
    kv::Doc doc;
    doc.add("format", "coinami.key.v1");
    doc.add("kdf", "pbkdf2-hmac-sha256");
    doc.add_uint("iterations", kKdfIterations);
    doc.add("salt", salt);
    doc.add("pubkey", key.pub_hex());
    doc.add("enc_priv", crypto::base64_encode(crypto::siv_seal(siv, key.priv_hex())));
    return doc.render();
}

crypto::schnorr::KeyPair decode_keyfile(std::string_view text, std::string_view passphrase) {
    kv::Doc doc;
    try {
        doc = kv::Doc::parse(text);
        if (doc.get("format") != "coinami.key.v1" || doc.get("kdf") != "pbkdf2-hmac-sha256")
            throw KeyFileError("unrecognized key file");
    } catch (const kv::DocError& e) {
        throw KeyFileError(std::string("malformed key file: ") + e.what());
    }
    uint64_t iterations = doc.get_uint("iterations");
    if (iterations != kKdfIterations) throw KeyFileError("unsupported kdf parameters");
    crypto::SivKey siv = key_for_passphrase(passphrase, doc.get("salt"));
    auto sealed = crypto::base64_decode(doc.get("enc_priv"));
    if (!sealed) throw KeyFileError("malformed key file");
    auto priv_hex = crypto::siv_open(siv, *sealed);
    if (!priv_hex) throw KeyFileError("wrong passphrase or corrupted key file");
    auto pair = crypto::schnorr::keypair_from_priv_hex(*priv_hex);
    if (pair.pub_hex() != doc.get("pubkey"))
        throw KeyFileError("key file public key does not match the private key");
    return pair;
}

void save_keyfile(const std::string& path, const crypto::schnorr::KeyPair& key,
                  std::string_view passphrase) {
    std::random_device rd;
    uint64_t seed = (static_cast<uint64_t>(rd()) << 32) | rd();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw KeyFileError("cannot write key file: " + path);
    out << encode_keyfile(key, passphrase, seed);
}

crypto::schnorr::KeyPair load_keyfile(const std::string& path, std::string_view passphrase) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw KeyFileError("cannot read key file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_keyfile(buf.str(), passphrase);
}

ledger::Transaction build_send_tx(const ledger::UtxoSet& utxo,
                                  const crypto::schnorr::KeyPair& key,
                                  std::string_view recipient_pubkey, uint64_t amount) {
    if (amount == 0) throw std::invalid_argument("amount must be positive");
    std::string own = key.pub_hex();
    std::vector<std::pair<ledger::Outpoint, ledger::Utxo>> coins;
    for (const auto& [op, out] : utxo)
        if (out.pubkey == own) coins.emplace_back(op, out);
    std::sort(coins.begin(), coins.end(), [](const auto& a, const auto& b) {
        return std::tie(a.second.amount, a.first) < std::tie(b.second.amount, b.first);
    });

    ledger::Transaction tx;
    uint64_t gathered = 0;
    for (const auto& [op, out] : coins) {
        tx.inputs.push_back({op.txid, op.index, ""});
        gathered += out.amount;
        if (gathered >= amount) break;
    }
    if (gathered < amount) throw InsufficientFunds("balance below requested amount");
    tx.outputs.push_back({std::string(recipient_pubkey), amount});
    if (gathered > amount) tx.outputs.push_back({own, gathered - amount});

    std::string signature = crypto::schnorr::sign(key, tx.signing_preimage());
    for (auto& in : tx.inputs) in.signature = signature;
    return tx;
}

}  // namespace coinami::miner

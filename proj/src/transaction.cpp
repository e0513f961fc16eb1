#include "coinami/ledger/transaction.hpp"

#include <set>

#include "coinami/crypto/encoding.hpp"
#include "coinami/crypto/schnorr.hpp"
#include "coinami/crypto/sha256.hpp"
#include "coinami/kv.hpp"

namespace coinami::ledger {

const char* to_string(TxError error) {
    switch (error) {
        case TxError::None: return "None";
        case TxError::UnknownInput: return "UnknownInput";
        case TxError::BadSignature: return "BadSignature";
        case TxError::Overspend: return "Overspend";
        case TxError::DuplicateInput: return "DuplicateInput";
        case TxError::NoInputs: return "NoInputs";
        case TxError::BadOutput: return "BadOutput";
        case TxError::NotTransfer: return "NotTransfer";
    }
    return "?";
}

namespace {

std::string render_tx(const Transaction& tx, bool with_signatures) {
    kv::Doc doc;
    doc.add("format", "coinami.tx.v1");
    doc.add("kind", tx.coinbase ? "coinbase" : "transfer");
    doc.add_uint("height_tag", tx.height_tag);
    doc.add_uint("input_count", tx.inputs.size());
    for (size_t i = 0; i < tx.inputs.size(); ++i) {
        std::string prefix = "input." + std::to_string(i) + ".";
        doc.add(prefix + "prev_tx", tx.inputs[i].prev_tx);
        doc.add_uint(prefix + "index", tx.inputs[i].index);
        doc.add(prefix + "signature", with_signatures ? tx.inputs[i].signature : "");
    }
    doc.add_uint("output_count", tx.outputs.size());
    for (size_t i = 0; i < tx.outputs.size(); ++i) {
        std::string prefix = "output." + std::to_string(i) + ".";
        doc.add(prefix + "pubkey", tx.outputs[i].pubkey);
        doc.add_uint(prefix + "amount", tx.outputs[i].amount);
    }
    return doc.render();
}

}  // namespace

std::string Transaction::render() const {
    return render_tx(*this, true);
}

std::string Transaction::signing_preimage() const {
    return render_tx(*this, false);
}

std::string Transaction::txid() const {
    return crypto::sha256_hex(render());
}

Transaction Transaction::parse(std::string_view text) {
    kv::Doc doc = kv::Doc::parse(text);
    if (doc.get("format") != "coinami.tx.v1") throw kv::DocError("unknown transaction format");
    Transaction tx;
    const std::string& kind = doc.get("kind");
    if (kind == "coinbase") {
        tx.coinbase = true;
    } else if (kind != "transfer") {
        throw kv::DocError("unknown transaction kind");
    }
    tx.height_tag = doc.get_uint("height_tag");
    uint64_t n_in = doc.get_uint("input_count");
    uint64_t n_out = doc.get_uint("output_count");
    if (n_in > 100000 || n_out > 100000) throw kv::DocError("transaction too large");
    for (uint64_t i = 0; i < n_in; ++i) {
        std::string prefix = "input." + std::to_string(i) + ".";
        TxInput in;
        in.prev_tx = doc.get(prefix + "prev_tx");
        in.index = static_cast<uint32_t>(doc.get_uint(prefix + "index"));
        in.signature = doc.get(prefix + "signature");
        tx.inputs.push_back(std::move(in));
    }
    for (uint64_t i = 0; i < n_out; ++i) {
        std::string prefix = "output." + std::to_string(i) + ".";
        TxOutput out;
        out.pubkey = doc.get(prefix + "pubkey");
        out.amount = doc.get_uint(prefix + "amount");
        tx.outputs.push_back(std::move(out));
    }
    return tx;
}

Transaction make_coinbase(std::string_view miner_pubkey, uint64_t height) {
    Transaction tx;
    tx.coinbase = true;
    tx.height_tag = height;
    tx.outputs.push_back({std::string(miner_pubkey), kBlockReward});
    return tx;
}

TxError validate_transaction(const Transaction& tx, const UtxoSet& utxo) {
    if (tx.coinbase) return TxError::NotTransfer;
    if (tx.inputs.empty()) return TxError::NoInputs;
    if (tx.outputs.empty()) return TxError::BadOutput;
    for (const auto& out : tx.outputs) {
        if (out.amount == 0) return TxError::BadOutput;
        if (!crypto::schnorr::is_valid_pub_hex(out.pubkey)) return TxError::BadOutput;
    }
    std::set<Outpoint> spent;
    for (const auto& in : tx.inputs)
        if (!spent.insert({in.prev_tx, in.index}).second) return TxError::DuplicateInput;

    uint64_t total_in = 0;
    uint64_t total_out = 0;
    std::string preimage = tx.signing_preimage();
    for (const auto& in : tx.inputs) {
        auto it = utxo.find({in.prev_tx, in.index});
        if (it == utxo.end()) return TxError::UnknownInput;
        if (!crypto::schnorr::verify(it->second.pubkey, preimage, in.signature))
            return TxError::BadSignature;
        total_in += it->second.amount;
    }
    for (const auto& out : tx.outputs) total_out += out.amount;
    if (total_out > total_in) return TxError::Overspend;
    return TxError::None;
}

std::vector<std::pair<Outpoint, Utxo>> apply_transaction(const Transaction& tx, UtxoSet& utxo) {
    std::vector<std::pair<Outpoint, Utxo>> spent;
    for (const auto& in : tx.inputs) {
        Outpoint op{in.prev_tx, in.index};
        auto it = utxo.find(op);
        if (it != utxo.end()) {
            spent.emplace_back(op, it->second);
            utxo.erase(it);
        }
    }
    std::string id = tx.txid();
    for (uint32_t i = 0; i < tx.outputs.size(); ++i)
        utxo[{id, i}] = {tx.outputs[i].pubkey, tx.outputs[i].amount};
    return spent;
}

uint64_t transaction_fee(const Transaction& tx, const UtxoSet& utxo) {
    if (tx.coinbase) return 0;
    uint64_t total_in = 0;
    uint64_t total_out = 0;
    for (const auto& in : tx.inputs) {
        auto it = utxo.find({in.prev_tx, in.index});
        if (it != utxo.end()) total_in += it->second.amount;
    }
    for (const auto& out : tx.outputs) total_out += out.amount;
    return total_in >= total_out ? total_in - total_out : 0;
}

}  // namespace coinami::ledger

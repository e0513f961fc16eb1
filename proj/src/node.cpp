#include "coinami/miner/node.hpp"

#include <set>

#include "coinami/crypto/encoding.hpp"

namespace coinami::miner {

using ledger::Block;
using ledger::ChainState;
using ledger::Transaction;

Node::Node(std::string root_pubkey, verifier::CertificateStore certs)
    : root_pubkey_(std::move(root_pubkey)),
      certs_(std::move(certs)),
      chain_({root_pubkey_, true}, &certs_) {}

kv::Doc Node::make_block_announce(const Block& block) const {
    kv::Doc doc;
    doc.add("type", "BLOCK_ANNOUNCE");
    doc.add("v", "1");
    doc.add("block_hash", block.hash());
    doc.add("block", crypto::base64_encode(block.render()));
    if (block.token) {
        if (const auto* cert = certs_.find(block.token->authority_cert))
            doc.add("cert", crypto::base64_encode(cert->render()));
    }
    return doc;
}

kv::Doc Node::make_tx_announce(const Transaction& tx) {
    kv::Doc doc;
    doc.add("type", "TX_ANNOUNCE");
    doc.add("v", "1");
    doc.add("tx", crypto::base64_encode(tx.render()));
    return doc;
}

kv::Doc Node::make_chain_request(std::string_view want) {
    kv::Doc doc;
    doc.add("type", "CHAIN_REQUEST");
    doc.add("v", "1");
    doc.add("want", want);
    return doc;
}

void Node::note_certificate_from(const kv::Doc& msg) {
    const std::string* cert_b64 = msg.find("cert");
    if (!cert_b64 || cert_b64->empty()) return;
    auto bytes = crypto::base64_decode(*cert_b64);
    if (!bytes) return;
    try {
        verifier::Certificate cert = verifier::Certificate::parse(*bytes);
        // accept only root-signed certificates; validity is rechecked
        // against block timestamps at apply time
        if (crypto::schnorr::verify(root_pubkey_, cert.preimage(), cert.signature))
            certs_.add(std::move(cert));
    } catch (const kv::DocError&) {
    }
}

void Node::prune_pending() {
    // keep FIFO order, drop anything no longer valid against the tip
    std::deque<Transaction> keep;
    ledger::UtxoSet scratch = chain_.utxo();
    for (auto& tx : pending_) {
        if (ledger::validate_transaction(tx, scratch) == ledger::TxError::None) {
            ledger::apply_transaction(tx, scratch);
            keep.push_back(std::move(tx));
        }
    }
    pending_ = std::move(keep);
}

bool Node::apply_and_drain(const Block& block, std::string_view claimed_hash,
                           std::vector<kv::Doc>& relays) {
    ChainState::AddResult r = chain_.add_block(block, claimed_hash);
    if (!r.ok()) return false;
    relays.push_back(make_block_announce(block));

    // unblocked orphans apply in waves
    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (auto it = orphans_.begin(); it != orphans_.end();) {
            if (chain_.has_block(it->second.prev_hash)) {
                Block orphan = std::move(it->second);
                it = orphans_.erase(it);
                if (chain_.add_block(orphan).ok()) {
                    relays.push_back(make_block_announce(orphan));
                    progressed = true;
                }
            } else {
                ++it;
            }
        }
    }
    prune_pending();
    return true;
}

Node::Outcome Node::handle_block_announce(const kv::Doc& msg) {
    Outcome out;
    note_certificate_from(msg);
    auto bytes = crypto::base64_decode(msg.get("block"));
    if (!bytes) return out;
    Block block;
    try {
        block = Block::parse(*bytes);
    } catch (const kv::DocError&) {
        return out;
    }
    const std::string& claimed = msg.get("block_hash");
    std::lock_guard lock(mu_);
    if (chain_.has_block(block.hash())) return out;  // dedup, no re-relay
    if (!chain_.has_block(block.prev_hash)) {
        // hold the orphan and ask the sender for its ancestry
        orphans_.emplace(block.hash(), std::move(block));
        out.reply = make_chain_request(claimed);
        return out;
    }
    apply_and_drain(block, claimed, out.relay);
    return out;
}

Node::Outcome Node::handle_tx_announce(const kv::Doc& msg) {
    Outcome out;
    auto bytes = crypto::base64_decode(msg.get("tx"));
    if (!bytes) return out;
    Transaction tx;
    try {
        tx = Transaction::parse(*bytes);
    } catch (const kv::DocError&) {
        return out;
    }
    std::lock_guard lock(mu_);
    std::string id = tx.txid();
    for (const auto& p : pending_)
        if (p.txid() == id) return out;  // dedup
    // validate against the tip plus already-pending spends
    ledger::UtxoSet scratch = chain_.utxo();
    for (const auto& p : pending_) ledger::apply_transaction(p, scratch);
    if (ledger::validate_transaction(tx, scratch) != ledger::TxError::None) return out;
    pending_.push_back(tx);
    out.relay.push_back(make_tx_announce(tx));
    return out;
}

Node::Outcome Node::handle_chain_request(const kv::Doc& msg) {
    Outcome out;
    kv::Doc doc;
    doc.add("type", "CHAIN_RESPONSE");
    doc.add("v", "1");
    std::lock_guard lock(mu_);
    const std::string& want = msg.get("want");
    std::vector<const Block*> path;
    if (chain_.has_block(want)) {
        path = chain_.path_from_genesis(want);
    } else {
        path = chain_.path_from_genesis(chain_.tip_hash());  // best effort
    }
    doc.add_uint("block_count", path.size());
    for (size_t i = 0; i < path.size(); ++i)
        doc.add("block." + std::to_string(i), crypto::base64_encode(path[i]->render()));
    auto certs = certs_.all();
    doc.add_uint("cert_count", certs.size());
    for (size_t i = 0; i < certs.size(); ++i)
        doc.add("cert." + std::to_string(i), crypto::base64_encode(certs[i]->render()));
    out.reply = std::move(doc);
    return out;
}

Node::Outcome Node::handle_chain_response(const kv::Doc& msg) {
    Outcome out;
    uint64_t cert_count = msg.has("cert_count") ? msg.get_uint("cert_count") : 0;
    for (uint64_t i = 0; i < cert_count && i < 1000; ++i) {
        kv::Doc one;
        one.add("cert", msg.get("cert." + std::to_string(i)));
        note_certificate_from(one);
    }
    uint64_t block_count = msg.has("block_count") ? msg.get_uint("block_count") : 0;
    std::lock_guard lock(mu_);
    for (uint64_t i = 0; i < block_count; ++i) {
        auto bytes = crypto::base64_decode(msg.get("block." + std::to_string(i)));
        if (!bytes) break;
        Block block;
        try {
            block = Block::parse(*bytes);
        } catch (const kv::DocError&) {
            break;
        }
        if (chain_.has_block(block.hash())) continue;
        if (!chain_.has_block(block.prev_hash)) {
            orphans_.emplace(block.hash(), std::move(block));
            continue;
        }
        apply_and_drain(block, {}, out.relay);
    }
    return out;
}

Node::Outcome Node::handle_gossip(const kv::Doc& msg) {
    try {
        const std::string& type = msg.get("type");
        if (type == "BLOCK_ANNOUNCE") return handle_block_announce(msg);
        if (type == "TX_ANNOUNCE") return handle_tx_announce(msg);
        if (type == "CHAIN_REQUEST") return handle_chain_request(msg);
        if (type == "CHAIN_RESPONSE") return handle_chain_response(msg);
    } catch (const kv::DocError&) {
    }
    return {};
}

std::optional<kv::Doc> Node::submit_local_block(const Block& block) {
    std::lock_guard lock(mu_);
    std::vector<kv::Doc> relays;
    if (!apply_and_drain(block, {}, relays)) return std::nullopt;
    return make_block_announce(block);
}

std::optional<kv::Doc> Node::mine_block(const verifier::SignedToken& token, int64_t now) {
    std::lock_guard lock(mu_);
    Block block = assemble_block(chain_, token,
                                 std::vector<Transaction>(pending_.begin(), pending_.end()),
                                 now);
    std::vector<kv::Doc> relays;
    if (!apply_and_drain(block, {}, relays)) return std::nullopt;
    return make_block_announce(block);
}

std::optional<kv::Doc> Node::submit_local_tx(const Transaction& tx) {
    kv::Doc msg = make_tx_announce(tx);
    Outcome out = handle_tx_announce(msg);
    if (out.relay.empty()) return std::nullopt;
    return std::move(out.relay[0]);
}

std::string Node::tip_hash() const {
    std::lock_guard lock(mu_);
    return chain_.tip_hash();
}

int64_t Node::tip_height() const {
    std::lock_guard lock(mu_);
    return chain_.tip_height();
}

uint64_t Node::balance(std::string_view pubkey) const {
    std::lock_guard lock(mu_);
    return chain_.balance(pubkey);
}

ledger::UtxoSet Node::utxo_snapshot() const {
    std::lock_guard lock(mu_);
    return chain_.utxo();
}

std::vector<Transaction> Node::pending_transactions() const {
    std::lock_guard lock(mu_);
    return {pending_.begin(), pending_.end()};
}

void Node::add_certificate(verifier::Certificate cert) {
    std::lock_guard lock(mu_);
    certs_.add(std::move(cert));
}

std::string Node::serialize_chain() const {
    std::lock_guard lock(mu_);
    return chain_.serialize_store();
}

size_t Node::load_chain(std::string_view bytes) {
    std::lock_guard lock(mu_);
    size_t n = chain_.load_store(bytes);
    prune_pending();
    return n;
}

ledger::Block assemble_block(const ChainState& chain, const verifier::SignedToken& token,
                             const std::vector<Transaction>& pending, int64_t now) {
    Block block;
    block.prev_hash = chain.tip_hash();
    block.timestamp = now;
    block.token = token;
    uint64_t height = static_cast<uint64_t>(chain.tip_height()) + 1;
    block.txs.push_back(ledger::make_coinbase(token.miner_pubkey, height));
    ledger::UtxoSet scratch = chain.utxo();
    ledger::apply_transaction(block.txs[0], scratch);
    for (const auto& tx : pending) {
        if (ledger::validate_transaction(tx, scratch) != ledger::TxError::None) continue;
        ledger::apply_transaction(tx, scratch);
        block.txs.push_back(tx);
    }
    return block;
}

}  // namespace coinami::miner

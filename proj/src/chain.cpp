#include "coinami/ledger/chain.hpp"

#include <algorithm>

#include "coinami/crypto/encoding.hpp"
#include "coinami/crypto/sha256.hpp"
#include "coinami/kv.hpp"
#include "coinami/net/frame.hpp"

namespace coinami::ledger {

const char* to_string(BlockError error) {
    switch (error) {
        case BlockError::None: return "None";
        case BlockError::Duplicate: return "Duplicate";
        case BlockError::BadHash: return "BadHash";
        case BlockError::UnknownParent: return "UnknownParent";
        case BlockError::BadToken: return "BadToken";
        case BlockError::TokenReplay: return "TokenReplay";
        case BlockError::BadCoinbase: return "BadCoinbase";
        case BlockError::BadTransaction: return "BadTransaction";
        case BlockError::BadTimestamp: return "BadTimestamp";
    }
    return "?";
}

std::string Block::render() const {
    kv::Doc doc;
    doc.add("format", "coinami.block.v1");
    doc.add("prev_hash", prev_hash);
    doc.add_int("timestamp", timestamp);
    doc.add("token", token ? crypto::base64_encode(token->render()) : "");
    doc.add_uint("tx_count", txs.size());
    for (size_t i = 0; i < txs.size(); ++i)
        doc.add("tx." + std::to_string(i), crypto::base64_encode(txs[i].render()));
    return doc.render();
}

std::string Block::hash() const {
    return crypto::sha256_hex(render());
}

Block Block::parse(std::string_view text) {
    kv::Doc doc = kv::Doc::parse(text);
    if (doc.get("format") != "coinami.block.v1") throw kv::DocError("unknown block format");
    Block b;
    b.prev_hash = doc.get("prev_hash");
    b.timestamp = doc.get_int("timestamp");
    const std::string& token_b64 = doc.get("token");
    if (!token_b64.empty()) {
        auto bytes = crypto::base64_decode(token_b64);
        if (!bytes) throw kv::DocError("bad token encoding");
        b.token = verifier::SignedToken::parse(*bytes);
    }
    uint64_t n = doc.get_uint("tx_count");
    if (n > 100000) throw kv::DocError("block too large");
    for (uint64_t i = 0; i < n; ++i) {
        auto bytes = crypto::base64_decode(doc.get("tx." + std::to_string(i)));
        if (!bytes) throw kv::DocError("bad transaction encoding");
        b.txs.push_back(Transaction::parse(*bytes));
    }
    return b;
}

const Block& Block::genesis() {
    static const Block g = [] {
        Block b;
        b.prev_hash = std::string(64, '0');
        b.timestamp = 0;
        return b;
    }();
    return g;
}

const std::string& Block::genesis_hash() {
    static const std::string h = genesis().hash();
    return h;
}

ChainState::ChainState(ChainConfig config, const verifier::CertificateStore* certs)
    : config_(std::move(config)), certs_(certs) {
    BlockMeta meta;
    meta.block = Block::genesis();
    meta.height = 0;
    meta.seq = next_seq_++;
    tip_ = Block::genesis_hash();
    blocks_.emplace(tip_, std::move(meta));
}

const ChainState::BlockMeta* ChainState::meta(std::string_view hash) const {
    auto it = blocks_.find(hash);
    return it == blocks_.end() ? nullptr : &it->second;
}

int64_t ChainState::tip_height() const {
    return meta(tip_)->height;
}

bool ChainState::has_block(std::string_view hash) const {
    return blocks_.count(std::string(hash)) > 0;
}

const Block* ChainState::find_block(std::string_view hash) const {
    const BlockMeta* m = meta(hash);
    return m ? &m->block : nullptr;
}

int64_t ChainState::height_of(std::string_view hash) const {
    const BlockMeta* m = meta(hash);
    return m ? m->height : -1;
}

std::vector<const Block*> ChainState::path_from_genesis(std::string_view hash) const {
    std::vector<const Block*> path;
    std::string cur(hash);
    while (cur != Block::genesis_hash()) {
        const BlockMeta* m = meta(cur);
        if (!m) return {};
        path.push_back(&m->block);
        cur = m->parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

void ChainState::apply_block_txs(const Block& block, UtxoSet& utxo) const {
    for (const auto& tx : block.txs) apply_transaction(tx, utxo);
}

UtxoSet ChainState::rebuild_from_genesis(std::string_view tip_hash) const {
    UtxoSet utxo;
    for (const Block* b : path_from_genesis(tip_hash)) apply_block_txs(*b, utxo);
    return utxo;
}

UtxoSet ChainState::utxo_at(std::string_view hash) const {
    if (hash == tip_) return utxo_;
    return rebuild_from_genesis(hash);
}

uint64_t ChainState::branch_fees(std::string_view hash) const {
    uint64_t fees = 0;
    std::string cur(hash);
    while (cur != Block::genesis_hash()) {
        const BlockMeta* m = meta(cur);
        if (!m) return fees;
        fees += m->fees;
        cur = m->parent;
    }
    return fees;
}

uint64_t ChainState::balance(std::string_view pubkey) const {
    uint64_t total = 0;
    for (const auto& [op, out] : utxo_)
        if (out.pubkey == pubkey) total += out.amount;
    return total;
}

ChainState::AddResult ChainState::add_block(const Block& block, std::string_view claimed_hash) {
    AddResult result;
    std::string h = block.hash();
    if (!claimed_hash.empty() && claimed_hash != h) {
        result.error = BlockError::BadHash;
        result.detail = "announced hash does not match block bytes";
        return result;
    }
    if (blocks_.count(h)) {
        result.error = BlockError::Duplicate;
        return result;
    }
    const BlockMeta* parent = meta(block.prev_hash);
    if (!parent) {
        result.error = BlockError::UnknownParent;
        return result;
    }
    int64_t height = parent->height + 1;

    if (!block.token) {
        result.error = BlockError::BadToken;
        result.detail = "missing token";
        return result;
    }
    if (config_.verify_tokens) {
        if (!certs_ ||
            !verifier::verify_token(*block.token, config_.root_pubkey, *certs_,
                                    block.timestamp)) {
            result.error = BlockError::BadToken;
            result.detail = "token does not verify";
            return result;
        }
    }
    // one mint per token: the job id must be new on this branch
    for (std::string cur = block.prev_hash; cur != Block::genesis_hash();) {
        const BlockMeta* m = meta(cur);
        if (m->token_job_id == block.token->job_id) {
            result.error = BlockError::TokenReplay;
            return result;
        }
        cur = m->parent;
    }

    if (block.txs.empty() || !block.txs[0].coinbase) {
        result.error = BlockError::BadCoinbase;
        result.detail = "first transaction must be the coinbase";
        return result;
    }
    const Transaction& coinbase = block.txs[0];
    if (!coinbase.inputs.empty() || coinbase.outputs.size() != 1 ||
        coinbase.outputs[0].amount != kBlockReward ||
        coinbase.outputs[0].pubkey != block.token->miner_pubkey ||
        coinbase.height_tag != static_cast<uint64_t>(height)) {
        result.error = BlockError::BadCoinbase;
        result.detail = "coinbase must pay the token's miner exactly the block reward";
        return result;
    }
    for (size_t i = 1; i < block.txs.size(); ++i) {
        if (block.txs[i].coinbase) {
            result.error = BlockError::BadCoinbase;
            result.detail = "coinbase after the first transaction";
            return result;
        }
    }

    UtxoSet utxo = utxo_at(block.prev_hash);
    BlockMeta entry;
    apply_transaction(coinbase, utxo);
    for (size_t i = 1; i < block.txs.size(); ++i) {
        TxError err = validate_transaction(block.txs[i], utxo);
        if (err != TxError::None) {
            result.error = BlockError::BadTransaction;
            result.tx_error = err;
            result.detail = std::string("tx ") + std::to_string(i) + ": " + to_string(err);
            return result;
        }
        entry.fees += transaction_fee(block.txs[i], utxo);
        auto spent = apply_transaction(block.txs[i], utxo);
        entry.undo_spent.insert(entry.undo_spent.end(), spent.begin(), spent.end());
    }

    entry.block = block;
    entry.height = height;
    entry.seq = next_seq_++;
    entry.parent = block.prev_hash;
    entry.token_job_id = block.token->job_id;
    blocks_.emplace(h, std::move(entry));
    arrival_order_.push_back(h);

    if (block.prev_hash == tip_) {
        tip_ = h;
        utxo_ = std::move(utxo);
        result.reorged = false;
    } else if (height > tip_height()) {
        reorg_to(h);
        result.reorged = true;
    }
    return result;
}

void ChainState::undo_block(const BlockMeta& m, UtxoSet& utxo) const {
    // restore what the block spent, then drop what it created; in that
    // order an output both created and spent inside the block vanishes
    for (const auto& [op, out] : m.undo_spent) utxo[op] = out;
    for (const auto& tx : m.block.txs) {
        std::string id = tx.txid();
        for (uint32_t i = 0; i < tx.outputs.size(); ++i) utxo.erase({id, i});
    }
}

void ChainState::reorg_to(const std::string& new_tip) {
    // walk both tips back to the common ancestor
    std::vector<const BlockMeta*> forward;  // new branch, tip first
    std::string a = tip_;
    std::string b = new_tip;
    const BlockMeta* ma = meta(a);
    const BlockMeta* mb = meta(b);
    while (mb->height > ma->height) {
        forward.push_back(mb);
        b = mb->parent;
        mb = meta(b);
    }
    while (ma->height > mb->height) {
        undo_block(*ma, utxo_);
        a = ma->parent;
        ma = meta(a);
    }
    while (a != b) {
        undo_block(*ma, utxo_);
        a = ma->parent;
        ma = meta(a);
        forward.push_back(mb);
        b = mb->parent;
        mb = meta(b);
    }
    for (auto it = forward.rbegin(); it != forward.rend(); ++it)
        apply_block_txs((*it)->block, utxo_);
    tip_ = new_tip;
}

std::string ChainState::serialize_store() const {
    std::string out;
    for (const auto& h : arrival_order_)
        out += net::encode_frame(meta(h)->block.render());
    return out;
}

size_t ChainState::load_store(std::string_view bytes) {
    net::FrameParser parser;
    parser.feed(bytes);
    size_t accepted = 0;
    while (auto payload = parser.next()) {
        Block b = Block::parse(*payload);
        AddResult r = add_block(b);
        if (r.ok()) ++accepted;
    }
    return accepted;
}

}  // namespace coinami::ledger

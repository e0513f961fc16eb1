#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coinami/ledger/transaction.hpp"
#include "coinami/verifier/token.hpp"

namespace coinami::ledger {

/// A block binds a final signed token to the transaction history; the
/// token takes the nonce's place as the validity proof.
struct Block {
    std::string prev_hash;  // hex; all-zero sentinel above genesis
    int64_t timestamp = 0;
    std::optional<verifier::SignedToken> token;  // absent only in genesis
    std::vector<Transaction> txs;                // coinbase first

    std::string render() const;
    std::string hash() const;
    static Block parse(std::string_view text);

    static const Block& genesis();
    static const std::string& genesis_hash();

    bool operator==(const Block&) const = default;
};

enum class BlockError {
    None,
    Duplicate,
    BadHash,
    UnknownParent,
    BadToken,
    TokenReplay,
    BadCoinbase,
    BadTransaction,
    BadTimestamp,
};

const char* to_string(BlockError error);

struct ChainConfig {
    std::string root_pubkey;
    /// Wallets reading a locally persisted chain may skip token
    /// verification; nodes never do.
    bool verify_tokens = true;
};

/// Block tree plus the active branch's UTXO set. Longest chain by
/// height wins; equal heights keep the first-seen tip. Single-writer:
/// callers serialize mutation externally.
class ChainState {
  public:
    ChainState(ChainConfig config, const verifier::CertificateStore* certs);

    struct AddResult {
        BlockError error = BlockError::None;
        TxError tx_error = TxError::None;
        std::string detail;
        bool reorged = false;

        bool ok() const { return error == BlockError::None; }
        /// Re-announcing a known block is benign.
        bool benign() const { return ok() || error == BlockError::Duplicate; }
    };

    /// Validates against the parent branch, stores, and advances the
    /// tip when this block extends the best chain.
    AddResult add_block(const Block& block, std::string_view claimed_hash = {});

    const std::string& tip_hash() const { return tip_; }
    int64_t tip_height() const;
    const UtxoSet& utxo() const { return utxo_; }
    uint64_t balance(std::string_view pubkey) const;

    bool has_block(std::string_view hash) const;
    const Block* find_block(std::string_view hash) const;
    int64_t height_of(std::string_view hash) const;  // -1 when unknown

    /// Blocks from genesis (exclusive) to `hash` (inclusive), oldest first.
    std::vector<const Block*> path_from_genesis(std::string_view hash) const;

    /// Independent route: fold the branch from scratch. The production
    /// path updates incrementally; tests compare the two.
    UtxoSet rebuild_from_genesis(std::string_view tip_hash) const;

    /// Sum of fees burned along the branch ending at `hash`.
    uint64_t branch_fees(std::string_view hash) const;

    /// Non-genesis blocks in arrival order, framed for an append-only file.
    std::string serialize_store() const;
    /// Re-applies persisted blocks; returns how many were accepted.
    size_t load_store(std::string_view bytes);

    size_t block_count() const { return blocks_.size(); }

  private:
    struct BlockMeta {
        Block block;
        int64_t height = 0;
        uint64_t seq = 0;  // arrival order, breaks height ties
        uint64_t fees = 0;
        std::string parent;
        std::string token_job_id;
        std::vector<std::pair<Outpoint, Utxo>> undo_spent;
    };

    const BlockMeta* meta(std::string_view hash) const;
    UtxoSet utxo_at(std::string_view hash) const;
    void undo_block(const BlockMeta& m, UtxoSet& utxo) const;
    void apply_block_txs(const Block& block, UtxoSet& utxo) const;
    void reorg_to(const std::string& new_tip);

    ChainConfig config_;
    const verifier::CertificateStore* certs_;
    std::map<std::string, BlockMeta, std::less<>> blocks_;
    std::vector<std::string> arrival_order_;
    std::string tip_;
    UtxoSet utxo_;
    uint64_t next_seq_ = 0;
};

}  // namespace coinami::ledger

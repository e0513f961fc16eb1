#pragma once

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "coinami/kv.hpp"
#include "coinami/ledger/chain.hpp"

namespace coinami::miner {

/// Peer-to-peer ledger node: validates announced blocks and
/// transactions, applies them, and relays each new object exactly
/// once. Transport-agnostic; callers deliver incoming documents and
/// ship the returned ones.
class Node {
  public:
    Node(std::string root_pubkey, verifier::CertificateStore certs);

    struct Outcome {
        /// Forward to every peer except the message source.
        std::vector<kv::Doc> relay;
        /// Send back to the message source only.
        std::optional<kv::Doc> reply;
    };

    /// BLOCK_ANNOUNCE | TX_ANNOUNCE | CHAIN_REQUEST | CHAIN_RESPONSE.
    /// Invalid objects are dropped silently and never relayed.
    Outcome handle_gossip(const kv::Doc& msg);

    /// Locally produced objects; returns the announce to broadcast,
    /// or nullopt when the object does not validate.
    std::optional<kv::Doc> submit_local_block(const ledger::Block& block);
    std::optional<kv::Doc> submit_local_tx(const ledger::Transaction& tx);

    /// Assembles a block on the current tip under the node lock,
    /// applies it, and returns its announce document.
    std::optional<kv::Doc> mine_block(const verifier::SignedToken& token, int64_t now);

    kv::Doc make_block_announce(const ledger::Block& block) const;
    static kv::Doc make_tx_announce(const ledger::Transaction& tx);
    static kv::Doc make_chain_request(std::string_view want);

    std::string tip_hash() const;
    int64_t tip_height() const;
    uint64_t balance(std::string_view pubkey) const;
    ledger::UtxoSet utxo_snapshot() const;

    /// FIFO pending transactions still valid against the current tip.
    std::vector<ledger::Transaction> pending_transactions() const;

    void add_certificate(verifier::Certificate cert);

    std::string serialize_chain() const;
    size_t load_chain(std::string_view bytes);

    /// Test access; external synchronization required around mutation.
    ledger::ChainState& chain_for_tests() { return chain_; }

  private:
    Outcome handle_block_announce(const kv::Doc& msg);
    Outcome handle_tx_announce(const kv::Doc& msg);
    Outcome handle_chain_request(const kv::Doc& msg);
    Outcome handle_chain_response(const kv::Doc& msg);

    /// Applies a block; on success also drains any orphans it unblocks
    /// and appends their announces to `relays`.
    bool apply_and_drain(const ledger::Block& block, std::string_view claimed_hash,
                         std::vector<kv::Doc>& relays);
    void prune_pending();
    void note_certificate_from(const kv::Doc& msg);

    mutable std::mutex mu_;
    std::string root_pubkey_;
    verifier::CertificateStore certs_;
    ledger::ChainState chain_;
    std::deque<ledger::Transaction> pending_;
    std::map<std::string, ledger::Block> orphans_;  // by own hash
};

/// Builds the next block on the current tip: coinbase to the token's
/// miner, then every pending transaction that still validates, in
/// order.
ledger::Block assemble_block(const ledger::ChainState& chain,
                             const verifier::SignedToken& token,
                             const std::vector<ledger::Transaction>& pending, int64_t now);

}  // namespace coinami::miner

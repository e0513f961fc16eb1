#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace coinami::ledger {

constexpr uint64_t kBlockReward = 50;

struct TxInput {
    std::string prev_tx;  // txid hex of the spent output's transaction
    uint32_t index = 0;
    std::string signature;  // hex; blank in the signing preimage

    bool operator==(const TxInput&) const = default;
};

struct TxOutput {
    std::string pubkey;  // hex recipient key
    uint64_t amount = 0; // positive integer coin units

    bool operator==(const TxOutput&) const = default;
};

/// Spending destroys the input coins and mints the outputs. The
/// signing preimage is the rendering with every input signature
/// blanked; all inputs sign that one preimage.
struct Transaction {
    bool coinbase = false;
    uint64_t height_tag = 0;  // coinbase only: makes each reward hash unique
    std::vector<TxInput> inputs;
    std::vector<TxOutput> outputs;

    std::string render() const;
    std::string signing_preimage() const;
    /// SHA-256 hex of the full rendering, signatures included.
    std::string txid() const;
    static Transaction parse(std::string_view text);

    bool operator==(const Transaction&) const = default;
};

/// Inputless first transaction of every block, paying the fixed reward.
Transaction make_coinbase(std::string_view miner_pubkey, uint64_t height);

struct Outpoint {
    std::string txid;
    uint32_t index = 0;

    auto operator<=>(const Outpoint&) const = default;
};

struct Utxo {
    std::string pubkey;
    uint64_t amount = 0;

    bool operator==(const Utxo&) const = default;
};

using UtxoSet = std::map<Outpoint, Utxo>;

enum class TxError {
    None,
    UnknownInput,
    BadSignature,
    Overspend,
    DuplicateInput,
    NoInputs,
    BadOutput,
    NotTransfer,
};

const char* to_string(TxError error);

/// Checks a transfer against the unspent set: inputs exist and are
/// distinct, signatures verify against the spent outputs' keys, and
/// input value covers output value (the difference is the fee).
TxError validate_transaction(const Transaction& tx, const UtxoSet& utxo);

/// Applies outputs and removes spent inputs. Returns the entries
/// removed so the caller can undo. Caller validates first.
std::vector<std::pair<Outpoint, Utxo>> apply_transaction(const Transaction& tx, UtxoSet& utxo);

uint64_t transaction_fee(const Transaction& tx, const UtxoSet& utxo);

}  // namespace coinami::ledger

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "coinami/crypto/schnorr.hpp"
#include "coinami/ledger/transaction.hpp"

namespace coinami::miner {

struct KeyFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientFunds : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Key files keep the private scalar encrypted at rest behind a
/// passphrase (PBKDF2 then the same deterministic AEAD used for read
/// names).
std::string encode_keyfile(const crypto::schnorr::KeyPair& key, std::string_view passphrase,
                           uint64_t salt_seed);
crypto::schnorr::KeyPair decode_keyfile(std::string_view text, std::string_view passphrase);

void save_keyfile(const std::string& path, const crypto::schnorr::KeyPair& key,
                  std::string_view passphrase);
crypto::schnorr::KeyPair load_keyfile(const std::string& path, std::string_view passphrase);

/// Builds a signed transfer from this key's unspent outputs, smallest
/// first, with any change returned to the sender. Throws
/// InsufficientFunds when the balance cannot cover the amount.
ledger::Transaction build_send_tx(const ledger::UtxoSet& utxo,
                                  const crypto::schnorr::KeyPair& key,
                                  std::string_view recipient_pubkey, uint64_t amount);

}  // namespace coinami::miner

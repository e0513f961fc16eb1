#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "coinami/crypto/siv.hpp"

namespace coinami::assignment {

/// Pre-computed alignment of one decoy mate, embedded in the decoy's
/// read name so validation needs no database lookup.
struct MateExpectation {
    std::string rname;
    int64_t pos = 0;        // 1-based
    std::string cigar;
    std::string md;

    bool operator==(const MateExpectation&) const = default;
};

struct SampleName {
    std::string sample_id;
    uint64_t serial = 0;
    bool operator==(const SampleName&) const = default;
};

struct DecoyName {
    MateExpectation mate1;
    MateExpectation mate2;
    bool operator==(const DecoyName&) const = default;
};

/// Plaintext read name. Canonical renderings:
///   sample: "JOBID|S<sample_id>|R<serial>"
///   decoy:  "JOBID|DECOY|rname|pos|cigar|md|rname|pos|cigar|md"
/// (both mates' expected alignments; mates share one name). '|' is
/// forbidden inside fields.
struct PlainName {
    using Sample = SampleName;
    using Decoy = DecoyName;

    std::string job_id;
    std::variant<Sample, Decoy> kind;

    bool is_decoy() const { return std::holds_alternative<Decoy>(kind); }
    const Sample& sample() const { return std::get<Sample>(kind); }
    const Decoy& decoy() const { return std::get<Decoy>(kind); }

    /// Throws std::invalid_argument on malformed fields.
    std::string render() const;
    static std::optional<PlainName> parse(std::string_view text);

    static bool valid_field(std::string_view field);

    bool operator==(const PlainName&) const = default;
};

/// Renderings are padded to this many bytes before encryption so a
/// ciphertext's length cannot reveal whether it names a decoy.
constexpr size_t kPaddedNameLen = 192;

/// Deterministic read-name encryption. The same plaintext always maps
/// to the same ciphertext; the job id inside the rendering salts the
/// name across jobs. Both mates of a pair share the plaintext, hence
/// the ciphertext.
class NameCrypter {
  public:
    explicit NameCrypter(crypto::SivKey key) : key_(std::move(key)) {}
    static NameCrypter from_master(std::string_view master_key_material);

    std::string key_id() const { return key_.key_id(); }

    /// base64(siv_seal(padded rendering)); fixed length for all names.
    std::string encrypt(const PlainName& name) const;

    /// nullopt on authentication failure or malformed plaintext.
    std::optional<PlainName> decrypt(std::string_view cipher) const;

  private:
    crypto::SivKey key_;
};

}  // namespace coinami::assignment

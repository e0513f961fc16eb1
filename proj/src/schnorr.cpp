#include "coinami/crypto/schnorr.hpp"

#include <random>
#include <stdexcept>

#include "coinami/crypto/encoding.hpp"
#include "coinami/crypto/sha256.hpp"

namespace coinami::crypto::schnorr {

namespace {

// RFC 5114 section 2.1: 1024-bit MODP group with 160-bit prime order subgroup.
constexpr char kP[] =
    "B10B8F96A080E01DDE92DE5EAE5D54EC52C99FBCFB06A3C69A6A9DCA52D23B61"
    "6073E28675A23D189838EF1E2EE652C013ECB4AEA906112324975C3CD49B83BF"
    "ACCBDD7D90C4BD7098488E9C219A73724EFFD6FAE5644738FAA31A4FF55BCCC0"
    "A151AF5F0DC8B4BD45BF37DF365C1A65E68CFDA76D4DA708DF1FB2BC2E4A4371";
constexpr char kG[] =
    "A4D1CBD5C3FD34126765A442EFB99905F8104DD258AC507FD6406CFF14266D31"
    "266FEA1E5C41564B777E690F5504F213160217B4B01B886A5E91547F9E2749F4"
    "D7FBD7D3B9A92EE1909D0D2263F80A76A6A24C087A091F531DBF0A0169B6A28A"
    "D662A4D18E73AFA32D779D5918D08BC8858F4DCEF97C2A24855E6EEB22B3B2E5";
constexpr char kQ[] = "F518AA8781A8DF278ABA4E7D64B7CB9D49462353";

BigUint parse_const(const char* hex) {
    auto v = BigUint::from_hex(hex);
    if (!v) throw std::logic_error("bad group constant");
    return *v;
}

KeyPair keypair_from_scalar(BigUint x) {
    KeyPair kp;
    kp.priv = std::move(x);
    kp.pub = BigUint::mod_exp(group_g(), kp.priv, group_p());
    return kp;
}

BigUint scalar_from_bytes(std::string_view bytes) {
    return BigUint::from_bytes_be(bytes).mod(group_q());
}

}  // namespace

const BigUint& group_p() {
    static const BigUint p = parse_const(kP);
    return p;
}
const BigUint& group_q() {
    static const BigUint q = parse_const(kQ);
    return q;
}
const BigUint& group_g() {
    static const BigUint g = parse_const(kG);
    return g;
}

KeyPair keygen() {
    std::random_device rd;
    std::string seed_bytes(32, '\0');
    for (size_t i = 0; i < seed_bytes.size(); i += 4) {
        uint32_t v = rd();
        for (size_t j = 0; j < 4 && i + j < seed_bytes.size(); ++j)
            seed_bytes[i + j] = static_cast<char>(v >> (8 * j));
    }
    BigUint x = scalar_from_bytes(seed_bytes);
    while (x.is_zero()) {
        seed_bytes[0] = static_cast<char>(seed_bytes[0] + 1);
        x = scalar_from_bytes(seed_bytes);
    }
    return keypair_from_scalar(std::move(x));
}

KeyPair keygen_seeded(uint64_t seed) {
    std::string material = "coinami.keygen." + std::to_string(seed);
    Digest256 d = sha256(material);
    BigUint x = scalar_from_bytes(digest_to_string(d));
    if (x.is_zero()) x = BigUint::from_u64(1);
    return keypair_from_scalar(std::move(x));
}

KeyPair keypair_from_priv_hex(std::string_view priv_hex) {
    auto x = BigUint::from_hex(priv_hex);
    if (!x || x->is_zero() || *x >= group_q())
        throw std::invalid_argument("invalid private scalar");
    return keypair_from_scalar(std::move(*x));
}

std::string sign(const KeyPair& key, std::string_view message) {
    const BigUint& p = group_p();
    const BigUint& q = group_q();
    std::string h = digest_to_string(sha256(message));
    std::string x_bytes = key.priv.to_bytes_be(kScalarBytes);

    for (int ctr = 0; ctr < 256; ++ctr) {
        std::string nonce_input = h;
        nonce_input.push_back(static_cast<char>(ctr));
        BigUint k = scalar_from_bytes(digest_to_string(hmac_sha256(x_bytes, nonce_input)));
        if (k.is_zero()) continue;
        BigUint r = BigUint::mod_exp(group_g(), k, p);
        std::string challenge_input = r.to_bytes_be(kPubBytes) + h;
        BigUint e = scalar_from_bytes(digest_to_string(sha256(challenge_input)));
        if (e.is_zero()) continue;
        BigUint s = (k + key.priv * e).mod(q);
        return e.to_hex(kScalarBytes) + s.to_hex(kScalarBytes);
    }
    throw std::runtime_error("nonce derivation failed");
}

bool verify(std::string_view pub_hex, std::string_view message, std::string_view signature_hex) {
    if (signature_hex.size() != 4 * kScalarBytes) return false;
    auto y = BigUint::from_hex(pub_hex);
    auto e = BigUint::from_hex(signature_hex.substr(0, 2 * kScalarBytes));
    auto s = BigUint::from_hex(signature_hex.substr(2 * kScalarBytes));
    if (!y || !e || !s) return false;
    const BigUint& p = group_p();
    const BigUint& q = group_q();
    if (y->is_zero() || *y >= p) return false;
    if (e->is_zero() || *e >= q || *s >= q) return false;

    // r' = g^s * y^(q-e) mod p; valid iff H(r' || H(m)) == e.
    BigUint neg_e = q;
    neg_e -= *e;
    BigUint r = BigUint::mod_mul(BigUint::mod_exp(group_g(), *s, p),
                                 BigUint::mod_exp(*y, neg_e, p), p);
    std::string h = digest_to_string(sha256(message));
    std::string challenge_input = r.to_bytes_be(kPubBytes) + h;
    BigUint expect = BigUint::from_bytes_be(digest_to_string(sha256(challenge_input))).mod(q);
    return expect == *e;
}

bool is_valid_pub_hex(std::string_view pub_hex) {
    if (pub_hex.size() != 2 * kPubBytes || !is_hex(pub_hex)) return false;
    auto y = BigUint::from_hex(pub_hex);
    return y && !y->is_zero() && *y < group_p();
}

}  // namespace coinami::crypto::schnorr

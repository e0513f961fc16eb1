#include "coinami/crypto/bigint.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "coinami/crypto/encoding.hpp"

namespace coinami::crypto {

void BigUint::normalize() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint BigUint::from_u64(uint64_t v) {
    BigUint r;
    if (v & 0xffffffffULL) r.limbs_.push_back(static_cast<uint32_t>(v));
    if (v >> 32) {
        if (r.limbs_.empty()) r.limbs_.push_back(0);
        r.limbs_.push_back(static_cast<uint32_t>(v >> 32));
    }
    if (!r.limbs_.empty() && r.limbs_.size() == 1 && r.limbs_[0] == 0) r.limbs_.clear();
    return r;
}

std::optional<BigUint> BigUint::from_hex(std::string_view hex) {
    std::string padded(hex);
    if (padded.size() % 2 != 0) padded.insert(padded.begin(), '0');
    auto bytes = hex_decode(padded);
    if (!bytes) return std::nullopt;
    return from_bytes_be(*bytes);
}

BigUint BigUint::from_bytes_be(std::string_view bytes) {
    BigUint r;
    size_t n = bytes.size();
    r.limbs_.assign((n + 3) / 4, 0);
    for (size_t i = 0; i < n; ++i) {
        size_t pos = n - 1 - i;  // byte significance
        r.limbs_[pos / 4] |= static_cast<uint32_t>(static_cast<unsigned char>(bytes[i]))
                             << (8 * (pos % 4));
    }
    r.normalize();
    return r;
}

std::string BigUint::to_bytes_be(size_t width) const {
    size_t min_bytes = (bit_length() + 7) / 8;
    if (min_bytes == 0) min_bytes = 1;
    size_t n = std::max(width, min_bytes);
    std::string out(n, '\0');
    for (size_t i = 0; i < limbs_.size(); ++i) {
        for (int b = 0; b < 4; ++b) {
            size_t pos = 4 * i + b;  // significance
            if (pos >= n) break;
            out[n - 1 - pos] = static_cast<char>((limbs_[i] >> (8 * b)) & 0xff);
        }
    }
    return out;
}

std::string BigUint::to_hex(size_t width_bytes) const {
    return hex_encode(to_bytes_be(width_bytes));
}

std::string BigUint::to_decimal() const {
    if (is_zero()) return "0";
    BigUint t = *this;
    std::string digits;
    while (!t.is_zero()) {
        uint32_t rem = t.div_small(1000000000u);
        if (t.is_zero()) {
            digits.insert(0, std::to_string(rem));
        } else {
            std::string chunk = std::to_string(rem);
            digits.insert(0, std::string(9 - chunk.size(), '0') + chunk);
        }
    }
    return digits;
}

size_t BigUint::bit_length() const {
    if (limbs_.empty()) return 0;
    return 32 * (limbs_.size() - 1) + (32 - std::countl_zero(limbs_.back()));
}

uint64_t BigUint::to_u64() const {
    if (bit_length() > 64) throw std::overflow_error("BigUint::to_u64");
    uint64_t v = 0;
    if (limbs_.size() > 1) v |= static_cast<uint64_t>(limbs_[1]) << 32;
    if (!limbs_.empty()) v |= limbs_[0];
    return v;
}

int BigUint::cmp(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size())
        return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
}

BigUint& BigUint::operator+=(const BigUint& o) {
    if (limbs_.size() < o.limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
        uint64_t sum = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
        limbs_[i] = static_cast<uint32_t>(sum);
        carry = sum >> 32;
        if (carry == 0 && i >= o.limbs_.size()) break;
    }
    if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    return *this;
}

BigUint& BigUint::operator-=(const BigUint& o) {
    if (cmp(*this, o) < 0) throw std::underflow_error("BigUint subtraction");
    int64_t borrow = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
        int64_t d = static_cast<int64_t>(limbs_[i]) - borrow -
                    (i < o.limbs_.size() ? static_cast<int64_t>(o.limbs_[i]) : 0);
        if (d < 0) {
            d += (1LL << 32);
            borrow = 1;
        } else {
            borrow = 0;
        }
        limbs_[i] = static_cast<uint32_t>(d);
        if (borrow == 0 && i >= o.limbs_.size()) break;
    }
    normalize();
    return *this;
}

BigUint operator*(const BigUint& a, const BigUint& b) {
    BigUint r;
    if (a.is_zero() || b.is_zero()) return r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < b.limbs_.size(); ++j) {
            uint64_t cur = static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                           r.limbs_[i + j] + carry;
            r.limbs_[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        size_t k = i + b.limbs_.size();
        while (carry) {
            uint64_t cur = r.limbs_[k] + carry;
            r.limbs_[k] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
            ++k;
        }
    }
    r.normalize();
    return r;
}

void BigUint::mul_small(uint32_t v) {
    if (v == 0 || is_zero()) {
        limbs_.clear();
        return;
    }
    uint64_t carry = 0;
    for (auto& limb : limbs_) {
        uint64_t cur = static_cast<uint64_t>(limb) * v + carry;
        limb = static_cast<uint32_t>(cur);
        carry = cur >> 32;
    }
    if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
}

uint32_t BigUint::div_small(uint32_t v) {
    if (v == 0) throw std::domain_error("BigUint div_small by zero");
    uint64_t rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
        uint64_t cur = (rem << 32) | limbs_[i];
        limbs_[i] = static_cast<uint32_t>(cur / v);
        rem = cur % v;
    }
    normalize();
    return static_cast<uint32_t>(rem);
}

BigUint BigUint::shifted_left(unsigned bits) const {
    if (is_zero()) return {};
    unsigned limb_shift = bits / 32, bit_shift = bits % 32;
    BigUint r;
    r.limbs_.assign(limbs_.size() + limb_shift + 1, 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
        uint64_t v = static_cast<uint64_t>(limbs_[i]) << bit_shift;
        r.limbs_[i + limb_shift] |= static_cast<uint32_t>(v);
        r.limbs_[i + limb_shift + 1] |= static_cast<uint32_t>(v >> 32);
    }
    r.normalize();
    return r;
}

BigUint BigUint::shifted_right(unsigned bits) const {
    unsigned limb_shift = bits / 32, bit_shift = bits % 32;
    if (limb_shift >= limbs_.size()) return {};
    BigUint r;
    r.limbs_.assign(limbs_.size() - limb_shift, 0);
    for (size_t i = 0; i < r.limbs_.size(); ++i) {
        uint64_t v = limbs_[i + limb_shift] >> bit_shift;
        if (bit_shift && i + limb_shift + 1 < limbs_.size())
            v |= static_cast<uint64_t>(limbs_[i + limb_shift + 1]) << (32 - bit_shift);
        r.limbs_[i] = static_cast<uint32_t>(v);
    }
    r.normalize();
    return r;
}

void BigUint::divmod(const BigUint& num, const BigUint& den, BigUint& quot, BigUint& rem) {
    if (den.is_zero()) throw std::domain_error("BigUint division by zero");
    if (cmp(num, den) < 0) {
        quot = BigUint();
        rem = num;
        return;
    }
    if (den.limbs_.size() == 1) {
        quot = num;
        rem = from_u64(quot.div_small(den.limbs_[0]));
        return;
    }

    // Knuth algorithm D over 32-bit limbs.
    const size_t n = den.limbs_.size();
    const unsigned shift = std::countl_zero(den.limbs_.back());
    BigUint u = num.shifted_left(shift);
    BigUint v = den.shifted_left(shift);
    const size_t m = u.limbs_.size() - n;
    u.limbs_.push_back(0);
    quot.limbs_.assign(m + 1, 0);
    const uint64_t vtop = v.limbs_[n - 1];
    const uint64_t vsec = v.limbs_[n - 2];
    constexpr uint64_t kBase = 1ULL << 32;

    for (size_t j = m + 1; j-- > 0;) {
        uint64_t num2 = (static_cast<uint64_t>(u.limbs_[j + n]) << 32) | u.limbs_[j + n - 1];
        uint64_t qhat = num2 / vtop;
        uint64_t rhat = num2 % vtop;
        while (qhat >= kBase ||
               qhat * vsec > ((rhat << 32) | u.limbs_[j + n - 2])) {
            --qhat;
            rhat += vtop;
            if (rhat >= kBase) break;
        }
        // u[j .. j+n] -= qhat * v
        uint64_t carry = 0;
        int64_t borrow = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t p = qhat * v.limbs_[i] + carry;
            carry = p >> 32;
            int64_t t = static_cast<int64_t>(u.limbs_[j + i]) -
                        static_cast<int64_t>(p & 0xffffffffULL) - borrow;
            if (t < 0) {
                t += static_cast<int64_t>(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            u.limbs_[j + i] = static_cast<uint32_t>(t);
        }
        int64_t top = static_cast<int64_t>(u.limbs_[j + n]) -
                      static_cast<int64_t>(carry) - borrow;
        if (top < 0) {
            // qhat was one too large; add the divisor back.
            u.limbs_[j + n] = static_cast<uint32_t>(top + static_cast<int64_t>(kBase));
            --qhat;
            uint64_t c2 = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t sum = static_cast<uint64_t>(u.limbs_[j + i]) + v.limbs_[i] + c2;
                u.limbs_[j + i] = static_cast<uint32_t>(sum);
                c2 = sum >> 32;
            }
            u.limbs_[j + n] = static_cast<uint32_t>(u.limbs_[j + n] + c2);
        } else {
            u.limbs_[j + n] = static_cast<uint32_t>(top);
        }
        quot.limbs_[j] = static_cast<uint32_t>(qhat);
    }
    quot.normalize();
    u.limbs_.resize(n);
    u.normalize();
    rem = u.shifted_right(shift);
}

BigUint BigUint::mod(const BigUint& m) const {
    BigUint q, r;
    divmod(*this, m, q, r);
    return r;
}

BigUint BigUint::mod_mul(const BigUint& a, const BigUint& b, const BigUint& m) {
    return (a * b).mod(m);
}

BigUint BigUint::mod_exp(const BigUint& base, const BigUint& exp, const BigUint& m) {
    BigUint result = from_u64(1).mod(m);
    BigUint b = base.mod(m);
    size_t bits = exp.bit_length();
    for (size_t i = bits; i-- > 0;) {
        result = mod_mul(result, result, m);
        bool bit = (exp.limbs_[i / 32] >> (i % 32)) & 1u;
        if (bit) result = mod_mul(result, b, m);
    }
    return result;
}

double BigUint::to_double_floor() const {
    size_t bits = bit_length();
    if (bits == 0) return 0.0;
    if (bits <= 53) return static_cast<double>(to_u64());
    BigUint top = shifted_right(static_cast<unsigned>(bits - 53));
    return std::ldexp(static_cast<double>(top.to_u64()), static_cast<int>(bits - 53));
}

BigUint binomial(uint64_t n, uint64_t k) {
    if (k > n) return {};
    if (k > n - k) k = n - k;
    BigUint c = BigUint::from_u64(1);
    for (uint64_t i = 1; i <= k; ++i) {
        // c = c * (n - k + i) / i, exact at every step
        uint64_t factor = n - k + i;
        if (factor >> 32) {
            c = c * BigUint::from_u64(factor);
        } else {
            c.mul_small(static_cast<uint32_t>(factor));
        }
        uint32_t r = c.div_small(static_cast<uint32_t>(i));
        (void)r;  // always divides exactly
    }
    return c;
}

}  // namespace coinami::crypto

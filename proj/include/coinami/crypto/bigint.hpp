#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coinami::crypto {

/// Arbitrary-precision unsigned integer, 32-bit limbs, little-endian.
/// Covers what the protocol needs: exact binomials, and the modular
/// arithmetic behind signing.
class BigUint {
  public:
    BigUint() = default;

    static BigUint from_u64(uint64_t v);
    static std::optional<BigUint> from_hex(std::string_view hex);
    static BigUint from_bytes_be(std::string_view bytes);

    /// Big-endian bytes; zero-padded to `width` when given, else minimal.
    std::string to_bytes_be(size_t width = 0) const;
    std::string to_hex(size_t width_bytes = 0) const;
    std::string to_decimal() const;

    bool is_zero() const { return limbs_.empty(); }
    size_t bit_length() const;
    uint64_t to_u64() const;

    static int cmp(const BigUint& a, const BigUint& b);
    bool operator==(const BigUint& o) const { return cmp(*this, o) == 0; }
    bool operator!=(const BigUint& o) const { return cmp(*this, o) != 0; }
    bool operator<(const BigUint& o) const { return cmp(*this, o) < 0; }
    bool operator<=(const BigUint& o) const { return cmp(*this, o) <= 0; }
    bool operator>(const BigUint& o) const { return cmp(*this, o) > 0; }
    bool operator>=(const BigUint& o) const { return cmp(*this, o) >= 0; }

    BigUint& operator+=(const BigUint& o);
    /// Requires *this >= o.
    BigUint& operator-=(const BigUint& o);
    friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
    friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }
    friend BigUint operator*(const BigUint& a, const BigUint& b);

    /// Knuth algorithm D; throws std::domain_error on zero divisor.
    static void divmod(const BigUint& num, const BigUint& den, BigUint& quot, BigUint& rem);
    BigUint mod(const BigUint& m) const;

    static BigUint mod_mul(const BigUint& a, const BigUint& b, const BigUint& m);
    static BigUint mod_exp(const BigUint& base, const BigUint& exp, const BigUint& m);

    void mul_small(uint32_t v);
    /// Divides in place, returns the remainder.
    uint32_t div_small(uint32_t v);

    BigUint shifted_left(unsigned bits) const;
    BigUint shifted_right(unsigned bits) const;

    /// Largest double <= this value (exact for values below 2^53).
    double to_double_floor() const;

  private:
    void normalize();
    std::vector<uint32_t> limbs_;
};

/// Exact binomial coefficient C(n, k).
BigUint binomial(uint64_t n, uint64_t k);

}  // namespace coinami::crypto

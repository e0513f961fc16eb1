#include "coinami/genomics/cigar.hpp"

namespace coinami::genomics {

namespace {
bool valid_code(char c) {
    return c == 'M' || c == 'I' || c == 'D' || c == 'S';
}
}  // namespace

void Cigar::push(char code, int64_t length) {
    if (length <= 0) return;
    if (!ops.empty() && ops.back().code == code) {
        ops.back().length += length;
    } else {
        ops.push_back({length, code});
    }
}

int64_t Cigar::read_span() const {
    int64_t n = 0;
    for (const auto& op : ops)
        if (op.code == 'M' || op.code == 'I' || op.code == 'S') n += op.length;
    return n;
}

int64_t Cigar::reference_span() const {
    int64_t n = 0;
    for (const auto& op : ops)
        if (op.code == 'M' || op.code == 'D') n += op.length;
    return n;
}

int64_t Cigar::match_span() const {
    int64_t n = 0;
    for (const auto& op : ops)
        if (op.code == 'M') n += op.length;
    return n;
}

std::string Cigar::str() const {
    if (ops.empty()) return "*";
    std::string out;
    for (const auto& op : ops) {
        out += std::to_string(op.length);
        out += op.code;
    }
    return out;
}

Cigar Cigar::from_string(std::string_view text) {
    Cigar c;
    if (text == "*") return c;
    int64_t len = 0;
    bool have_digit = false;
    for (char ch : text) {
        if (ch >= '0' && ch <= '9') {
            len = len * 10 + (ch - '0');
            have_digit = true;
            if (len > (1LL << 40)) throw MalformedRecord(0, "cigar length overflow");
        } else if (valid_code(ch)) {
            if (!have_digit || len == 0) throw MalformedRecord(0, "cigar op without length");
            if (!c.ops.empty() && c.ops.back().code == ch)
                throw MalformedRecord(0, "adjacent cigar ops share a code");
            c.ops.push_back({len, ch});
            len = 0;
            have_digit = false;
        } else {
            throw MalformedRecord(0, std::string("bad cigar char '") + ch + "'");
        }
    }
    if (have_digit) throw MalformedRecord(0, "trailing cigar length");
    if (c.ops.empty()) throw MalformedRecord(0, "empty cigar");
    return c;
}

int64_t reference_span(const Cigar& cigar) {
    return cigar.reference_span();
}

}  // namespace coinami::genomics

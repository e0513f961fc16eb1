#include "coinami/assignment/names.hpp"

#include <charconv>
#include <stdexcept>
#include <vector>

#include "coinami/crypto/encoding.hpp"

namespace coinami::assignment {

bool PlainName::valid_field(std::string_view field) {
    if (field.empty()) return false;
    for (char c : field)
        if (c == '|' || c == '\n' || c == '\0') return false;
    return true;
}

namespace {

void append_expectation(std::string& out, const MateExpectation& e) {
    if (!PlainName::valid_field(e.rname) || !PlainName::valid_field(e.cigar) ||
        !PlainName::valid_field(e.md) || e.pos < 1)
        throw std::invalid_argument("bad decoy expectation field");
    out += '|';
    out += e.rname;
    out += '|';
    out += std::to_string(e.pos);
    out += '|';
    out += e.cigar;
    out += '|';
    out += e.md;
}

std::vector<std::string_view> split_pipes(std::string_view text) {
    std::vector<std::string_view> fields;
    size_t pos = 0;
    while (true) {
        size_t bar = text.find('|', pos);
        if (bar == std::string_view::npos) {
            fields.push_back(text.substr(pos));
            return fields;
        }
        fields.push_back(text.substr(pos, bar - pos));
        pos = bar + 1;
    }
}

std::optional<int64_t> parse_i64(std::string_view s) {
    int64_t v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::optional<MateExpectation> parse_expectation(std::string_view rname, std::string_view pos,
                                                 std::string_view cigar, std::string_view md) {
    auto p = parse_i64(pos);
    if (!p || *p < 1) return std::nullopt;
    MateExpectation e;
    e.rname = std::string(rname);
    e.pos = *p;
    e.cigar = std::string(cigar);
    e.md = std::string(md);
    if (!PlainName::valid_field(e.rname) || !PlainName::valid_field(e.cigar) ||
        !PlainName::valid_field(e.md))
        return std::nullopt;
    return e;
}

}  // namespace

std::string PlainName::render() const {
    if (!valid_field(job_id)) throw std::invalid_argument("bad job id");
    std::string out = job_id;
    if (const auto* s = std::get_if<Sample>(&kind)) {
        if (!valid_field(s->sample_id)) throw std::invalid_argument("bad sample id");
        out += "|S";
        out += s->sample_id;
        out += "|R";
        out += std::to_string(s->serial);
    } else {
        const Decoy& d = std::get<Decoy>(kind);
        out += "|DECOY";
        append_expectation(out, d.mate1);
        append_expectation(out, d.mate2);
    }
    if (out.size() > kPaddedNameLen)
        throw std::invalid_argument("plain name rendering exceeds padded length");
    return out;
}

std::optional<PlainName> PlainName::parse(std::string_view text) {
    auto fields = split_pipes(text);
    if (fields.size() < 3 || !valid_field(fields[0])) return std::nullopt;
    PlainName name;
    name.job_id = std::string(fields[0]);
    if (fields[1] == "DECOY") {
        if (fields.size() != 10) return std::nullopt;
        auto m1 = parse_expectation(fields[2], fields[3], fields[4], fields[5]);
        auto m2 = parse_expectation(fields[6], fields[7], fields[8], fields[9]);
        if (!m1 || !m2) return std::nullopt;
        name.kind = Decoy{std::move(*m1), std::move(*m2)};
        return name;
    }
    if (fields.size() != 3) return std::nullopt;
    if (fields[1].size() < 2 || fields[1][0] != 'S') return std::nullopt;
    if (fields[2].size() < 2 || fields[2][0] != 'R') return std::nullopt;
    Sample s;
    s.sample_id = std::string(fields[1].substr(1));
    auto serial = parse_i64(fields[2].substr(1));
    if (!serial || *serial < 0) return std::nullopt;
    s.serial = static_cast<uint64_t>(*serial);
    name.kind = std::move(s);
    return name;
}

NameCrypter NameCrypter::from_master(std::string_view master_key_material) {
    return NameCrypter(crypto::SivKey::derive(master_key_material));
}

std::string NameCrypter::encrypt(const PlainName& name) const {
    std::string padded = name.render();
    padded.resize(kPaddedNameLen, '\0');
    return crypto::base64_encode(crypto::siv_seal(key_, padded));
}

std::optional<PlainName> NameCrypter::decrypt(std::string_view cipher) const {
    auto sealed = crypto::base64_decode(cipher);
    if (!sealed) return std::nullopt;
    auto padded = crypto::siv_open(key_, *sealed);
    if (!padded) return std::nullopt;
    size_t end = padded->find('\0');
    std::string_view rendering =
        (end == std::string::npos) ? std::string_view(*padded)
                                   : std::string_view(*padded).substr(0, end);
    // padding must be all zero bytes
    for (size_t i = rendering.size(); i < padded->size(); ++i)
        if ((*padded)[i] != '\0') return std::nullopt;
    return PlainName::parse(rendering);
}

}  // namespace coinami::assignment

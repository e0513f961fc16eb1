#include "coinami/genomics/fastq.hpp"

namespace coinami::genomics {

namespace {

bool has_whitespace(std::string_view s) {
    for (char c : s)
        if (c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f') return true;
    return false;
}

/// Splits on '\n'; requires every line to be terminated.
struct LineReader {
    std::string_view text;
    size_t pos = 0;
    size_t line_no = 0;

    bool done() const { return pos >= text.size(); }

    std::string_view next() {
        size_t nl = text.find('\n', pos);
        ++line_no;
        if (nl == std::string_view::npos)
            throw MalformedRecord(line_no, "missing trailing newline");
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        return line;
    }
};

}  // namespace

char complement(char base) {
    switch (base) {
        case 'A': return 'T';
        case 'C': return 'G';
        case 'G': return 'C';
        case 'T': return 'A';
        default: return 'N';
    }
}

std::string reverse_complement(std::string_view seq) {
    std::string out(seq.size(), 'N');
    for (size_t i = 0; i < seq.size(); ++i)
        out[seq.size() - 1 - i] = complement(seq[i]);
    return out;
}

int ReferenceGenome::find(std::string_view name) const {
    for (size_t i = 0; i < sequences.size(); ++i)
        if (sequences[i].name == name) return static_cast<int>(i);
    return -1;
}

int64_t ReferenceGenome::total_length() const {
    int64_t n = 0;
    for (const auto& s : sequences) n += static_cast<int64_t>(s.bases.size());
    return n;
}

std::vector<FastqRecord> parse_fastq(std::string_view text) {
    std::vector<FastqRecord> records;
    LineReader r{text};
    while (!r.done()) {
        FastqRecord rec;
        std::string_view header = r.next();
        size_t header_line = r.line_no;
        if (header.empty() || header[0] != '@')
            throw MalformedRecord(header_line, "expected '@' header");
        rec.name = std::string(header.substr(1));
        if (rec.name.empty() || has_whitespace(rec.name))
            throw MalformedRecord(header_line, "bad read name");

        std::string_view seq = r.next();
        size_t seq_line = r.line_no;
        if (seq.empty()) throw MalformedRecord(seq_line, "empty sequence");
        for (char c : seq)
            if (!is_read_base(c)) throw MalformedRecord(seq_line, "bad base in sequence");
        rec.seq = std::string(seq);

        if (r.done()) throw MalformedRecord(r.line_no + 1, "missing '+' separator");
        std::string_view sep = r.next();
        if (sep.empty() || sep[0] != '+')
            throw MalformedRecord(r.line_no, "expected '+' separator");

        if (r.done()) throw MalformedRecord(r.line_no + 1, "missing quality line");
        std::string_view qual = r.next();
        if (qual.size() != rec.seq.size())
            throw MalformedRecord(r.line_no, "quality length differs from sequence");
        rec.qual = std::string(qual);
        records.push_back(std::move(rec));
    }
    return records;
}

std::string serialize_fastq(const std::vector<FastqRecord>& records) {
    std::string out;
    size_t total = 0;
    for (const auto& r : records) total += r.name.size() + r.seq.size() + r.qual.size() + 6;
    out.reserve(total);
    for (const auto& r : records) {
        out += '@';
        out += r.name;
        out += '\n';
        out += r.seq;
        out += "\n+\n";
        out += r.qual;
        out += '\n';
    }
    return out;
}

ReferenceGenome parse_fasta(std::string_view text) {
    ReferenceGenome genome;
    LineReader r{text};
    ReferenceGenome::Sequence* current = nullptr;
    while (!r.done()) {
        std::string_view line = r.next();
        if (line.empty()) continue;
        if (line[0] == '>') {
            std::string name(line.substr(1));
            if (name.empty() || has_whitespace(name))
                throw MalformedRecord(r.line_no, "bad reference name");
            if (genome.find(name) != -1)
                throw MalformedRecord(r.line_no, "duplicate reference name");
            genome.sequences.push_back({std::move(name), {}});
            current = &genome.sequences.back();
        } else {
            if (!current) throw MalformedRecord(r.line_no, "sequence before '>' header");
            for (char c : line)
                if (!is_reference_base(c))
                    throw MalformedRecord(r.line_no, "reference bases must be A/C/G/T");
            current->bases.append(line);
        }
    }
    for (const auto& s : genome.sequences)
        if (s.bases.empty()) throw MalformedRecord(0, "reference sequence '" + s.name + "' is empty");
    return genome;
}

std::string serialize_fasta(const ReferenceGenome& genome) {
    std::string out;
    for (const auto& s : genome.sequences) {
        out += '>';
        out += s.name;
        out += '\n';
        out += s.bases;
        out += '\n';
    }
    return out;
}

}  // namespace coinami::genomics

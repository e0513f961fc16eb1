#include "coinami/genomics/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <tuple>

#include "coinami/genomics/md.hpp"

namespace coinami::genomics {

int AlignmentFile::header_index(std::string_view rname) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i].name == rname) return static_cast<int>(i);
    return -1;
}

AlignmentFile::HeaderLine header_for(const ReferenceGenome::Sequence& seq) {
    return {seq.name, static_cast<int64_t>(seq.bases.size())};
}

std::vector<AlignmentFile::HeaderLine> header_for(const ReferenceGenome& genome) {
    std::vector<AlignmentFile::HeaderLine> h;
    h.reserve(genome.sequences.size());
    for (const auto& s : genome.sequences) h.push_back(header_for(s));
    return h;
}

namespace {

// Unmapped records sort after every mapped record; within each class
// the remaining fields give a total order so output bytes are stable.
auto sort_key(const AlignmentFile& file, const AlignmentRecord& r) {
    int ref_idx = r.unmapped() ? std::numeric_limits<int>::max() : file.header_index(r.rname);
    return std::make_tuple(ref_idx, r.pos, std::cref(r.qname), r.flags,
                           r.cigar.str(), std::cref(r.seq));
}

}  // namespace

bool record_less(const AlignmentFile& file, const AlignmentRecord& a, const AlignmentRecord& b) {
    return sort_key(file, a) < sort_key(file, b);
}

void sort_records(AlignmentFile& file) {
    std::stable_sort(file.records.begin(), file.records.end(),
                     [&file](const AlignmentRecord& a, const AlignmentRecord& b) {
                         return record_less(file, a, b);
                     });
}

size_t first_unsorted_record(const AlignmentFile& file) {
    for (size_t i = 1; i < file.records.size(); ++i) {
        if (record_less(file, file.records[i], file.records[i - 1])) return i + 1;
    }
    return 0;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t pos = 0;
    while (true) {
        size_t tab = line.find('\t', pos);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

int64_t parse_int_field(std::string_view s, size_t line_no, const char* what) {
    int64_t v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw MalformedRecord(line_no, std::string("bad ") + what);
    return v;
}

void validate_record(const AlignmentRecord& r, const AlignmentFile& file, size_t line_no) {
    if (r.qname.empty()) throw MalformedRecord(line_no, "empty qname");
    if (r.flags & ~kFlagMask) throw MalformedRecord(line_no, "unknown flag bits");
    if (r.mapq < 0 || r.mapq > 60) throw MalformedRecord(line_no, "mapq out of range");
    for (char c : r.seq)
        if (!is_read_base(c)) throw MalformedRecord(line_no, "bad base in seq");
    if (r.unmapped()) {
        if (r.rname != "*" || r.pos != 0 || !r.cigar.empty() || r.md != "*")
            throw MalformedRecord(line_no, "unmapped record must use sentinel fields");
        return;
    }
    if (file.header_index(r.rname) < 0)
        throw MalformedRecord(line_no, "rname not in header: " + r.rname);
    if (r.pos < 1) throw MalformedRecord(line_no, "pos must be 1-based");
    if (r.cigar.empty()) throw MalformedRecord(line_no, "mapped record without cigar");
    if (r.cigar.read_span() != static_cast<int64_t>(r.seq.size()))
        throw MalformedRecord(line_no, "cigar read span differs from seq length");
    // MD must replay cleanly against the cigar and seq.
    try {
        std::string window = reconstruct_reference_window(r.cigar, r.md, r.seq);
        (void)window;
    } catch (const LengthMismatch& e) {
        throw MalformedRecord(line_no, std::string("md/cigar inconsistent: ") + e.what());
    }
}

}  // namespace

AlignmentFile parse_alignment_file(std::string_view text) {
    AlignmentFile file;
    size_t pos = 0;
    size_t line_no = 0;
    bool in_header = true;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        ++line_no;
        if (nl == std::string_view::npos)
            throw MalformedRecord(line_no, "missing trailing newline");
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) throw MalformedRecord(line_no, "empty line");
        auto fields = split_tabs(line);
        if (line[0] == '@') {
            if (!in_header) throw MalformedRecord(line_no, "header after records");
            if (fields.size() != 3 || fields[0] != "@SQ")
                throw MalformedRecord(line_no, "expected '@SQ name length'");
            AlignmentFile::HeaderLine h;
            h.name = std::string(fields[1]);
            h.length = parse_int_field(fields[2], line_no, "reference length");
            if (h.name.empty() || h.length <= 0 || file.header_index(h.name) >= 0)
                throw MalformedRecord(line_no, "bad header line");
            file.header.push_back(std::move(h));
            continue;
        }
        in_header = false;
        if (fields.size() != 8)
            throw MalformedRecord(line_no, "expected 8 tab-separated fields");
        AlignmentRecord r;
        r.qname = std::string(fields[0]);
        r.flags = static_cast<uint32_t>(parse_int_field(fields[1], line_no, "flags"));
        r.rname = std::string(fields[2]);
        r.pos = parse_int_field(fields[3], line_no, "pos");
        r.mapq = static_cast<int>(parse_int_field(fields[4], line_no, "mapq"));
        try {
            r.cigar = Cigar::from_string(fields[5]);
        } catch (const MalformedRecord& e) {
            throw MalformedRecord(line_no, e.what());
        }
        r.seq = std::string(fields[6]);
        r.md = std::string(fields[7]);
        validate_record(r, file, line_no);
        file.records.push_back(std::move(r));
    }
    if (size_t idx = first_unsorted_record(file); idx != 0) throw NotSorted(idx);
    return file;
}

std::string serialize_alignment_file(const AlignmentFile& file) {
    if (size_t idx = first_unsorted_record(file); idx != 0) throw NotSorted(idx);
    std::string out;
    for (const auto& h : file.header) {
        out += "@SQ\t";
        out += h.name;
        out += '\t';
        out += std::to_string(h.length);
        out += '\n';
    }
    for (const auto& r : file.records) {
        out += r.qname;
        out += '\t';
        out += std::to_string(r.flags);
        out += '\t';
        out += r.rname;
        out += '\t';
        out += std::to_string(r.pos);
        out += '\t';
        out += std::to_string(r.mapq);
        out += '\t';
        out += r.cigar.str();
        out += '\t';
        out += r.seq;
        out += '\t';
        out += r.md;
        out += '\n';
    }
    return out;
}

std::string build_offset_index(const AlignmentFile& file) {
    std::string out;
    size_t offset = 0;
    for (const auto& h : file.header)
        offset += 4 + h.name.size() + 1 + std::to_string(h.length).size() + 1;
    size_t rec = 0;
    for (const auto& h : file.header) {
        size_t first = offset;
        bool any = false;
        while (rec < file.records.size() && !file.records[rec].unmapped() &&
               file.records[rec].rname == h.name) {
            const auto& r = file.records[rec];
            offset += r.qname.size() + std::to_string(r.flags).size() + r.rname.size() +
                      std::to_string(r.pos).size() + std::to_string(r.mapq).size() +
                      r.cigar.str().size() + r.seq.size() + r.md.size() + 8;
            any = true;
            ++rec;
        }
        out += h.name;
        out += '\t';
        out += any ? std::to_string(first) : "-1";
        out += '\n';
    }
    return out;
}

}  // namespace coinami::genomics

#include "coinami/genomics/md.hpp"

#include <vector>

namespace coinami::genomics {

namespace {
constexpr std::string_view kMdPrefix = "MD:Z:";

struct MdItem {
    char mismatch_base = 0;    // set for a mismatch item
    std::string deleted_bases; // set for a deletion item
    bool is_deletion() const { return !deleted_bases.empty(); }
};

// Body grammar is a strict alternation: number (item number)*.
struct MdTokens {
    std::vector<int64_t> runs;
    std::vector<MdItem> items;
};

MdTokens tokenize_md(std::string_view body) {
    MdTokens t;
    size_t pos = 0;
    auto read_number = [&]() -> int64_t {
        if (pos >= body.size() || body[pos] < '0' || body[pos] > '9')
            throw LengthMismatch("MD grammar: expected match count");
        int64_t n = 0;
        while (pos < body.size() && body[pos] >= '0' && body[pos] <= '9') {
            n = n * 10 + (body[pos] - '0');
            ++pos;
        }
        return n;
    };
    t.runs.push_back(read_number());
    while (pos < body.size()) {
        MdItem item;
        if (body[pos] == '^') {
            ++pos;
            while (pos < body.size() && is_reference_base(body[pos]))
                item.deleted_bases += body[pos++];
            if (item.deleted_bases.empty())
                throw LengthMismatch("MD grammar: empty deletion");
        } else if (is_reference_base(body[pos])) {
            item.mismatch_base = body[pos++];
        } else {
            throw LengthMismatch("MD grammar: unexpected character");
        }
        t.items.push_back(std::move(item));
        t.runs.push_back(read_number());
    }
    return t;
}

}  // namespace

std::string compute_md(std::string_view ref_window, std::string_view read_seq,
                       const Cigar& cigar) {
    std::string body;
    size_t ref_pos = 0;
    size_t read_pos = 0;
    int64_t match_run = 0;

    auto flush_run = [&] {
        body += std::to_string(match_run);
        match_run = 0;
    };

    for (const auto& op : cigar.ops) {
        switch (op.code) {
            case 'M': {
                if (ref_pos + op.length > ref_window.size() ||
                    read_pos + op.length > read_seq.size())
                    throw LengthMismatch("cigar M overruns window or read");
                for (int64_t i = 0; i < op.length; ++i) {
                    char r = ref_window[ref_pos++];
                    char q = read_seq[read_pos++];
                    if (q == r) {
                        ++match_run;
                    } else {
                        // mismatch: emit pending run, then the reference base
                        flush_run();
                        body += r;
                    }
                }
                break;
            }
            case 'D': {
                if (ref_pos + op.length > ref_window.size())
                    throw LengthMismatch("cigar D overruns window");
                flush_run();
                body += '^';
                body.append(ref_window.substr(ref_pos, op.length));
                ref_pos += op.length;
                break;
            }
            case 'I':
            case 'S': {
                if (read_pos + op.length > read_seq.size())
                    throw LengthMismatch("cigar I/S overruns read");
                read_pos += op.length;
                break;
            }
            default:
                throw LengthMismatch("unsupported cigar op");
        }
    }
    if (ref_pos != ref_window.size())
        throw LengthMismatch("cigar consumes less reference than given");
    if (read_pos != read_seq.size())
        throw LengthMismatch("cigar consumes less read than given");
    flush_run();  // grammar always ends with a (possibly zero) match count
    return std::string(kMdPrefix) + body;
}

std::string reconstruct_reference_window(const Cigar& cigar, std::string_view md,
                                         std::string_view read_seq) {
    if (md.substr(0, kMdPrefix.size()) != kMdPrefix)
        throw LengthMismatch("MD string lacks MD:Z: prefix");
    MdTokens tokens = tokenize_md(md.substr(kMdPrefix.size()));

    std::string window;
    size_t read_pos = 0;
    size_t item_idx = 0;
    int64_t run_remaining = tokens.runs[0];

    auto next_item = [&]() -> const MdItem& {
        if (run_remaining != 0 || item_idx >= tokens.items.size())
            throw LengthMismatch("MD items disagree with cigar");
        const MdItem& item = tokens.items[item_idx];
        run_remaining = tokens.runs[item_idx + 1];
        ++item_idx;
        return item;
    };

    for (const auto& op : cigar.ops) {
        switch (op.code) {
            case 'I':
            case 'S':
                read_pos += op.length;
                break;
            case 'M': {
                for (int64_t i = 0; i < op.length; ++i) {
                    if (read_pos >= read_seq.size())
                        throw LengthMismatch("cigar M overruns read");
                    char q = read_seq[read_pos++];
                    if (run_remaining > 0) {
                        if (!is_reference_base(q))
                            throw LengthMismatch("match column holds a non-reference base");
                        window += q;
                        --run_remaining;
                    } else {
                        const MdItem& item = next_item();
                        if (item.is_deletion())
                            throw LengthMismatch("deletion item inside cigar M");
                        if (q == item.mismatch_base)
                            throw LengthMismatch("MD mismatch column equals read base");
                        window += item.mismatch_base;
                    }
                }
                break;
            }
            case 'D': {
                const MdItem& item = next_item();
                if (!item.is_deletion())
                    throw LengthMismatch("mismatch item at cigar D");
                if (static_cast<int64_t>(item.deleted_bases.size()) != op.length)
                    throw LengthMismatch("deletion length disagrees with cigar");
                window += item.deleted_bases;
                break;
            }
            default:
                throw LengthMismatch("unsupported cigar op");
        }
    }
    if (run_remaining != 0 || item_idx != tokens.items.size())
        throw LengthMismatch("MD string has unconsumed tokens");
    if (read_pos != read_seq.size())
        throw LengthMismatch("cigar consumes less read than given");
    return window;
}

bool md_consistent(const Cigar& cigar, std::string_view md, std::string_view read_seq,
                   std::string_view ref_window) {
    try {
        return reconstruct_reference_window(cigar, md, read_seq) == ref_window;
    } catch (const LengthMismatch&) {
        return false;
    }
}

}  // namespace coinami::genomics

#include "coinami/mapper/mapper.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include "coinami/genomics/fastq.hpp"
#include "coinami/genomics/md.hpp"

namespace coinami::mapper {

using genomics::AlignmentFile;
using genomics::AlignmentRecord;
using genomics::Cigar;
using genomics::FastqRecord;
using genomics::ReferenceGenome;

void MappingParams::validate() const {
    if (k < 4 || k > 31) throw std::invalid_argument("k must be in [4, 31]");
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (max_edits < 0) throw std::invalid_argument("max_edits must be >= 0");
    if (band < 1) throw std::invalid_argument("band must be >= 1");
}

std::optional<uint64_t> KmerIndex::pack(std::string_view window) {
    uint64_t v = 0;
    for (char c : window) {
        int code;
        switch (c) {
            case 'A': code = 0; break;
            case 'C': code = 1; break;
            case 'G': code = 2; break;
            case 'T': code = 3; break;
            default: return std::nullopt;
        }
        v = (v << 2) | static_cast<uint64_t>(code);
    }
    return v;
}

KmerIndex KmerIndex::build(const ReferenceGenome& ref, int k) {
    // the index itself works for any packable k; protocol bounds on k
    // live in MappingParams
    if (k < 1 || k > 31) throw std::invalid_argument("k must be in [1, 31]");
    KmerIndex index;
    index.k_ = k;
    for (size_t ri = 0; ri < ref.sequences.size(); ++ri) {
        const std::string& bases = ref.sequences[ri].bases;
        if (static_cast<int64_t>(bases.size()) < k)
            throw ReferenceTooShort("reference sequence '" + ref.sequences[ri].name +
                                    "' shorter than k");
        // Rolling 2-bit pack; reference bases are always A/C/G/T.
        const uint64_t mask = (k == 32) ? ~0ULL : ((1ULL << (2 * k)) - 1);
        uint64_t v = 0;
        for (size_t i = 0; i < bases.size(); ++i) {
            int code = 0;
            switch (bases[i]) {
                case 'A': code = 0; break;
                case 'C': code = 1; break;
                case 'G': code = 2; break;
                case 'T': code = 3; break;
            }
            v = ((v << 2) | static_cast<uint64_t>(code)) & mask;
            if (i + 1 >= static_cast<size_t>(k)) {
                index.table_[v].push_back(
                    {static_cast<int32_t>(ri), static_cast<int32_t>(i + 1 - k)});
            }
        }
    }
    return index;
}

const std::vector<KmerIndex::Hit>* KmerIndex::lookup(uint64_t packed_kmer) const {
    auto it = table_.find(packed_kmer);
    return it == table_.end() ? nullptr : &it->second;
}

std::vector<int> seed_offsets(int read_len, int k, int stride) {
    std::vector<int> offsets;
    if (read_len < k) return offsets;
    for (int o = 0; o + k <= read_len; o += stride) offsets.push_back(o);
    if (offsets.back() != read_len - k) offsets.push_back(read_len - k);
    return offsets;
}

namespace {

constexpr uint16_t kInf = 0xffff;

struct LocalAln {
    int64_t pos0;  // 0-based reference start
    Cigar cigar;
    int edits;
};

/// Banded fit alignment of the whole read near `anchor` (the expected
/// 0-based start of the read on this reference sequence). Read bases
/// falling outside the reference at the anchor are soft-clipped and do
/// not count as edits. Leading and trailing reference bases inside the
/// window are free. Returns nullopt when no alignment within
/// max_edits exists in the band.
std::optional<LocalAln> align_at(const std::string& ref_bases, int64_t anchor,
                                 std::string_view seq, const MappingParams& p) {
    const int64_t reflen = static_cast<int64_t>(ref_bases.size());
    const int64_t m = static_cast<int64_t>(seq.size());
    const int64_t lclip = std::max<int64_t>(0, -anchor);
    const int64_t rclip = std::max<int64_t>(0, anchor + m - reflen);
    const int64_t core_len = m - lclip - rclip;
    if (core_len < p.k) return std::nullopt;
    std::string_view core = seq.substr(lclip, core_len);

    const int64_t a = anchor + lclip;  // expected core start, in [0, reflen)
    const int64_t win_lo = std::max<int64_t>(0, a - p.band);
    const int64_t win_hi = std::min<int64_t>(reflen, a + core_len + p.band);
    const int64_t window_len = win_hi - win_lo;
    if (window_len <= 0) return std::nullopt;
    const int64_t delta = a - win_lo;

    const int band = p.band;
    const int width = 2 * band + 1;
    // Cell (i, d) is "i read bases consumed, j = i + delta + d - band
    // window bases consumed". Row 0 is free: the fit may start at any
    // window offset inside the band.
    thread_local std::vector<uint16_t> dp;
    dp.assign(static_cast<size_t>(core_len + 1) * width, kInf);
    auto cell_j = [&](int64_t i, int d) { return i + delta + d - band; };

    for (int d = 0; d < width; ++d) {
        int64_t j = cell_j(0, d);
        if (j >= 0 && j <= window_len) dp[d] = 0;
    }
    for (int64_t i = 1; i <= core_len; ++i) {
        uint16_t row_min = kInf;
        const uint16_t* prev = dp.data() + (i - 1) * width;
        uint16_t* cur = dp.data() + i * width;
        for (int d = 0; d < width; ++d) {
            int64_t j = cell_j(i, d);
            if (j < 0 || j > window_len) continue;
            uint16_t best = kInf;
            if (j >= 1 && prev[d] != kInf) {
                uint16_t cost = (core[i - 1] == ref_bases[win_lo + j - 1]) ? 0 : 1;
                best = static_cast<uint16_t>(prev[d] + cost);
            }
            if (d + 1 < width && prev[d + 1] != kInf) {
                uint16_t via_ins = static_cast<uint16_t>(prev[d + 1] + 1);
                if (via_ins < best) best = via_ins;
            }
            if (d >= 1 && cur[d - 1] != kInf && j >= 1) {
                uint16_t via_del = static_cast<uint16_t>(cur[d - 1] + 1);
                if (via_del < best) best = via_del;
            }
            cur[d] = best;
            if (best < row_min) row_min = best;
        }
        if (row_min > p.max_edits) return std::nullopt;
    }

    // Pick the cheapest end cell; ties go to the smallest j.
    const uint16_t* last = dp.data() + core_len * width;
    int best_d = -1;
    uint16_t best_cost = kInf;
    for (int d = 0; d < width; ++d) {
        int64_t j = cell_j(core_len, d);
        if (j < 0 || j > window_len) continue;
        if (last[d] < best_cost) {
            best_cost = last[d];
            best_d = d;
        }
    }
    if (best_d < 0 || best_cost > p.max_edits) return std::nullopt;

    // Traceback, preferring M, then I, then D.
    std::vector<std::pair<char, int64_t>> rev_ops;
    int64_t i = core_len;
    int d = best_d;
    while (i > 0) {
        int64_t j = cell_j(i, d);
        uint16_t cur = dp[i * width + d];
        if (j >= 1 && dp[(i - 1) * width + d] != kInf) {
            uint16_t cost = (core[i - 1] == ref_bases[win_lo + j - 1]) ? 0 : 1;
            if (static_cast<uint16_t>(dp[(i - 1) * width + d] + cost) == cur) {
                rev_ops.emplace_back('M', 1);
                --i;
                continue;
            }
        }
        if (d + 1 < width && dp[(i - 1) * width + d + 1] != kInf &&
            static_cast<uint16_t>(dp[(i - 1) * width + d + 1] + 1) == cur) {
            rev_ops.emplace_back('I', 1);
            --i;
            ++d;
            continue;
        }
        if (d >= 1 && dp[i * width + d - 1] != kInf &&
            static_cast<uint16_t>(dp[i * width + d - 1] + 1) == cur) {
            rev_ops.emplace_back('D', 1);
            --d;
            continue;
        }
        return std::nullopt;  // unreachable for a consistent table
    }
    const int64_t start_j = cell_j(0, d);

    LocalAln out;
    out.pos0 = win_lo + start_j;
    out.edits = best_cost;
    out.cigar.push('S', lclip);
    for (auto it = rev_ops.rbegin(); it != rev_ops.rend(); ++it)
        out.cigar.push(it->first, it->second);
    out.cigar.push('S', rclip);
    return out;
}

struct Candidate {
    int ref_idx;
    int64_t anchor;
    bool reverse;

    auto key() const { return std::tuple(ref_idx, anchor, reverse); }
};

struct Scored {
    int ref_idx;
    int64_t pos0;
    bool reverse;
    LocalAln aln;
};

/// Evaluates candidates and applies the global tie-break: minimal
/// edits, then smallest (reference index, position), forward strand
/// preferred. `unique` counts distinct minimal-edit locations.
MappingResult pick_best(const ReferenceGenome& ref, std::vector<Scored>&& scored) {
    MappingResult result;
    if (scored.empty()) return result;

    // Keep the cheapest alignment per (ref, pos, strand) location.
    std::map<std::tuple<int, int64_t, bool>, size_t> by_location;
    for (size_t idx = 0; idx < scored.size(); ++idx) {
        auto key = std::tuple(scored[idx].ref_idx, scored[idx].pos0, scored[idx].reverse);
        auto [it, inserted] = by_location.try_emplace(key, idx);
        if (!inserted && scored[idx].aln.edits < scored[it->second].aln.edits)
            it->second = idx;
    }

    const Scored* best = nullptr;
    for (const auto& [key, idx] : by_location) {
        const Scored& s = scored[idx];
        if (!best) {
            best = &s;
            continue;
        }
        auto lhs = std::tuple(s.aln.edits, s.ref_idx, s.pos0, s.reverse);
        auto rhs = std::tuple(best->aln.edits, best->ref_idx, best->pos0, best->reverse);
        if (lhs < rhs) best = &s;
    }
    int min_edits = best->aln.edits;
    int at_min = 0;
    for (const auto& [key, idx] : by_location)
        if (scored[idx].aln.edits == min_edits) ++at_min;

    Alignment aln;
    aln.rname = ref.sequences[best->ref_idx].name;
    aln.pos = best->pos0 + 1;
    aln.cigar = best->aln.cigar;
    aln.edits = best->aln.edits;
    aln.reverse = best->reverse;
    result.best = std::move(aln);
    result.unique = (at_min == 1);
    return result;
}

void fill_md(Alignment& aln, const ReferenceGenome& ref, std::string_view oriented_seq) {
    int ref_idx = ref.find(aln.rname);
    const std::string& bases = ref.sequences[ref_idx].bases;
    int64_t span = aln.cigar.reference_span();
    std::string_view window(bases.data() + (aln.pos - 1), span);
    aln.md = genomics::compute_md(window, oriented_seq, aln.cigar);
}

}  // namespace

MappingResult map_read(const FastqRecord& read, const KmerIndex& index,
                       const ReferenceGenome& ref, const MappingParams& params) {
    params.validate();
    const int m = static_cast<int>(read.seq.size());
    std::vector<int> offsets = seed_offsets(m, params.k, params.stride);

    std::set<std::tuple<int, int64_t, bool>> seen;
    std::vector<Scored> scored;
    std::string oriented[2] = {read.seq, genomics::reverse_complement(read.seq)};

    for (int strand = 0; strand < 2; ++strand) {
        const std::string& seq = oriented[strand];
        for (int o : offsets) {
            auto packed = KmerIndex::pack(std::string_view(seq).substr(o, params.k));
            if (!packed) continue;  // seed window holds an N
            const auto* hits = index.lookup(*packed);
            if (!hits) continue;
            for (const auto& hit : *hits) {
                Candidate c{hit.ref_idx, static_cast<int64_t>(hit.offset) - o, strand == 1};
                if (!seen.insert(c.key()).second) continue;
                auto aln = align_at(ref.sequences[c.ref_idx].bases, c.anchor, seq, params);
                if (aln) scored.push_back({c.ref_idx, aln->pos0, c.reverse, std::move(*aln)});
            }
        }
    }
    MappingResult result = pick_best(ref, std::move(scored));
    if (result.best) fill_md(*result.best, ref, oriented[result.best->reverse ? 1 : 0]);
    return result;
}

MappingResult brute_force_map(const FastqRecord& read, const ReferenceGenome& ref,
                              const MappingParams& params) {
    params.validate();
    const int64_t m = static_cast<int64_t>(read.seq.size());
    std::vector<Scored> scored;
    std::string oriented[2] = {read.seq, genomics::reverse_complement(read.seq)};

    for (int strand = 0; strand < 2; ++strand) {
        const std::string& seq = oriented[strand];
        for (size_t ri = 0; ri < ref.sequences.size(); ++ri) {
            const std::string& bases = ref.sequences[ri].bases;
            const int64_t reflen = static_cast<int64_t>(bases.size());
            for (int64_t anchor = -(m - params.k); anchor <= reflen - params.k; ++anchor) {
                auto aln = align_at(bases, anchor, seq, params);
                if (aln)
                    scored.push_back({static_cast<int>(ri), aln->pos0, strand == 1,
                                      std::move(*aln)});
            }
        }
    }
    MappingResult result = pick_best(ref, std::move(scored));
    if (result.best) fill_md(*result.best, ref, oriented[result.best->reverse ? 1 : 0]);
    return result;
}

namespace {

AlignmentRecord record_for(const FastqRecord& read, const MappingResult& mapping,
                           uint32_t mate_flag) {
    AlignmentRecord rec;
    rec.qname = read.name;
    rec.flags = genomics::kFlagPaired | mate_flag;
    if (!mapping.best) {
        rec.flags |= genomics::kFlagUnmapped;
        rec.seq = read.seq;
        return rec;
    }
    const Alignment& aln = *mapping.best;
    rec.rname = aln.rname;
    rec.pos = aln.pos;
    rec.mapq = mapping.mapq();
    rec.cigar = aln.cigar;
    rec.seq = aln.reverse ? genomics::reverse_complement(read.seq) : read.seq;
    rec.md = aln.md;
    return rec;
}

}  // namespace

AlignmentFile map_assignment(const std::vector<FastqRecord>& mate1,
                             const std::vector<FastqRecord>& mate2,
                             const ReferenceGenome& ref, const MappingParams& params,
                             int threads) {
    params.validate();
    KmerIndex index = KmerIndex::build(ref, params.k);

    struct Task {
        const FastqRecord* read;
        uint32_t mate_flag;
    };
    std::vector<Task> tasks;
    tasks.reserve(mate1.size() + mate2.size());
    for (const auto& r : mate1) tasks.push_back({&r, genomics::kFlagMate1});
    for (const auto& r : mate2) tasks.push_back({&r, genomics::kFlagMate2});

    std::vector<AlignmentRecord> records(tasks.size());
    auto worker_body = [&](std::atomic<size_t>& next) {
        for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
            MappingResult m = map_read(*tasks[i].read, index, ref, params);
            records[i] = record_for(*tasks[i].read, m, tasks[i].mate_flag);
        }
    };
    std::atomic<size_t> next{0};
    if (threads <= 1) {
        worker_body(next);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back([&] { worker_body(next); });
        for (auto& t : pool) t.join();
    }

    AlignmentFile file;
    file.header = genomics::header_for(ref);
    file.records = std::move(records);
    genomics::sort_records(file);
    return file;
}

}  // namespace coinami::mapper

#include <doctest.h>

#include <map>
#include <sstream>

#include "coinami/genomics/alignment.hpp"
#include "coinami/genomics/fastq.hpp"
#include "coinami/genomics/md.hpp"
#include "testutil.hpp"

using namespace coinami::genomics;
using coinami::crypto::SplitMix64;

TEST_CASE("fastq: minimal record") {
    auto records = parse_fastq("@r1\nACGT\n+\nIIII\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].name == "r1");
    CHECK(records[0].seq == "ACGT");
    CHECK(records[0].qual == "IIII");
}

TEST_CASE("fastq: empty input") {
    CHECK(parse_fastq("").empty());
    CHECK(serialize_fastq({}) == "");
}

TEST_CASE("fastq: quality length mismatch reports line 4") {
    try {
        parse_fastq("@r1\nACGT\n+\nIII\n");
        FAIL("expected MalformedRecord");
    } catch (const MalformedRecord& e) {
        CHECK(e.line_no == 4);
    }
}

TEST_CASE("fastq: missing markers") {
    CHECK_THROWS_AS(parse_fastq("r1\nACGT\n+\nIIII\n"), MalformedRecord);
    CHECK_THROWS_AS(parse_fastq("@r1\nACGT\nX\nIIII\n"), MalformedRecord);
    CHECK_THROWS_AS(parse_fastq("@r1\nACXT\n+\nIIII\n"), MalformedRecord);
}

TEST_CASE("fastq: serialize order and round trip") {
    std::vector<FastqRecord> records = {{"a", "ACGT", "IIII"}, {"b", "NNTT", "!!!!"}};
    std::string text = serialize_fastq(records);
    CHECK(text == "@a\nACGT\n+\nIIII\n@b\nNNTT\n+\n!!!!\n");
    CHECK(parse_fastq(text) == records);
}

TEST_CASE("fastq: random round trip property") {
    SplitMix64 rng(99);
    for (int t = 0; t < 50; ++t) {
        std::vector<FastqRecord> records;
        size_t n = rng.below(8);
        for (size_t i = 0; i < n; ++i) {
            size_t len = 1 + rng.below(40);
            std::string seq(len, 'A');
            const char* alphabet = "ACGTN";
            for (auto& c : seq) c = alphabet[rng.below(5)];
            records.push_back({"q" + std::to_string(i), seq,
                               testutil::plausible_qual(len, rng)});
        }
        CHECK(parse_fastq(serialize_fastq(records)) == records);
    }
}

TEST_CASE("fasta: wrap tolerated on input, unwrapped output") {
    auto genome = parse_fasta(">chr1\nACGT\nACGT\n>chr2\nTTTT\n");
    REQUIRE(genome.sequences.size() == 2);
    CHECK(genome.sequences[0].bases == "ACGTACGT");
    CHECK(serialize_fasta(genome) == ">chr1\nACGTACGT\n>chr2\nTTTT\n");
    CHECK_THROWS_AS(parse_fasta(">chr1\nACGN\n"), MalformedRecord);  // no N in references
    CHECK_THROWS_AS(parse_fasta(">chr1\nAC\n>chr1\nGG\n"), MalformedRecord);
}

TEST_CASE("cigar: parse, render, spans") {
    Cigar c = Cigar::from_string("50M2I48M");
    CHECK(c.str() == "50M2I48M");
    CHECK(c.read_span() == 100);
    CHECK(reference_span(c) == 98);
    CHECK(reference_span(Cigar::from_string("100M")) == 100);
    CHECK(reference_span(Cigar::from_string("10M5D10M")) == 25);
    CHECK_THROWS_AS(Cigar::from_string("10M5M"), MalformedRecord);  // adjacent same codes
    CHECK_THROWS_AS(Cigar::from_string("M"), MalformedRecord);
    CHECK_THROWS_AS(Cigar::from_string("10"), MalformedRecord);
    Cigar merged;
    merged.push('M', 10);
    merged.push('M', 5);
    CHECK(merged.str() == "15M");
}

TEST_CASE("md: identity and single mismatch") {
    CHECK(compute_md("ACGTA", "ACGTA", Cigar::from_string("5M")) == "MD:Z:5");
    // reference T at offset 35 of a 100M alignment
    SplitMix64 rng(7);
    std::string ref = testutil::random_bases(rng, 100);
    ref[35] = 'T';
    std::string read = ref;
    read[35] = 'C';
    CHECK(compute_md(ref, read, Cigar::from_string("100M")) == "MD:Z:35T64");
}

TEST_CASE("md: deletion, value checked against the replaying oracle") {
    // ref ACGTA, read ACTA after deleting G: 2M1D2M
    Cigar cigar = Cigar::from_string("2M1D2M");
    std::string md = compute_md("ACGTA", "ACTA", cigar);
    CHECK(md == "MD:Z:2^G2");
    CHECK(reconstruct_reference_window(cigar, md, "ACTA") == "ACGTA");
}

TEST_CASE("md: length mismatch") {
    CHECK_THROWS_AS(compute_md("ACGT", "ACGTA", Cigar::from_string("5M")), LengthMismatch);
    CHECK_THROWS_AS(compute_md("ACGTA", "ACG", Cigar::from_string("5M")), LengthMismatch);
}

TEST_CASE("md: replay property over random alignments") {
    SplitMix64 rng(123);
    for (int t = 0; t < 200; ++t) {
        // build a random alignment: window and read derived together
        std::string window;
        std::string read;
        Cigar cigar;
        if (rng.below(4) == 0) {
            size_t s = 1 + rng.below(5);
            read.append(testutil::random_bases(rng, s));
            cigar.push('S', s);
        }
        size_t ops = 1 + rng.below(5);
        for (size_t i = 0; i < ops; ++i) {
            switch (rng.below(3)) {
                case 0: {  // M with occasional mismatches
                    size_t len = 1 + rng.below(20);
                    std::string block = testutil::random_bases(rng, len);
                    window += block;
                    for (auto& c : block)
                        if (rng.below(10) == 0) testutil::substitute(block, &c - block.data(), rng);
                    read += block;
                    cigar.push('M', len);
                    break;
                }
                case 1: {  // D
                    size_t len = 1 + rng.below(4);
                    window += testutil::random_bases(rng, len);
                    cigar.push('D', len);
                    break;
                }
                default: {  // I
                    size_t len = 1 + rng.below(4);
                    read += testutil::random_bases(rng, len);
                    cigar.push('I', len);
                    break;
                }
            }
        }
        // cigar must contain at least one M to be realistic
        if (cigar.match_span() == 0) {
            window += "ACGT";
            read += "ACGT";
            cigar.push('M', 4);
        }
        std::string md = compute_md(window, read, cigar);
        CHECK(reconstruct_reference_window(cigar, md, read) == window);
        CHECK(md_consistent(cigar, md, read, window));
        if (!window.empty()) {
            std::string wrong = window;
            testutil::substitute(wrong, rng.below(wrong.size()), rng);
            CHECK_FALSE(md_consistent(cigar, md, read, wrong));
        }
    }
}

TEST_CASE("alignment file: header only") {
    auto file = parse_alignment_file("@SQ\tchr1\t1000\n");
    CHECK(file.header.size() == 1);
    CHECK(file.records.empty());
    CHECK(serialize_alignment_file(file) == "@SQ\tchr1\t1000\n");
}

TEST_CASE("alignment file: sort violation reports record index") {
    std::string text =
        "@SQ\tchr1\t1000\n"
        "a\t65\tchr1\t10\t60\t4M\tACGT\tMD:Z:4\n"
        "b\t65\tchr1\t5\t60\t4M\tACGT\tMD:Z:4\n";
    try {
        parse_alignment_file(text);
        FAIL("expected NotSorted");
    } catch (const NotSorted& e) {
        CHECK(e.record_index == 2);
    }
}

TEST_CASE("alignment file: record round trip with the reference md") {
    std::string text =
        "@SQ\tchr1\t160000\n"
        "x\t65\tchr1\t156433\t60\t100M\t" + std::string(100, 'A') + "\tMD:Z:35T64\n";
    // seq of all A with a T mismatch at offset 35 replays consistently
    std::string fixed = text;
    auto file = parse_alignment_file(fixed);
    CHECK(file.records[0].cigar.str() == "100M");
    CHECK(file.records[0].md == "MD:Z:35T64");
    CHECK(serialize_alignment_file(file) == fixed);
}

TEST_CASE("alignment file: unmapped sentinel enforcement") {
    CHECK_THROWS_AS(parse_alignment_file("@SQ\tchr1\t100\n"
                                         "u\t69\tchr1\t5\t0\t4M\tACGT\tMD:Z:4\n"),
                    MalformedRecord);
    auto file = parse_alignment_file("@SQ\tchr1\t100\n"
                                     "u\t69\t*\t0\t0\t*\tACGT\t*\n");
    CHECK(file.records[0].unmapped());
}

TEST_CASE("alignment file: serialize refuses unsorted records") {
    AlignmentFile file;
    file.header = {{"chr1", 1000}};
    AlignmentRecord a;
    a.qname = "a";
    a.flags = kFlagPaired | kFlagMate1;
    a.rname = "chr1";
    a.pos = 50;
    a.cigar = Cigar::from_string("4M");
    a.seq = "ACGT";
    a.md = "MD:Z:4";
    AlignmentRecord b = a;
    b.pos = 10;
    file.records = {a, b};
    CHECK_THROWS_AS(serialize_alignment_file(file), NotSorted);
    sort_records(file);
    CHECK_NOTHROW(serialize_alignment_file(file));
}

TEST_CASE("reverse complement") {
    CHECK(reverse_complement("ACGTN") == "NACGT");
    CHECK(reverse_complement("") == "");
}

TEST_CASE("offset sidecar points at each reference's first record") {
    std::string text =
        "@SQ\tchr1\t1000\n"
        "@SQ\tchr2\t500\n"
        "@SQ\tchr3\t500\n"
        "a\t65\tchr1\t10\t60\t4M\tACGT\tMD:Z:4\n"
        "b\t129\tchr1\t20\t60\t4M\tACGT\tMD:Z:4\n"
        "c\t65\tchr3\t5\t60\t4M\tTTTT\tMD:Z:4\n"
        "u\t69\t*\t0\t0\t*\tACGT\t*\n";
    auto file = parse_alignment_file(text);
    std::string index = build_offset_index(file);
    // one line per reference: name \t byte offset of first record (-1 if none)
    std::istringstream lines(index);
    std::string line;
    std::map<std::string, int64_t> offsets;
    while (std::getline(lines, line)) {
        size_t tab = line.find('\t');
        offsets[line.substr(0, tab)] = std::stoll(line.substr(tab + 1));
    }
    REQUIRE(offsets.size() == 3);
    CHECK(offsets["chr2"] == -1);
    CHECK(text.compare(offsets["chr1"], 2, "a\t") == 0);
    CHECK(text.compare(offsets["chr3"], 2, "c\t") == 0);
}

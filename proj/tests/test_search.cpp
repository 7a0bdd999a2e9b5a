#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "dilatelab/json_out.hpp"
#include "dilatelab/search.hpp"
#include "dilatelab/store.hpp"

#include "oracles.hpp"

using namespace dlab;

namespace {

IntSet lit(const char* s) { return parse_set_literal(s); }
DilateTuple tup(const char* s) { return parse_tuple_literal(s); }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const char* tag) {
        path = std::filesystem::temp_directory_path() / (std::string("dilatelab_test_") + tag);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("canonical enumeration", "[search]") {
    CHECK(enumerate_reduced(3, 5) == std::vector<IntSet>{lit("0..2"), lit("0,1,3"), lit("0,1,4")});
    CHECK(enumerate_reduced(2, 2) == std::vector<IntSet>{lit("0,1")});
    CHECK(enumerate_reduced(3, 3) == std::vector<IntSet>{lit("0..2")});
    CHECK_THROWS_MATCHES(enumerate_reduced(3, 2), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.kind() == errc::window_too_small; }));
    CHECK_THROWS_MATCHES(enumerate_reduced(1, 5), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.kind() == errc::window_too_small; }));
}

TEST_CASE("every enumerated set is canonical and none is missed", "[search]") {
    for (std::int64_t n = 2; n <= 5; ++n) {
        for (std::int64_t w = n; w <= 10; ++w) {
            std::set<std::vector<std::int64_t>> seen;
            enumerate_reduced(n, w, [&](const IntSet& s) {
                REQUIRE(s.size() == static_cast<std::size_t>(n));
                REQUIRE(is_reduced(s));
                REQUIRE(s.max() < w);
                REQUIRE(seen.insert(s.elems()).second); // no duplicates
                return true;
            });
            // brute-force the canonical space from the definition
            std::set<std::vector<std::int64_t>> expect;
            for (unsigned mask = 1; mask < (1u << w); ++mask) {
                if (std::popcount(mask) != n) continue;
                const auto elems = oracle::mask_to_set(mask);
                if (elems.front() != 0) continue;
                if (oracle::set_gcd(elems) != 1) continue;
                std::vector<std::int64_t> refl;
                for (auto it = elems.rbegin(); it != elems.rend(); ++it) refl.push_back(elems.back() - *it);
                if (std::vector<std::int64_t>(elems.begin(), elems.end()) > refl) continue;
                expect.insert(std::vector<std::int64_t>(elems.begin(), elems.end()));
            }
            REQUIRE(seen == expect);
        }
    }
}

TEST_CASE("canonicalization loses no minima (full power set, W <= 12)", "[search]") {
    const char* tuples[] = {"1,2", "1,3", "2,3"};
    for (const char* ts : tuples) {
        const DilateTuple t = tup(ts);
        for (std::int64_t n = 2; n <= 4; ++n) {
            const std::int64_t w = 3 * n;
            std::uint64_t best_all = UINT64_MAX;
            for (unsigned mask = 1; mask < (1u << w); ++mask) {
                if (std::popcount(mask) != n) continue;
                const IntSet a = canonicalize(oracle::mask_to_set(mask));
                best_all = std::min(best_all, dilate_sum_size(t, a));
            }
            const SearchRecord rec = min_dilate_sum(t, n, w);
            REQUIRE(rec.min_size == best_all);
        }
    }
}

TEST_CASE("minimal dilate sums on the worked instances", "[search]") {
    {
        const SearchRecord r = min_dilate_sum(tup("1,2"), 3, 9);
        CHECK(r.min_size == 7);
        CHECK(r.empirical_constant == 2);
        REQUIRE_FALSE(r.witnesses.empty());
        CHECK(r.witnesses.front() == lit("0..2"));
        CHECK(r.exhaustive);
    }
    {
        const SearchRecord r = min_dilate_sum(tup("1,3"), 3, 9);
        CHECK(r.min_size == 8);
        CHECK(r.empirical_constant == 4);
        bool found = false;
        for (const IntSet& w : r.witnesses) found = found || w == lit("0,1,3");
        CHECK(found);
    }
    {
        const SearchRecord r = min_dilate_sum(tup("1,1"), 4, 12);
        CHECK(r.min_size == 7);
        CHECK(r.empirical_constant == 1);
        bool found = false;
        for (const IntSet& w : r.witnesses) found = found || w == lit("0..3");
        CHECK(found);
    }
}

TEST_CASE("record invariants and window monotonicity", "[search]") {
    const DilateTuple t = tup("1,2");
    std::uint64_t prev = UINT64_MAX;
    for (std::int64_t w = 4; w <= 14; ++w) {
        const SearchRecord r = min_dilate_sum(t, 4, w);
        REQUIRE(r.min_size <= prev); // non-increasing in W
        prev = r.min_size;
        REQUIRE(r.min_size <= static_cast<std::uint64_t>(interval_upper_bound(t, 4)));
        const ConstantLedger led = recursive_constants(t);
        REQUIRE(BigRat(r.min_size) >= BigRat(led.weight) * 4 - led.cfinal);
        for (const IntSet& wit : r.witnesses) {
            REQUIRE(is_reduced(wit));
            REQUIRE(wit.min() == 0);
        }
    }
}

TEST_CASE("budget is enforced before enumeration", "[search]") {
    SearchOptions opts;
    opts.budget = 10;
    CHECK_THROWS_MATCHES(min_dilate_sum(tup("1,2"), 5, 20, opts), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.kind() == errc::budget_exceeded; }));
}

TEST_CASE("parallel schedule does not change the record", "[search]") {
    SearchOptions seq;
    seq.threads = 1;
    SearchOptions par;
    par.threads = 4;
    for (const char* ts : {"1,2", "1,3", "2,3"}) {
        const SearchRecord a = min_dilate_sum(tup(ts), 5, 15, seq);
        const SearchRecord b = min_dilate_sum(tup(ts), 5, 15, par);
        REQUIRE(a.min_size == b.min_size);
        REQUIRE(a.witness_total == b.witness_total);
        REQUIRE(a.witnesses.size() == b.witnesses.size());
        for (std::size_t i = 0; i < a.witnesses.size(); ++i) REQUIRE(a.witnesses[i] == b.witnesses[i]);
    }
}

TEST_CASE("constant table persists, reuses, and is byte-stable", "[search]") {
    TempDir tmp("table");
    const ResultsStore store{tmp.path};
    const DilateTuple t = tup("1,2");

    const TableResult first = constant_table(t, 2, 4, 3, store);
    REQUIRE(first.records.size() == 3);
    CHECK(first.computed == 3);
    CHECK(first.reused == 0);
    CHECK(first.records[0].min_size == 4);
    CHECK(first.records[1].min_size == 7);
    CHECK(first.records[2].min_size == 10);
    for (const SearchRecord& r : first.records) CHECK(r.empirical_constant == 2);

    const std::string csv1 = slurp(store.csv_path(t));
    const std::string json1 = slurp(store.json_path(t));
    REQUIRE(csv1.starts_with(
        "lambda,k,n,window,min_size,empirical_constant,exhaustive,witness_count,example_witness\n"));
    REQUIRE(csv1.find("\"1,2\",2,2,6,4,2,true,") != std::string::npos);

    const TableResult second = constant_table(t, 2, 4, 3, store);
    CHECK(second.computed == 0);
    CHECK(second.reused == 3);
    CHECK(slurp(store.csv_path(t)) == csv1);
    CHECK(slurp(store.json_path(t)) == json1);

    // extending the range keeps old rows cached and appends the new one
    const TableResult third = constant_table(t, 2, 5, 3, store);
    CHECK(third.computed == 1);
    CHECK(third.reused == 3);
    CHECK(third.records[3].min_size == 13);
}

TEST_CASE("store filenames use the sorted canonical tuple", "[search]") {
    TempDir tmp("names");
    const ResultsStore store{tmp.path};
    CHECK(store.csv_path(tup("1,2")).filename() == "l_1_2.csv");
    CHECK(store.csv_path(tup("2,1")).filename() == "l_1_2.csv");
    CHECK(store.csv_path(tup("1,-2")).filename() == "l_-2_1.csv");
    CHECK(store.json_path(tup("6,10,15")).filename() == "l_6_10_15.json");
}

TEST_CASE("table for (1,1) measures the tight constant", "[search]") {
    TempDir tmp("ones");
    const TableResult t = constant_table(tup("1,1"), 2, 4, 3, ResultsStore{tmp.path});
    for (const SearchRecord& r : t.records) CHECK(r.empirical_constant == 1);
}

TEST_CASE("corrupt store files are an IoError, not silent reuse", "[search]") {
    TempDir tmp("corrupt");
    const ResultsStore store{tmp.path};
    const DilateTuple t = tup("1,2");
    std::filesystem::create_directories(tmp.path);
    std::ofstream(store.json_path(t)) << "{not json";
    CHECK_THROWS_MATCHES(store.load(t), error,
                         Catch::Matchers::Predicate<error>([](const error& e) { return e.kind() == errc::io_error; }));
}

TEST_CASE("environment variable caps the enumeration budget", "[search]") {
    REQUIRE(SearchOptions{}.budget == kDefaultSearchBudget);
    setenv("DILATE_LAB_BUDGET", "123", 1);
    CHECK(SearchOptions::from_env().budget == 123);
    setenv("DILATE_LAB_BUDGET", "junk", 1);
    CHECK(SearchOptions::from_env().budget == kDefaultSearchBudget);
    unsetenv("DILATE_LAB_BUDGET");
    CHECK(SearchOptions::from_env().budget == kDefaultSearchBudget);
}

TEST_CASE("the (2,3) minimum at n=3 beats the interval", "[search]") {
    // nested-loop oracle: {0,1,3} reaches 8 while the interval {0,1,2} needs 9
    REQUIRE(oracle::dilate_sum({2, 3}, {0, 1, 3}).size() == 8);
    REQUIRE(oracle::dilate_sum({2, 3}, {0, 1, 2}).size() == 9);
    const SearchRecord r = min_dilate_sum(tup("2,3"), 3, 9);
    CHECK(r.min_size == 8);
    CHECK(r.empirical_constant == 7);
    bool found = false;
    for (const IntSet& w : r.witnesses) found = found || w == lit("0,1,3");
    CHECK(found);
}

TEST_CASE("search record JSON round-trips through the store", "[search]") {
    TempDir tmp("roundtrip");
    const ResultsStore store{tmp.path};
    const DilateTuple t = tup("2,3");
    constant_table(t, 2, 3, 3, store);
    const auto loaded = store.load(t);
    REQUIRE(loaded.size() == 2);
    const SearchRecord& r = loaded.at({2, 6});
    CHECK(r.min_size == 4);
    CHECK(r.exhaustive);
    REQUIRE_FALSE(r.witnesses.empty());
    CHECK(r.witnesses.front() == lit("0,1"));
}

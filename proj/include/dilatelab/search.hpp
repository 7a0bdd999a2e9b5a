#pragma once

// Exhaustive extremal search over canonical reduced sets: minimize the dilate
// sum cardinality for given (n, window), yielding the empirical additive
// constant S*n - min. Canonical space = size-n subsets of {0..W-1} with min 0,
// element gcd 1, and set <= its 0-anchored reflection; affine and reflection
// invariance of the cardinality make this lossless (shipped property test).

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "dilatelab/bignum.hpp"
#include "dilatelab/bounds.hpp"
#include "dilatelab/dilates.hpp"
#include "dilatelab/errors.hpp"
#include "dilatelab/intset.hpp"

namespace dlab {

inline constexpr std::uint64_t kDefaultSearchBudget = 10'000'000;
inline constexpr std::uint32_t kDefaultWitnessCap = 16;

struct SearchOptions {
    std::uint64_t budget = kDefaultSearchBudget; // max candidate sets enumerated
    std::uint32_t witness_cap = kDefaultWitnessCap;
    unsigned threads = 1;
    std::uint64_t bit_budget = kDefaultBitBudget;

    // DILATE_LAB_BUDGET overrides the enumeration cap when set.
    static SearchOptions from_env() {
        SearchOptions o;
        if (const char* v = std::getenv("DILATE_LAB_BUDGET")) {
            char* end = nullptr;
            const unsigned long long parsed = std::strtoull(v, &end, 10);
            if (end && *end == '\0' && parsed > 0) o.budget = parsed;
        }
        return o;
    }
};

struct SearchRecord {
    std::vector<std::int64_t> lambdas; // canonical (sorted) coefficients
    std::int64_t n = 0;
    std::int64_t window = 0; // ground range is {0..window-1}
    std::uint64_t min_size = 0;
    std::int64_t empirical_constant = 0; // S*n - min_size
    std::vector<IntSet> witnesses;       // capped, enumeration order
    std::uint64_t witness_total = 0;
    std::uint32_t witness_cap = kDefaultWitnessCap;
    bool exhaustive = false;
};

namespace detail {

inline bool lex_le_reflection(const std::vector<std::int64_t>& elems) {
    // 0-anchored reflection: x -> max - x, re-sorted means reading backwards
    const std::int64_t top = elems.back();
    for (std::size_t i = 0; i < elems.size(); ++i) {
        const std::int64_t mine = elems[i];
        const std::int64_t theirs = top - elems[elems.size() - 1 - i];
        if (mine != theirs) return mine < theirs;
    }
    return true; // palindromic
}

inline std::uint64_t elems_gcd(const std::vector<std::int64_t>& elems) {
    std::uint64_t g = 0;
    for (std::int64_t v : elems) g = std::gcd(g, static_cast<std::uint64_t>(v));
    return g;
}

// Lexicographic combinations of {from..W-1} below elems[fixed..], invoking
// sink on each completed canonical candidate. Returns false if sink stops.
template <typename Sink>
inline bool enumerate_tail(std::vector<std::int64_t>& elems, std::size_t pos, std::int64_t from, std::int64_t w,
                           Sink&& sink) {
    const std::size_t n = elems.size();
    if (pos == n) {
        if (elems_gcd(elems) != 1) return true;
        if (!lex_le_reflection(elems)) return true;
        return sink(elems);
    }
    const auto remaining = static_cast<std::int64_t>(n - pos);
    for (std::int64_t v = from; v + remaining - 1 <= w - 1; ++v) {
        elems[pos] = v;
        if (!enumerate_tail(elems, pos + 1, v + 1, w, sink)) return false;
    }
    return true;
}

inline BigInt candidate_count(std::int64_t n, std::int64_t w) {
    return binomial(w - 1, n - 1); // subsets containing 0, before the gcd/reflection filters
}

} // namespace detail

// Streams the canonical reduced sets in deterministic lexicographic order.
// sink returns false to stop early.
template <typename Sink>
inline void enumerate_reduced(std::int64_t n, std::int64_t w, Sink&& sink) {
    if (n < 2 || n > w) fail(errc::window_too_small, "need 2 <= n <= W (n = " + std::to_string(n) +
                                                         ", W = " + std::to_string(w) + ")");
    std::vector<std::int64_t> elems(static_cast<std::size_t>(n));
    elems[0] = 0;
    detail::enumerate_tail(elems, 1, 1, w, [&](const std::vector<std::int64_t>& e) {
        return sink(IntSet::from_sorted_unique(e));
    });
}

inline std::vector<IntSet> enumerate_reduced(std::int64_t n, std::int64_t w) {
    std::vector<IntSet> out;
    enumerate_reduced(n, w, [&](IntSet s) {
        out.push_back(std::move(s));
        return true;
    });
    return out;
}

inline SearchRecord min_dilate_sum(const DilateTuple& lambdas, std::int64_t n, std::int64_t w,
                                   const SearchOptions& opts = SearchOptions::from_env()) {
    if (n < 2 || n > w) fail(errc::window_too_small, "need 2 <= n <= W (n = " + std::to_string(n) +
                                                         ", W = " + std::to_string(w) + ")");
    const BigInt count = detail::candidate_count(n, w);
    if (count > opts.budget)
        fail(errc::budget_exceeded, "candidate space " + count.str() + " exceeds budget " +
                                        std::to_string(opts.budget));

    struct Partial {
        std::uint64_t min_size = UINT64_MAX;
        std::vector<IntSet> witnesses;
        std::uint64_t witness_total = 0;
    };

    // Independent work items keyed by the second element; merged in ascending
    // order, so the result is schedule-independent.
    const auto run_item = [&](std::int64_t second) {
        Partial p;
        std::vector<std::int64_t> elems(static_cast<std::size_t>(n));
        elems[0] = 0;
        elems[1] = second;
        detail::enumerate_tail(elems, 2, second + 1, w, [&](const std::vector<std::int64_t>& e) {
            const IntSet cand = IntSet::from_sorted_unique(e);
            const std::uint64_t sz = dilate_sum_size(lambdas, cand, opts.bit_budget);
            if (sz < p.min_size) {
                p.min_size = sz;
                p.witnesses.clear();
                p.witness_total = 0;
            }
            if (sz == p.min_size) {
                ++p.witness_total;
                if (p.witnesses.size() < opts.witness_cap) p.witnesses.push_back(cand);
            }
            return true;
        });
        return p;
    };

    std::vector<std::int64_t> seconds;
    for (std::int64_t second = 1; second + n - 2 <= w - 1; ++second) seconds.push_back(second);

    std::vector<Partial> partials(seconds.size());
    const unsigned threads = std::max(1u, opts.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < seconds.size(); ++i) partials[i] = run_item(seconds[i]);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::vector<std::future<void>> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = cursor.fetch_add(1); i < seconds.size(); i = cursor.fetch_add(1))
                    partials[i] = run_item(seconds[i]);
            }));
        for (auto& f : pool) f.get();
    }

    SearchRecord rec;
    rec.lambdas = lambdas.sorted_coeffs();
    rec.n = n;
    rec.window = w;
    rec.witness_cap = opts.witness_cap;
    rec.min_size = UINT64_MAX;
    for (const Partial& p : partials) {
        if (p.min_size < rec.min_size) {
            rec.min_size = p.min_size;
            rec.witnesses.clear();
            rec.witness_total = 0;
        }
        if (p.min_size == rec.min_size) {
            rec.witness_total += p.witness_total;
            for (const IntSet& wset : p.witnesses)
                if (rec.witnesses.size() < opts.witness_cap) rec.witnesses.push_back(wset);
        }
    }
    const WeightProfile wp = weight_sum(lambdas);
    rec.empirical_constant = detail::checked_i64(
        static_cast<__int128>(wp.total) * n - static_cast<__int128>(rec.min_size), "empirical constant");
    rec.exhaustive = true;
    return rec;
}

} // namespace dlab

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dilatelab/errors.hpp"
#include "dilatelab/intset.hpp"

namespace dlab {

// Default cap on the output bit window of the fast kernel (2^26 bits = 8 MiB
// per buffer). Callers may raise it per call.
inline constexpr std::uint64_t kDefaultBitBudget = std::uint64_t{1} << 26;

// Coefficient tuple (l1,...,lk): every entry nonzero, gcd of absolute values 1
// (coprime as a tuple, not pairwise). k >= 1.
class DilateTuple {
public:
    explicit DilateTuple(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) fail(errc::invalid_tuple, "empty coefficient tuple");
        std::uint64_t g = 0;
        for (std::int64_t c : coeffs_) {
            if (c == 0) fail(errc::invalid_tuple, "zero coefficient");
            if (c == INT64_MIN) fail(errc::overflow, "coefficient magnitude exceeds 64-bit range");
            g = std::gcd(g, static_cast<std::uint64_t>(c < 0 ? -c : c));
        }
        if (g != 1) fail(errc::invalid_tuple, "coefficient gcd is " + std::to_string(g) + ", expected 1");
    }

    std::size_t k() const noexcept { return coeffs_.size(); }
    const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }

    // Canonical form used as a cache / file key: sorted ascending. Dilate-sum
    // cardinality is symmetric in the coefficients, so this loses nothing.
    std::vector<std::int64_t> sorted_coeffs() const {
        std::vector<std::int64_t> s = coeffs_;
        std::sort(s.begin(), s.end());
        return s;
    }

    bool operator==(const DilateTuple&) const = default;

private:
    std::vector<std::int64_t> coeffs_;
};

inline DilateTuple parse_tuple_literal(std::string_view text) {
    std::vector<std::int64_t> coeffs;
    text = detail::trim(text);
    if (text.empty()) fail(errc::parse_error, "empty tuple literal");
    while (true) {
        const std::size_t comma = text.find(',');
        coeffs.push_back(detail::parse_int(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    return DilateTuple(std::move(coeffs));
}

inline std::string tuple_literal(std::span<const std::int64_t> coeffs) {
    std::string out;
    for (std::int64_t c : coeffs) {
        if (!out.empty()) out += ',';
        out += std::to_string(c);
    }
    return out;
}

inline std::string tuple_literal(const DilateTuple& t) { return tuple_literal(t.coeffs()); }

namespace detail {

// One dilate per coordinate; the kernel and the reference fold both work on
// this generalized form so the verifiers can restrict single coordinates.
struct DilateTerm {
    std::int64_t coeff;
    const IntSet* set;
};

inline void check_terms(std::span<const DilateTerm> terms) {
    if (terms.empty()) fail(errc::empty_operand, "no dilate terms");
    for (const DilateTerm& t : terms) {
        if (t.coeff == 0) fail(errc::zero_scale, "zero dilate coefficient");
        if (t.set->empty()) fail(errc::empty_operand, "dilate of empty set");
    }
}

// Reference route: fold of sumset over affine images, smallest machinery that
// is obviously the definition.
inline IntSet fold_reference(std::span<const DilateTerm> terms) {
    check_terms(terms);
    IntSet acc = affine_map(*terms[0].set, terms[0].coeff, 0);
    for (std::size_t i = 1; i < terms.size(); ++i)
        acc = sumset(acc, affine_map(*terms[i].set, terms[i].coeff, 0));
    return acc;
}

struct BitWindow {
    std::int64_t base = 0;              // value of bit 0
    std::uint64_t bits = 0;             // valid bit length
    std::vector<std::uint64_t> words;
};

// Bitset shift-or convolution. The output window [base, base+bits) is fixed up
// front; folding dilate i ORs |A_i| shifted copies of the accumulator into a
// fresh buffer. Words that have saturated to all-ones are dropped from the
// active list, which is what makes dense instances fast: after a handful of
// shifts only the ragged edges still change.
inline BitWindow dilate_kernel(std::span<const DilateTerm> terms, std::uint64_t bit_budget) {
    check_terms(terms);

    std::vector<std::size_t> order(terms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto mag = [&](std::size_t i) {
            const std::int64_t c = terms[i].coeff;
            return static_cast<std::uint64_t>(c < 0 ? -c : c);
        };
        return mag(a) > mag(b); // fold in decreasing |coeff|
    });

    __int128 base128 = 0;
    __int128 span128 = 0; // sum over terms of |coeff| * (max - min)
    for (const DilateTerm& t : terms) {
        const __int128 lo = static_cast<__int128>(t.coeff) * (t.coeff > 0 ? t.set->min() : t.set->max());
        const __int128 hi = static_cast<__int128>(t.coeff) * (t.coeff > 0 ? t.set->max() : t.set->min());
        checked_i64(lo, "dilate endpoint");
        checked_i64(hi, "dilate endpoint");
        base128 += lo;
        span128 += hi - lo;
    }
    checked_i64(base128, "dilate-sum minimum");
    checked_i64(base128 + span128, "dilate-sum maximum");
    if (span128 + 1 > static_cast<__int128>(bit_budget))
        fail(errc::window_overflow, "output window of " + std::to_string(static_cast<std::int64_t>(span128) + 1) +
                                        " bits exceeds budget of " + std::to_string(bit_budget));

    const std::uint64_t total_bits = static_cast<std::uint64_t>(span128) + 1;
    const std::size_t total_words = static_cast<std::size_t>((total_bits + 63) / 64);
    if (total_words > UINT32_MAX) fail(errc::window_overflow, "bit window exceeds addressable words");

    // Normalized nonnegative shift offsets for one term.
    const auto offsets_of = [](const DilateTerm& t) {
        std::vector<std::uint64_t> offs;
        offs.reserve(t.set->size());
        const std::int64_t lo = t.coeff > 0 ? t.set->min() : t.set->max();
        for (std::int64_t a : *t.set)
            offs.push_back(static_cast<std::uint64_t>(static_cast<__int128>(t.coeff) * a -
                                                      static_cast<__int128>(t.coeff) * lo));
        std::sort(offs.begin(), offs.end());
        return offs;
    };

    BitWindow acc;
    acc.base = static_cast<std::int64_t>(base128);
    acc.words.assign(total_words, 0);
    {
        const DilateTerm& first = terms[order[0]];
        for (std::uint64_t o : offsets_of(first))
            acc.words[o >> 6] |= std::uint64_t{1} << (o & 63);
        const std::int64_t c = first.coeff;
        const std::uint64_t cmag = static_cast<std::uint64_t>(c < 0 ? -c : c);
        acc.bits = cmag * static_cast<std::uint64_t>(first.set->max() - first.set->min()) + 1;
    }

    std::vector<std::uint64_t> next(total_words);
    std::vector<std::uint32_t> active;
    for (std::size_t step = 1; step < order.size(); ++step) {
        const DilateTerm& term = terms[order[step]];
        const std::vector<std::uint64_t> offs = offsets_of(term);
        const std::uint64_t next_bits = acc.bits + offs.back();
        const std::size_t src_words = static_cast<std::size_t>((acc.bits + 63) / 64);
        const std::size_t dst_words = static_cast<std::size_t>((next_bits + 63) / 64);

        std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(dst_words), 0);
        active.resize(dst_words);
        std::iota(active.begin(), active.end(), std::uint32_t{0});

        std::size_t pass = 0;
        for (std::uint64_t o : offs) {
            const std::size_t ws = static_cast<std::size_t>(o >> 6);
            const unsigned bs = static_cast<unsigned>(o & 63);
            const std::size_t hi_excl = ws + src_words + (bs ? 1 : 0);
            auto it = std::lower_bound(active.begin(), active.end(), static_cast<std::uint32_t>(ws));
            for (; it != active.end() && *it < hi_excl; ++it) {
                const std::size_t w = *it;
                const std::size_t rel = w - ws;
                std::uint64_t v = 0;
                if (bs == 0) {
                    v = acc.words[rel];
                } else {
                    if (rel < src_words) v = acc.words[rel] << bs;
                    if (rel >= 1) v |= acc.words[rel - 1] >> (64 - bs);
                }
                next[w] |= v;
            }
            if ((++pass & 15) == 0)
                active.erase(std::remove_if(active.begin(), active.end(),
                                            [&](std::uint32_t w) { return next[w] == ~std::uint64_t{0}; }),
                             active.end());
        }
        acc.words.swap(next);
        acc.bits = next_bits;
    }
    return acc;
}

inline std::uint64_t popcount_window(const BitWindow& w) {
    std::uint64_t n = 0;
    for (std::uint64_t word : w.words) n += static_cast<std::uint64_t>(std::popcount(word));
    return n;
}

inline IntSet window_to_set(const BitWindow& w) {
    std::vector<std::int64_t> out;
    out.reserve(popcount_window(w));
    for (std::size_t i = 0; i < w.words.size(); ++i) {
        std::uint64_t word = w.words[i];
        while (word) {
            const int b = std::countr_zero(word);
            out.push_back(w.base + static_cast<std::int64_t>(i * 64 + static_cast<std::size_t>(b)));
            word &= word - 1;
        }
    }
    return IntSet::from_sorted_unique(std::move(out));
}

inline std::vector<DilateTerm> uniform_terms(const DilateTuple& lambdas, const IntSet& a) {
    std::vector<DilateTerm> terms;
    terms.reserve(lambdas.k());
    for (std::int64_t c : lambdas.coeffs()) terms.push_back({c, &a});
    return terms;
}

inline std::vector<DilateTerm> mixed_terms(std::span<const std::int64_t> coeffs, std::span<const IntSet> sets) {
    if (coeffs.size() != sets.size()) fail(errc::invalid_tuple, "coefficient/operand count mismatch");
    std::vector<DilateTerm> terms;
    terms.reserve(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) terms.push_back({coeffs[i], &sets[i]});
    return terms;
}

} // namespace detail

// l1*A + ... + lk*A, reference implementation: k-fold nested sumset of affine
// images. Kept deliberately simple; the kernel below must match it on every
// input (shipped property test).
inline IntSet dilate_sum(const DilateTuple& lambdas, const IntSet& a) {
    return detail::fold_reference(detail::uniform_terms(lambdas, a));
}

inline IntSet dilate_sum_fast(const DilateTuple& lambdas, const IntSet& a,
                              std::uint64_t bit_budget = kDefaultBitBudget) {
    return detail::window_to_set(detail::dilate_kernel(detail::uniform_terms(lambdas, a), bit_budget));
}

inline std::uint64_t dilate_sum_size(const DilateTuple& lambdas, const IntSet& a,
                                     std::uint64_t bit_budget = kDefaultBitBudget) {
    return detail::popcount_window(detail::dilate_kernel(detail::uniform_terms(lambdas, a), bit_budget));
}

// Mixed-operand forms, l1*B1 + ... + lk*Bk. The verifiers lean on these to
// restrict one coordinate to a residue class while the rest range over A.
inline IntSet dilate_sum_mixed(std::span<const std::int64_t> coeffs, std::span<const IntSet> sets,
                               std::uint64_t bit_budget = kDefaultBitBudget) {
    return detail::window_to_set(detail::dilate_kernel(detail::mixed_terms(coeffs, sets), bit_budget));
}

inline std::uint64_t dilate_sum_mixed_size(std::span<const std::int64_t> coeffs, std::span<const IntSet> sets,
                                           std::uint64_t bit_budget = kDefaultBitBudget) {
    return detail::popcount_window(detail::dilate_kernel(detail::mixed_terms(coeffs, sets), bit_budget));
}

inline IntSet dilate_sum_mixed_ref(std::span<const std::int64_t> coeffs, std::span<const IntSet> sets) {
    return detail::fold_reference(detail::mixed_terms(coeffs, sets));
}

} // namespace dlab

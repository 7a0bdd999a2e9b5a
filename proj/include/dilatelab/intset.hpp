#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dilatelab/errors.hpp"

namespace dlab {

// Canonical finite set of integers: strictly increasing, duplicate-free.
// Immutable after construction; every operation below is a pure function.
class IntSet {
public:
    IntSet() = default;

    explicit IntSet(std::vector<std::int64_t> raw) : elems_(std::move(raw)) {
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
    }

    // Trusted path for callers that already hold a sorted duplicate-free list
    // (the bitset kernel emits elements in order).
    static IntSet from_sorted_unique(std::vector<std::int64_t> elems) {
        IntSet s;
        s.elems_ = std::move(elems);
        return s;
    }

    bool empty() const noexcept { return elems_.empty(); }
    std::size_t size() const noexcept { return elems_.size(); }

    std::int64_t min() const {
        if (empty()) fail(errc::empty_operand, "min of empty set");
        return elems_.front();
    }
    std::int64_t max() const {
        if (empty()) fail(errc::empty_operand, "max of empty set");
        return elems_.back();
    }

    bool contains(std::int64_t v) const {
        return std::binary_search(elems_.begin(), elems_.end(), v);
    }

    const std::vector<std::int64_t>& elems() const noexcept { return elems_; }
    auto begin() const noexcept { return elems_.begin(); }
    auto end() const noexcept { return elems_.end(); }

    bool operator==(const IntSet&) const = default;

private:
    std::vector<std::int64_t> elems_;
};

inline IntSet canonicalize(std::vector<std::int64_t> raw) { return IntSet(std::move(raw)); }

namespace detail {

inline std::int64_t checked_i64(__int128 v, const char* what) {
    if (v < INT64_MIN || v > INT64_MAX) fail(errc::overflow, std::string(what) + " exceeds 64-bit range");
    return static_cast<std::int64_t>(v);
}

} // namespace detail

// {c*a + x : a in A}. Injective for c != 0, so |result| = |A|.
inline IntSet affine_map(const IntSet& a, std::int64_t scale, std::int64_t shift) {
    if (scale == 0) fail(errc::zero_scale, "affine_map with scale 0");
    std::vector<std::int64_t> out;
    out.reserve(a.size());
    for (std::int64_t v : a)
        out.push_back(detail::checked_i64(static_cast<__int128>(scale) * v + shift, "affine image"));
    if (scale < 0) std::reverse(out.begin(), out.end());
    return IntSet::from_sorted_unique(std::move(out));
}

inline IntSet sumset(const IntSet& a, const IntSet& b) {
    if (a.empty() || b.empty()) fail(errc::empty_operand, "sumset of empty set");
    std::vector<std::int64_t> out;
    out.reserve(a.size() * b.size());
    for (std::int64_t x : a)
        for (std::int64_t y : b)
            out.push_back(detail::checked_i64(static_cast<__int128>(x) + y, "sum"));
    return IntSet(std::move(out));
}

inline IntSet set_difference(const IntSet& a, const IntSet& b) {
    std::vector<std::int64_t> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IntSet::from_sorted_unique(std::move(out));
}

inline IntSet set_intersection(const IntSet& a, const IntSet& b) {
    std::vector<std::int64_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return IntSet::from_sorted_unique(std::move(out));
}

inline bool disjoint(const IntSet& a, const IntSet& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) ++ia;
        else if (*ib < *ia) ++ib;
        else return false;
    }
    return true;
}

// scale * reduced + shift reproduces the original set element-for-element.
struct AffineWitness {
    std::int64_t scale = 1;
    std::int64_t shift = 0;
    bool operator==(const AffineWitness&) const = default;
};

// Normal form: min 0 and element gcd 1 (singletons map to {0} by convention).
// Dilate-sum cardinalities are invariant under the witness map, so searching
// and verifying over reduced sets loses nothing.
inline std::pair<IntSet, AffineWitness> reduce(const IntSet& a) {
    if (a.empty()) fail(errc::empty_operand, "reduce of empty set");
    const std::int64_t base = a.min();
    if (a.size() == 1) return {IntSet({0}), AffineWitness{1, base}};
    std::uint64_t g = 0;
    for (std::int64_t v : a)
        g = std::gcd(g, static_cast<std::uint64_t>(v) - static_cast<std::uint64_t>(base));
    // g >= 1: the set has two distinct elements
    std::vector<std::int64_t> out;
    out.reserve(a.size());
    for (std::int64_t v : a) {
        const std::uint64_t d = (static_cast<std::uint64_t>(v) - static_cast<std::uint64_t>(base)) / g;
        if (d > static_cast<std::uint64_t>(INT64_MAX)) fail(errc::overflow, "reduced element exceeds 64-bit range");
        out.push_back(static_cast<std::int64_t>(d));
    }
    return {IntSet::from_sorted_unique(std::move(out)),
            AffineWitness{static_cast<std::int64_t>(g), base}};
}

inline bool is_reduced(const IntSet& a) {
    if (a.empty()) fail(errc::empty_operand, "is_reduced of empty set");
    if (a.size() == 1) return a.min() == 0;
    if (a.min() != 0) return false;
    std::uint64_t g = 0;
    for (std::int64_t v : a) g = std::gcd(g, static_cast<std::uint64_t>(v));
    return g == 1;
}

// ---- set literal text format -----------------------------------------------
// Comma-separated integers with "a..b" inclusive range sugar, e.g. "0..4,9".
// The formatter compresses runs of length >= 3, so output always re-parses to
// the identical set.

namespace detail {

inline constexpr std::size_t kMaxLiteralElems = std::size_t{1} << 24;

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

inline std::int64_t parse_int(std::string_view tok) {
    tok = trim(tok);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        fail(errc::parse_error, "bad integer '" + std::string(tok) + "'");
    return v;
}

} // namespace detail

inline IntSet parse_set_literal(std::string_view text) {
    std::vector<std::int64_t> elems;
    text = detail::trim(text);
    if (text.empty()) return IntSet{};
    while (true) {
        const std::size_t comma = text.find(',');
        std::string_view tok = detail::trim(text.substr(0, comma));
        if (tok.empty()) fail(errc::parse_error, "empty element in set literal");
        const std::size_t dots = tok.find("..");
        if (dots == std::string_view::npos) {
            elems.push_back(detail::parse_int(tok));
        } else {
            const std::int64_t lo = detail::parse_int(tok.substr(0, dots));
            const std::int64_t hi = detail::parse_int(tok.substr(dots + 2));
            if (lo > hi) fail(errc::parse_error, "descending range '" + std::string(tok) + "'");
            const auto count = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
            if (count > detail::kMaxLiteralElems || elems.size() + count > detail::kMaxLiteralElems)
                fail(errc::parse_error, "set literal larger than " + std::to_string(detail::kMaxLiteralElems) + " elements");
            for (std::int64_t v = lo;; ++v) {
                elems.push_back(v);
                if (v == hi) break;
            }
        }
        if (elems.size() > detail::kMaxLiteralElems)
            fail(errc::parse_error, "set literal larger than " + std::to_string(detail::kMaxLiteralElems) + " elements");
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    return IntSet(std::move(elems));
}

inline std::string set_literal(const IntSet& s) {
    std::string out;
    const auto& e = s.elems();
    std::size_t i = 0;
    while (i < e.size()) {
        std::size_t j = i;
        while (j + 1 < e.size() && e[j + 1] == e[j] + 1) ++j;
        if (!out.empty()) out += ',';
        if (j - i >= 2) {
            out += std::to_string(e[i]);
            out += "..";
            out += std::to_string(e[j]);
        } else {
            out += std::to_string(e[i]);
            if (j > i) {
                out += ',';
                out += std::to_string(e[j]);
            }
        }
        i = j + 1;
    }
    return out;
}

} // namespace dlab

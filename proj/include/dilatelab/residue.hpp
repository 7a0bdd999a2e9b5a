#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "dilatelab/dilates.hpp"
#include "dilatelab/errors.hpp"
#include "dilatelab/intset.hpp"

namespace dlab {

// g[i] = gcd of the |coefficients| other than i. For k = 1 the empty gcd is 0,
// read as "mod 0" = no constraint; the bounds recursion owns that case and it
// is never user-facing.
struct CofactorGcds {
    std::vector<std::int64_t> g;
};

inline CofactorGcds cofactor_gcds(const DilateTuple& lambdas) {
    const auto& c = lambdas.coeffs();
    const std::size_t k = c.size();
    CofactorGcds out;
    out.g.resize(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t g = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            g = std::gcd(g, static_cast<std::uint64_t>(c[j] < 0 ? -c[j] : c[j]));
        }
        out.g[i] = static_cast<std::int64_t>(g);
    }
    // Both identities below follow from tuple coprimality; they are cheap and
    // guard the whole modular layer, so check rather than trust.
    for (std::size_t i = 0; i < k; ++i) {
        const std::uint64_t ci = static_cast<std::uint64_t>(c[i] < 0 ? -c[i] : c[i]);
        if (std::gcd(ci, static_cast<std::uint64_t>(out.g[i])) != 1)
            fail(errc::invalid_tuple, "cofactor gcd shares a factor with its coefficient");
        for (std::size_t j = i + 1; j < k; ++j)
            if (std::gcd(static_cast<std::uint64_t>(out.g[i]), static_cast<std::uint64_t>(out.g[j])) != 1)
                fail(errc::invalid_tuple, "cofactor gcds are not pairwise coprime");
    }
    return out;
}

struct ResidueClass {
    std::int64_t offset = 0; // a_j in [0, q)
    IntSet members;          // A_j = offset + q * quotient
    IntSet quotient;         // A'_j
};

struct ResiduePartition {
    std::int64_t modulus = 1;
    std::vector<ResidueClass> classes; // ordered by offset ascending
    std::size_t class_count() const noexcept { return classes.size(); }
};

namespace detail {

inline std::int64_t floor_mod(std::int64_t v, std::int64_t q) {
    const std::int64_t r = v % q;
    return r < 0 ? r + q : r;
}

} // namespace detail

inline ResiduePartition residue_partition(const IntSet& a, std::int64_t q) {
    if (q < 1) fail(errc::nonpositive_modulus, "modulus " + std::to_string(q));
    if (a.empty()) fail(errc::empty_operand, "partition of empty set");
    ResiduePartition out;
    out.modulus = q;
    std::map<std::int64_t, std::vector<std::int64_t>> by_residue; // keyed by offset, so ascending
    for (std::int64_t v : a) by_residue[detail::floor_mod(v, q)].push_back(v);
    out.classes.reserve(by_residue.size());
    for (auto& [r, m] : by_residue) {
        ResidueClass cls;
        cls.offset = r;
        std::vector<std::int64_t> quot;
        quot.reserve(m.size());
        for (std::int64_t v : m) quot.push_back((v - r) / q); // exact: v == r (mod q)
        cls.members = IntSet::from_sorted_unique(std::move(m));
        cls.quotient = IntSet::from_sorted_unique(std::move(quot));
        out.classes.push_back(std::move(cls));
    }
    return out;
}

// Fully distributed (FD) mod q: the set meets every residue class mod q.
inline bool is_fully_distributed(const IntSet& a, std::int64_t q) {
    if (q < 1) fail(errc::nonpositive_modulus, "modulus " + std::to_string(q));
    if (q == 1) return !a.empty();
    if (static_cast<std::uint64_t>(q) > a.size()) return false;
    std::vector<std::int64_t> residues;
    residues.reserve(a.size());
    for (std::int64_t v : a) residues.push_back(detail::floor_mod(v, q));
    std::sort(residues.begin(), residues.end());
    residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
    return residues.size() == static_cast<std::uint64_t>(q);
}

struct FineCell {
    std::int64_t offset = 0;               // p_e in [0, p)
    IntSet members;                        // P_e = offset + p * quotient
    IntSet quotient;                       // P'_e
    std::vector<std::size_t> coarse_index; // e -> (e_1,...,e_k): index into coarse[i].classes
};

// Partition of A mod p = prod g_i, with each cell tied back to the coarse
// classes it lies in. Cell = intersection of one class per cofactor modulus;
// the constructor re-derives that identity and refuses to return otherwise.
struct FinePartition {
    std::int64_t p = 1;
    std::vector<ResiduePartition> coarse; // coarse[i] = partition of A mod g_i
    std::vector<FineCell> cells;
    std::size_t cell_count() const noexcept { return cells.size(); }
};

inline FinePartition fine_partition(const DilateTuple& lambdas, const IntSet& a) {
    if (lambdas.k() < 2) fail(errc::k_too_small, "fine partition needs k >= 2");
    if (a.empty()) fail(errc::empty_operand, "partition of empty set");
    const CofactorGcds g = cofactor_gcds(lambdas);

    FinePartition out;
    __int128 p128 = 1;
    for (std::int64_t gi : g.g) p128 *= gi;
    out.p = detail::checked_i64(p128, "cofactor modulus product");

    out.coarse.reserve(g.g.size());
    for (std::int64_t gi : g.g) out.coarse.push_back(residue_partition(a, gi));

    ResiduePartition fine = residue_partition(a, out.p);
    out.cells.reserve(fine.classes.size());
    for (ResidueClass& cls : fine.classes) {
        FineCell cell;
        cell.offset = cls.offset;
        cell.members = std::move(cls.members);
        cell.quotient = std::move(cls.quotient);
        for (std::size_t i = 0; i < g.g.size(); ++i) {
            const std::int64_t residue = detail::floor_mod(cell.offset, g.g[i]);
            const auto& classes = out.coarse[i].classes;
            const auto it = std::lower_bound(classes.begin(), classes.end(), residue,
                                             [](const ResidueClass& c, std::int64_t r) { return c.offset < r; });
            if (it == classes.end() || it->offset != residue)
                fail(errc::index_range, "fine cell has no matching coarse class"); // unreachable for cells of A
            cell.coarse_index.push_back(static_cast<std::size_t>(it - classes.begin()));
        }
        // P_e must equal the intersection of its k coarse classes
        IntSet isect = out.coarse[0].classes[cell.coarse_index[0]].members;
        for (std::size_t i = 1; i < g.g.size(); ++i)
            isect = set_intersection(isect, out.coarse[i].classes[cell.coarse_index[i]].members);
        if (!(isect == cell.members))
            fail(errc::index_range, "fine cell is not the intersection of its coarse classes");
        out.cells.push_back(std::move(cell));
    }
    return out;
}

} // namespace dlab

#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "dilatelab/bignum.hpp"
#include "dilatelab/dilates.hpp"
#include "dilatelab/errors.hpp"
#include "dilatelab/residue.hpp"

namespace dlab {

// S = sum of |coefficients| and the k leave-one-out weights s_i = S - |l_i|.
struct WeightProfile {
    std::int64_t total = 0;
    std::vector<std::int64_t> leave_one_out;
};

inline WeightProfile weight_sum(const DilateTuple& lambdas) {
    WeightProfile out;
    __int128 s = 0;
    for (std::int64_t c : lambdas.coeffs()) s += c < 0 ? -static_cast<__int128>(c) : c;
    out.total = detail::checked_i64(s, "coefficient weight");
    out.leave_one_out.reserve(lambdas.k());
    for (std::int64_t c : lambdas.coeffs()) out.leave_one_out.push_back(out.total - (c < 0 ? -c : c));
    return out;
}

// Whether the constants C_{...} of the sub-tuple recursion are taken on the
// raw (k-1)-sub-tuples or on the g_i-normalized ones (l_j / g_i). The
// normalized reading is what the induction actually uses; raw is kept
// computable for comparison.
enum class SubTupleMode { normalized, raw };

struct LedgerEntry;

// Every constant of the bound formulas for one tuple, exact, plus the
// sub-tuple ledgers the recursion consumed. For k = 1 everything is zero.
struct ConstantLedger {
    std::vector<std::int64_t> coeffs;
    std::int64_t weight = 0;   // S
    BigInt product = 1;        // P = |l1 *...* lk|
    BigRat cprime = 0;         // sum_i g_i * C_sub(i)
    BigRat cdoubleprime = 0;   // P * (sum_i C_sub(i) + 1) / (k-1)
    BigRat cfinal = 0;         // C'' * P^(S^2)
    BigRat cclosed = 0;        // (1/3) * binom(k+1,2) * P^((k-1)S^2 + k-1)
    std::vector<LedgerEntry> derivation;

    BigInt cu(std::int64_t u) const { return bigpow(product, u); }
};

struct LedgerEntry {
    std::size_t index = 0; // which coordinate was dropped
    std::int64_t g = 0;    // the cofactor gcd used to normalize
    ConstantLedger sub;
};

namespace detail {

// Core recursion, also reachable with non-coprime tuples in raw mode; the
// public entry point validates the top-level tuple.
inline ConstantLedger constants_rec(const std::vector<std::int64_t>& coeffs, SubTupleMode mode) {
    ConstantLedger led;
    led.coeffs = coeffs;
    const std::size_t k = coeffs.size();
    __int128 s = 0;
    for (std::int64_t c : coeffs) s += c < 0 ? -static_cast<__int128>(c) : c;
    led.weight = checked_i64(s, "coefficient weight");
    led.product = 1;
    for (std::int64_t c : coeffs) led.product *= c < 0 ? -c : c;
    if (k == 1) return led; // all-zero constants seed the induction

    BigRat sub_sum = 0;
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t g = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (j != i) g = std::gcd(g, static_cast<std::uint64_t>(coeffs[j] < 0 ? -coeffs[j] : coeffs[j]));
        std::vector<std::int64_t> sub;
        sub.reserve(k - 1);
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            sub.push_back(mode == SubTupleMode::normalized ? coeffs[j] / static_cast<std::int64_t>(g)
                                                           : coeffs[j]);
        }
        LedgerEntry entry;
        entry.index = i;
        entry.g = static_cast<std::int64_t>(g);
        entry.sub = constants_rec(sub, mode);
        led.cprime += BigRat(entry.g) * entry.sub.cfinal;
        sub_sum += entry.sub.cfinal;
        led.derivation.push_back(std::move(entry));
    }
    const std::int64_t ssq = checked_i64(static_cast<__int128>(led.weight) * led.weight, "S^2");
    const std::int64_t closed_exp =
        checked_i64(static_cast<__int128>(k - 1) * ssq + static_cast<std::int64_t>(k) - 1, "closed-form exponent");
    led.cdoubleprime = BigRat(led.product) * (sub_sum + 1) / (static_cast<std::int64_t>(k) - 1);
    led.cfinal = led.cdoubleprime * BigRat(bigpow(led.product, ssq));
    led.cclosed = BigRat(binomial(static_cast<std::int64_t>(k) + 1, 2)) / 3 * BigRat(bigpow(led.product, closed_exp));
    return led;
}

} // namespace detail

inline ConstantLedger recursive_constants(const DilateTuple& lambdas,
                                          SubTupleMode mode = SubTupleMode::normalized) {
    return detail::constants_rec(lambdas.coeffs(), mode);
}

inline BigRat closed_form_constant(const DilateTuple& lambdas) {
    const std::size_t k = lambdas.k();
    if (k < 2) fail(errc::invalid_tuple, "closed-form constant needs k >= 2");
    const WeightProfile w = weight_sum(lambdas);
    BigInt p = 1;
    for (std::int64_t c : lambdas.coeffs()) p *= c < 0 ? -c : c;
    const std::int64_t exp = detail::checked_i64(
        static_cast<__int128>(k - 1) * w.total * w.total + static_cast<std::int64_t>(k) - 1, "closed-form exponent");
    return BigRat(binomial(static_cast<std::int64_t>(k) + 1, 2)) / 3 * BigRat(bigpow(p, exp));
}

// Induction-level lower bound: (u/S)*n - C''*P^u, valid for S <= u <= S^2.
// May be far below n; the vacuous flag says so.
struct PropBound {
    BigRat value = 0;
    bool vacuous = true;
};

inline PropBound prop_lower_bound(const DilateTuple& lambdas, std::int64_t n, std::int64_t u) {
    const WeightProfile w = weight_sum(lambdas);
    const __int128 ssq = static_cast<__int128>(w.total) * w.total;
    if (u < w.total || static_cast<__int128>(u) > ssq)
        fail(errc::u_range, "u = " + std::to_string(u) + " outside [S, S^2] for S = " + std::to_string(w.total));
    const ConstantLedger led = recursive_constants(lambdas);
    PropBound out;
    out.value = BigRat(u) / w.total * n - led.cdoubleprime * BigRat(led.cu(u));
    out.vacuous = out.value < n;
    return out;
}

// Size of the dilate sum of the interval {0..n-1}: S*n - (S-1). Together with
// the main bound this brackets the optimal additive constant.
inline std::int64_t interval_upper_bound(const DilateTuple& lambdas, std::int64_t n) {
    const WeightProfile w = weight_sum(lambdas);
    return detail::checked_i64(static_cast<__int128>(w.total) * n - (w.total - 1), "interval bound");
}

// Superadditivity bound on |A_1 + ... + A_k| from the sizes of the k
// leave-one-out sumsets: (sum_i sizes_i - 1) / (k - 1), exact rational.
inline BigRat gmr_bound(std::span<const std::int64_t> sizes) {
    if (sizes.size() < 2) fail(errc::k_too_small, "superadditivity bound needs k >= 2");
    BigInt total = 0;
    for (std::int64_t s : sizes) {
        if (s < 1) fail(errc::empty_operand, "nonpositive summand size");
        total += s;
    }
    return BigRat(total - 1) / (static_cast<std::int64_t>(sizes.size()) - 1);
}

} // namespace dlab

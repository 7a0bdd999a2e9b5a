#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

// Failure kinds are part of the library contract: the CLI maps them onto exit
// codes and tests match on the kind, never on message wording.
enum class errc {
    zero_scale,
    empty_operand,
    invalid_tuple,
    nonpositive_modulus,
    overflow,
    window_overflow,
    window_too_small,
    budget_exceeded,
    k_too_small,
    u_range,
    not_reduced,
    index_range,
    fd_hypothesis_fails,
    parse_error,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::zero_scale: return "ZeroScale";
    case errc::empty_operand: return "EmptyOperand";
    case errc::invalid_tuple: return "InvalidTuple";
    case errc::nonpositive_modulus: return "NonpositiveModulus";
    case errc::overflow: return "Overflow";
    case errc::window_overflow: return "WindowOverflow";
    case errc::window_too_small: return "WindowTooSmall";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::k_too_small: return "KTooSmall";
    case errc::u_range: return "URange";
    case errc::not_reduced: return "NotReduced";
    case errc::index_range: return "IndexRange";
    case errc::fd_hypothesis_fails: return "FDHypothesisFails";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc kind, const std::string& what)
        : std::runtime_error(std::string(errc_name(kind)) + ": " + what), kind_(kind) {}

    errc kind() const noexcept { return kind_; }

private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) { throw error(kind, what); }

} // namespace dlab

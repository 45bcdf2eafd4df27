#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace adsat {

/// A literal packed as 2*var + negated.
class Literal {
public:
    constexpr Literal() = default;
    constexpr Literal(std::uint32_t var, bool negated) : code_(var * 2 + (negated ? 1 : 0)) {}

    constexpr std::uint32_t var() const noexcept { return code_ >> 1; }
    constexpr bool negated() const noexcept { return code_ & 1; }
    constexpr std::uint32_t code() const noexcept { return code_; }
    constexpr Literal operator~() const noexcept { return from_code(code_ ^ 1); }

    /// Whether the literal is true when its variable takes `value`.
    constexpr bool satisfied_by(bool value) const noexcept { return value != negated(); }

    static constexpr Literal from_code(std::uint32_t code) {
        Literal l;
        l.code_ = code;
        return l;
    }

    friend constexpr bool operator==(Literal, Literal) = default;

private:
    std::uint32_t code_ = 0;
};

/// A CNF formula over n_vars variables. Clauses are stored flat; a clause never
/// mentions the same variable twice.
class CnfFormula {
public:
    CnfFormula() = default;
    explicit CnfFormula(std::uint32_t n_vars) : n_vars_(n_vars) {}

    std::uint32_t n_vars() const noexcept { return n_vars_; }
    std::size_t n_clauses() const noexcept { return offsets_.size() - 1; }
    std::size_t n_literals() const noexcept { return lits_.size(); }

    /// Appends a clause; throws InvalidInstance on out-of-range or repeated variables.
    void add_clause(std::span<const Literal> clause);

    std::span<const Literal> clause(std::size_t i) const {
        return std::span<const Literal>(lits_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }
    std::span<const Literal> literals() const noexcept { return lits_; }

    /// Toggles the polarity of the literal at flat position `pos`.
    void flip_literal(std::size_t pos) { lits_[pos] = ~lits_[pos]; }

    /// Evaluates every clause under a full assignment (one entry per variable).
    bool satisfied_by(std::span<const std::uint8_t> assignment) const;

    friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

private:
    std::uint32_t n_vars_ = 0;
    std::vector<Literal> lits_;
    std::vector<std::size_t> offsets_{0};
};

/// DIMACS CNF: "p cnf <vars> <clauses>" followed by 0-terminated clauses.
/// Comment lines start with 'c'. Clauses may span lines.
void write_dimacs(std::ostream& out, const CnfFormula& f);
CnfFormula read_dimacs(std::istream& in);

} // namespace adsat

#include "adsat/cnf.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "adsat/errors.hpp"

namespace adsat {

void CnfFormula::add_clause(std::span<const Literal> clause) {
    for (std::size_t i = 0; i < clause.size(); ++i) {
        if (clause[i].var() >= n_vars_) throw InvalidInstance("literal variable out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (clause[j].var() == clause[i].var())
                throw InvalidInstance("clause mentions a variable twice");
    }
    lits_.insert(lits_.end(), clause.begin(), clause.end());
    offsets_.push_back(lits_.size());
}

bool CnfFormula::satisfied_by(std::span<const std::uint8_t> assignment) const {
    for (std::size_t c = 0; c < n_clauses(); ++c) {
        bool sat = false;
        for (Literal l : clause(c)) {
            if (l.satisfied_by(assignment[l.var()] != 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

void write_dimacs(std::ostream& out, const CnfFormula& f) {
    out << "p cnf " << f.n_vars() << ' ' << f.n_clauses() << '\n';
    for (std::size_t c = 0; c < f.n_clauses(); ++c) {
        for (Literal l : f.clause(c)) {
            const long v = static_cast<long>(l.var()) + 1;
            out << (l.negated() ? -v : v) << ' ';
        }
        out << "0\n";
    }
}

CnfFormula read_dimacs(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    long declared_vars = 0, declared_clauses = 0;
    CnfFormula f;
    std::vector<Literal> current;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == 'c') continue;
        std::istringstream ss(line);
        if (line[first] == 'p') {
            if (have_header) throw ParseError("duplicate problem line", line_no);
            std::string p, fmt, extra;
            if (!(ss >> p >> fmt >> declared_vars >> declared_clauses) || p != "p" || fmt != "cnf" ||
                declared_vars < 0 || declared_clauses < 0 || (ss >> extra))
                throw ParseError("problem line must be 'p cnf <vars> <clauses>'", line_no);
            have_header = true;
            f = CnfFormula(static_cast<std::uint32_t>(declared_vars));
            continue;
        }
        if (!have_header) throw ParseError("clause before 'p cnf' header", line_no);
        std::string tok;
        while (ss >> tok) {
            long v;
            std::size_t used = 0;
            try {
                v = std::stol(tok, &used);
            } catch (const std::exception&) {
                throw ParseError("expected integer literal, got '" + tok + "'", line_no);
            }
            if (used != tok.size()) throw ParseError("expected integer literal, got '" + tok + "'", line_no);
            if (v == 0) {
                if (static_cast<long>(f.n_clauses()) >= declared_clauses)
                    throw ParseError("more clauses than declared", line_no);
                try {
                    f.add_clause(current);
                } catch (const InvalidInstance& e) {
                    throw ParseError(e.what(), line_no);
                }
                current.clear();
                continue;
            }
            const long var = v < 0 ? -v : v;
            if (var > declared_vars) throw ParseError("literal exceeds declared variable count", line_no);
            current.emplace_back(static_cast<std::uint32_t>(var - 1), v < 0);
        }
    }
    if (!have_header) throw ParseError("missing 'p cnf' header", line_no);
    if (!current.empty()) throw ParseError("last clause is not 0-terminated", line_no);
    if (static_cast<long>(f.n_clauses()) != declared_clauses)
        throw ParseError("fewer clauses than declared", line_no);
    return f;
}

} // namespace adsat

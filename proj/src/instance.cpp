#include "adsat/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "adsat/errors.hpp"

namespace adsat {

std::string to_string(EnsembleKind kind) {
    return kind == EnsembleKind::regular ? "regular" : "random";
}

EnsembleKind ensemble_kind_from_string(const std::string& s) {
    if (s == "random") return EnsembleKind::random_uniform;
    if (s == "regular") return EnsembleKind::regular;
    throw ParameterError("unknown ensemble kind '" + s + "'");
}

// ---------------------------------------------------------------------------
// AdsatInstance

AdsatInstance::AdsatInstance(std::size_t n_bits, std::size_t k, std::vector<Bit> slots,
                             EnsembleKind kind)
    : n_bits_(n_bits), k_(k), slots_(std::move(slots)), kind_(kind) {
    if (k_ == 0) throw InvalidInstance("clause width must be positive");
    if (slots_.size() % k_ != 0) throw InvalidInstance("slot count is not a multiple of k");
    for (Bit b : slots_)
        if (b >= n_bits_) throw InvalidInstance("bit index " + std::to_string(b) + " out of range");

    std::set<std::vector<Bit>> seen;
    for (std::size_t a = 0; a < n_clauses(); ++a) {
        auto key = clause_key(a);
        if (std::adjacent_find(key.begin(), key.end()) != key.end())
            throw InvalidInstance("clause " + std::to_string(a) + " repeats a bit");
        if (!seen.insert(std::move(key)).second)
            throw InvalidInstance("clause " + std::to_string(a) + " duplicates an earlier bit-set");
    }

    if (kind_ == EnsembleKind::regular) {
        const auto deg = degrees();
        if (!deg.empty() && std::any_of(deg.begin(), deg.end(), [&](auto d) { return d != deg[0]; }))
            throw InvalidInstance("regular instance has non-constant bit degree");
    }
}

std::vector<std::size_t> AdsatInstance::degrees() const {
    std::vector<std::size_t> deg(n_bits_, 0);
    for (Bit b : slots_) ++deg[b];
    return deg;
}

std::vector<std::vector<std::size_t>> AdsatInstance::occurrences() const {
    std::vector<std::vector<std::size_t>> occ(n_bits_);
    for (std::size_t e = 0; e < slots_.size(); ++e) occ[slots_[e]].push_back(e);
    return occ;
}

AdsatInstance AdsatInstance::prefix(std::size_t m) const {
    if (m > n_clauses()) throw ParameterError("prefix longer than instance");
    return AdsatInstance(n_bits_, k_, std::vector<Bit>(slots_.begin(), slots_.begin() + m * k_));
}

AdsatInstance AdsatInstance::extended(std::span<const Bit> extra) const {
    std::vector<Bit> all = slots_;
    all.insert(all.end(), extra.begin(), extra.end());
    return AdsatInstance(n_bits_, k_, std::move(all));
}

std::vector<Bit> AdsatInstance::clause_key(std::size_t a) const {
    auto c = clause(a);
    std::vector<Bit> key(c.begin(), c.end());
    std::sort(key.begin(), key.end());
    return key;
}

// ---------------------------------------------------------------------------
// NegationAssignment

NegationAssignment::NegationAssignment(const AdsatInstance& inst)
    : k_(inst.k()), values_(inst.n_edges(), 0), frozen_(compute_frozen_mask(inst)) {}

NegationAssignment::NegationAssignment(const AdsatInstance& inst, std::vector<std::uint8_t> values)
    : k_(inst.k()), values_(std::move(values)), frozen_(compute_frozen_mask(inst)) {
    if (values_.size() != inst.n_edges())
        throw InvalidInstance("negation shape does not match instance");
    for (auto& v : values_) {
        if (v > 1) throw InvalidInstance("negation value outside {0,1}");
    }
    if (!is_legal()) throw InvalidInstance("frozen edge carries a negation");
}

void NegationAssignment::set(std::size_t edge, bool v) {
    if (v && frozen_[edge]) throw InvalidInstance("attempt to negate a frozen edge");
    values_[edge] = v ? 1 : 0;
}

std::vector<std::size_t> NegationAssignment::free_edges() const {
    std::vector<std::size_t> out;
    out.reserve(values_.size());
    for (std::size_t e = 0; e < frozen_.size(); ++e)
        if (!frozen_[e]) out.push_back(e);
    return out;
}

std::size_t NegationAssignment::frozen_count() const {
    return static_cast<std::size_t>(std::count(frozen_.begin(), frozen_.end(), 1));
}

bool NegationAssignment::is_legal() const {
    for (std::size_t e = 0; e < values_.size(); ++e)
        if (frozen_[e] && values_[e]) return false;
    return true;
}

NegationAssignment NegationAssignment::prefix(std::size_t m) const {
    if (m > n_clauses()) throw ParameterError("prefix longer than assignment");
    NegationAssignment out;
    out.k_ = k_;
    out.values_.assign(values_.begin(), values_.begin() + m * k_);
    // First occurrences inside a prefix are the same edges as in the whole.
    out.frozen_.assign(frozen_.begin(), frozen_.begin() + m * k_);
    return out;
}

// ---------------------------------------------------------------------------
// Generation

std::size_t EnsembleParams::n_clauses() const {
    if (kind == EnsembleKind::regular) {
        if (k == 0 || (l_degree * n) % k != 0)
            throw ParameterError("L*N must be divisible by K for regular graphs");
        return l_degree * n / k;
    }
    const auto m = std::llround(alpha * static_cast<double>(n));
    if (m < 1) throw ParameterError("alpha*N rounds to zero clauses");
    return static_cast<std::size_t>(m);
}

std::uint64_t choose(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(r);
}

namespace {

// K distinct bits, uniformly, by partial rejection within the clause.
void draw_clause(std::size_t n, std::size_t k, Rng& rng, std::vector<Bit>& out) {
    out.clear();
    while (out.size() < k) {
        const auto b = static_cast<Bit>(rng.below(n));
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
    }
}

std::vector<Bit> sorted(std::vector<Bit> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

AdsatInstance generate_random_instance(std::size_t n, std::size_t m, std::size_t k, Rng& rng) {
    if (k == 0 || n < k) throw ParameterError("need N >= K >= 1");
    if (m > choose(n, k)) throw ParameterError("M exceeds the number of distinct clauses C(N,K)");
    if (m * k < n) throw ParameterError("K*M < N: every instance would have isolated bits");

    std::size_t attempts = 0;
    std::vector<Bit> clause;
    for (;;) {
        std::vector<Bit> slots;
        slots.reserve(m * k);
        std::set<std::vector<Bit>> seen;
        while (seen.size() < m) {
            if (++attempts > kRetryCap) throw RetryCapExceeded("random instance generation");
            draw_clause(n, k, rng, clause);
            if (seen.insert(sorted(clause)).second) slots.insert(slots.end(), clause.begin(), clause.end());
        }
        std::vector<bool> used(n, false);
        for (Bit b : slots) used[b] = true;
        if (std::all_of(used.begin(), used.end(), [](bool u) { return u; }))
            return AdsatInstance(n, k, std::move(slots));
        if (++attempts > kRetryCap) throw RetryCapExceeded("random instance generation");
    }
}

AdsatInstance generate_random_instance(const EnsembleParams& params, Rng& rng) {
    if (params.kind == EnsembleKind::regular)
        return generate_regular_instance(params.n, params.l_degree, params.k, rng);
    return generate_random_instance(params.n, params.n_clauses(), params.k, rng);
}

AdsatInstance generate_regular_instance(std::size_t n, std::size_t l_degree, std::size_t k,
                                        Rng& rng) {
    if (k == 0 || n < k) throw ParameterError("need N >= K >= 1");
    if (l_degree == 0) throw ParameterError("L must be positive");
    if ((l_degree * n) % k != 0) throw ParameterError("L*N must be divisible by K");
    const std::size_t m = l_degree * n / k;
    if (m > choose(n, k)) throw ParameterError("M exceeds the number of distinct clauses C(N,K)");

    std::vector<Bit> stubs;
    stubs.reserve(l_degree * n);
    for (Bit b = 0; b < n; ++b) stubs.insert(stubs.end(), l_degree, b);

    for (std::size_t attempt = 0; attempt < kRetryCap; ++attempt) {
        for (std::size_t i = stubs.size(); i > 1; --i) std::swap(stubs[i - 1], stubs[rng.below(i)]);
        bool ok = true;
        std::set<std::vector<Bit>> seen;
        for (std::size_t a = 0; a < m && ok; ++a) {
            std::vector<Bit> key(stubs.begin() + a * k, stubs.begin() + (a + 1) * k);
            std::sort(key.begin(), key.end());
            ok = std::adjacent_find(key.begin(), key.end()) == key.end() && seen.insert(key).second;
        }
        if (ok) return AdsatInstance(n, k, stubs, EnsembleKind::regular);
    }
    throw RetryCapExceeded("regular instance generation");
}

std::vector<Bit> draw_extra_clauses(const AdsatInstance& inst, std::size_t count, Rng& rng) {
    const std::size_t n = inst.n_bits(), k = inst.k();
    if (inst.n_clauses() + count > choose(n, k))
        throw ParameterError("expansion exceeds the number of distinct clauses C(N,K)");
    std::set<std::vector<Bit>> seen;
    for (std::size_t a = 0; a < inst.n_clauses(); ++a) seen.insert(inst.clause_key(a));

    std::vector<Bit> out;
    out.reserve(count * k);
    std::vector<Bit> clause;
    std::size_t attempts = 0;
    for (std::size_t added = 0; added < count;) {
        if (++attempts > kRetryCap) throw RetryCapExceeded("expansion clause generation");
        draw_clause(n, k, rng, clause);
        if (seen.insert(sorted(clause)).second) {
            out.insert(out.end(), clause.begin(), clause.end());
            ++added;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Negation initializations

std::vector<std::uint8_t> compute_frozen_mask(const AdsatInstance& inst) {
    std::vector<std::uint8_t> mask(inst.n_edges(), 0);
    std::vector<bool> seen(inst.n_bits(), false);
    const auto slots = inst.slots();
    for (std::size_t e = 0; e < slots.size(); ++e) {
        if (!seen[slots[e]]) {
            seen[slots[e]] = true;
            mask[e] = 1;
        }
    }
    return mask;
}

NegationAssignment random_balanced_negations(const AdsatInstance& inst, Rng& rng) {
    NegationAssignment neg(inst);
    for (auto& occ : inst.occurrences()) {
        if (occ.size() < 2) continue;
        // occ[0] is the frozen first occurrence; choose floor(d/2) of the rest.
        std::vector<std::size_t> pool(occ.begin() + 1, occ.end());
        const std::size_t want = occ.size() / 2;
        for (std::size_t i = 0; i < want; ++i) {
            std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
            neg.set(pool[i], true);
        }
    }
    return neg;
}

NegationAssignment alternately_balanced_negations(const AdsatInstance& inst) {
    NegationAssignment neg(inst);
    for (auto& occ : inst.occurrences())
        for (std::size_t i = 1; i < occ.size(); i += 2) neg.set(occ[i], true);
    return neg;
}

bool is_balanced(const AdsatInstance& inst, const NegationAssignment& neg) {
    for (auto& occ : inst.occurrences()) {
        long negated = 0;
        for (auto e : occ) negated += neg[e] ? 1 : 0;
        const long plain = static_cast<long>(occ.size()) - negated;
        if (std::abs(negated - plain) > 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

struct LineReader {
    std::istream& in;
    std::size_t line_no = 0;

    // Next non-blank, non-comment line split into tokens; false at EOF.
    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            tokens.clear();
            std::istringstream ss(line);
            for (std::string t; ss >> t;) tokens.push_back(t);
            return true;
        }
        return false;
    }
};

std::size_t parse_count(const std::string& tok, std::size_t line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("expected a non-negative integer, got '" + tok + "'", line);
    try {
        return static_cast<std::size_t>(std::stoull(tok));
    } catch (const std::exception&) {
        throw ParseError("integer out of range '" + tok + "'", line);
    }
}

} // namespace

void write_instance(std::ostream& out, const AdsatInstance& inst) {
    out << "adsat " << inst.n_bits() << ' ' << inst.n_clauses() << ' ' << inst.k() << ' '
        << to_string(inst.kind()) << '\n';
    for (std::size_t a = 0; a < inst.n_clauses(); ++a) {
        auto c = inst.clause(a);
        for (std::size_t j = 0; j < c.size(); ++j) out << (j ? " " : "") << c[j];
        out << '\n';
    }
}

AdsatInstance read_instance(std::istream& in) {
    LineReader reader{in};
    std::vector<std::string> tok;
    if (!reader.next(tok)) throw ParseError("missing 'adsat' header", reader.line_no);
    if (tok.size() != 5 || tok[0] != "adsat")
        throw ParseError("header must be 'adsat <N> <M> <K> <kind>'", reader.line_no);
    const auto n = parse_count(tok[1], reader.line_no);
    const auto m = parse_count(tok[2], reader.line_no);
    const auto k = parse_count(tok[3], reader.line_no);
    EnsembleKind kind;
    try {
        kind = ensemble_kind_from_string(tok[4]);
    } catch (const ParameterError& e) {
        throw ParseError(e.what(), reader.line_no);
    }
    if (k == 0) throw ParseError("K must be positive", reader.line_no);

    std::vector<Bit> slots;
    slots.reserve(m * k);
    for (std::size_t a = 0; a < m; ++a) {
        if (!reader.next(tok)) throw ParseError("expected " + std::to_string(m) + " clauses", reader.line_no);
        if (tok.size() != k)
            throw ParseError("clause must list exactly " + std::to_string(k) + " bits", reader.line_no);
        for (auto& t : tok) slots.push_back(static_cast<Bit>(parse_count(t, reader.line_no)));
    }
    if (reader.next(tok)) throw ParseError("trailing content after last clause", reader.line_no);
    try {
        return AdsatInstance(n, k, std::move(slots), kind);
    } catch (const InvalidInstance& e) {
        throw ParseError(e.what(), reader.line_no);
    }
}

AdsatInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return read_instance(in);
}

void save_instance(const std::string& path, const AdsatInstance& inst) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    write_instance(out, inst);
}

void write_negations(std::ostream& out, const NegationAssignment& neg) {
    out << "neg " << neg.n_clauses() << ' ' << neg.k() << '\n';
    for (std::size_t a = 0; a < neg.n_clauses(); ++a) {
        for (std::size_t j = 0; j < neg.k(); ++j) out << (j ? " " : "") << (neg.get(a, j) ? 1 : 0);
        out << '\n';
    }
}

NegationAssignment read_negations(std::istream& in, const AdsatInstance& inst) {
    LineReader reader{in};
    std::vector<std::string> tok;
    if (!reader.next(tok)) throw ParseError("missing 'neg' header", reader.line_no);
    if (tok.size() != 3 || tok[0] != "neg") throw ParseError("header must be 'neg <M> <K>'", reader.line_no);
    const auto m = parse_count(tok[1], reader.line_no);
    const auto k = parse_count(tok[2], reader.line_no);
    if (m != inst.n_clauses() || k != inst.k())
        throw ParseError("negation shape does not match instance", reader.line_no);

    std::vector<std::uint8_t> values;
    values.reserve(m * k);
    for (std::size_t a = 0; a < m; ++a) {
        if (!reader.next(tok)) throw ParseError("expected " + std::to_string(m) + " rows", reader.line_no);
        if (tok.size() != k) throw ParseError("row must have exactly K values", reader.line_no);
        for (auto& t : tok) {
            if (t != "0" && t != "1") throw ParseError("negation values must be 0 or 1", reader.line_no);
            values.push_back(t == "1" ? 1 : 0);
        }
    }
    if (reader.next(tok)) throw ParseError("trailing content after last row", reader.line_no);
    try {
        return NegationAssignment(inst, std::move(values));
    } catch (const InvalidInstance& e) {
        throw ParseError(e.what(), reader.line_no);
    }
}

} // namespace adsat

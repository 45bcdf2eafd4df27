#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adsat/rng.hpp"

namespace adsat {

using Bit = std::uint32_t;

enum class EnsembleKind { random_uniform, regular };

std::string to_string(EnsembleKind kind);
EnsembleKind ensemble_kind_from_string(const std::string& s);

/// The clause/variable graph of an AdSAT formula: which bit occupies which
/// clause slot. Negations are not part of the graph.
///
/// Clauses are stored flat, clause a occupying slots [a*k, (a+1)*k). The
/// constructor enforces: bits in range, distinct bits within a clause, and
/// pairwise distinct clause bit-sets. For EnsembleKind::regular every bit
/// must also have the same degree.
class AdsatInstance {
public:
    AdsatInstance(std::size_t n_bits, std::size_t k, std::vector<Bit> slots,
                  EnsembleKind kind = EnsembleKind::random_uniform);

    std::size_t n_bits() const noexcept { return n_bits_; }
    std::size_t n_clauses() const noexcept { return k_ == 0 ? 0 : slots_.size() / k_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t n_edges() const noexcept { return slots_.size(); }
    EnsembleKind kind() const noexcept { return kind_; }
    double alpha() const noexcept {
        return static_cast<double>(n_clauses()) / static_cast<double>(n_bits_);
    }

    std::span<const Bit> clause(std::size_t a) const {
        return std::span<const Bit>(slots_).subspan(a * k_, k_);
    }
    Bit bit(std::size_t a, std::size_t j) const { return slots_[a * k_ + j]; }
    std::span<const Bit> slots() const noexcept { return slots_; }

    /// Number of clauses containing each bit.
    std::vector<std::size_t> degrees() const;
    /// Edge indices (a*k + j) of each bit, in clause order.
    std::vector<std::vector<std::size_t>> occurrences() const;

    /// The instance made of the first `m` clauses (kind becomes random_uniform).
    AdsatInstance prefix(std::size_t m) const;
    /// This instance followed by `extra` clauses given as flat slots.
    AdsatInstance extended(std::span<const Bit> extra) const;

    /// Canonical key of a clause: its sorted bit indices.
    std::vector<Bit> clause_key(std::size_t a) const;

    friend bool operator==(const AdsatInstance&, const AdsatInstance&) = default;

private:
    std::size_t n_bits_;
    std::size_t k_;
    std::vector<Bit> slots_;
    EnsembleKind kind_;
};

/// One boolean per clause slot (1 = the literal is negated) plus the mask of
/// frozen first-occurrence edges, which are always 0.
class NegationAssignment {
public:
    NegationAssignment() = default;
    /// All-zero assignment with the frozen mask of `inst`.
    explicit NegationAssignment(const AdsatInstance& inst);
    /// Explicit values; throws InvalidInstance if a frozen edge is set.
    NegationAssignment(const AdsatInstance& inst, std::vector<std::uint8_t> values);

    std::size_t n_clauses() const noexcept { return k_ == 0 ? 0 : values_.size() / k_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t size() const noexcept { return values_.size(); }

    bool operator[](std::size_t edge) const { return values_[edge] != 0; }
    bool get(std::size_t a, std::size_t j) const { return values_[a * k_ + j] != 0; }
    bool frozen(std::size_t edge) const { return frozen_[edge] != 0; }

    void set(std::size_t edge, bool v);
    void flip(std::size_t edge) { set(edge, !(*this)[edge]); }

    std::span<const std::uint8_t> values() const noexcept { return values_; }
    std::span<const std::uint8_t> frozen_mask() const noexcept { return frozen_; }
    std::vector<std::size_t> free_edges() const;
    std::size_t frozen_count() const;

    /// True when every frozen edge holds 0.
    bool is_legal() const;
    bool matches(const AdsatInstance& inst) const {
        return inst.k() == k_ && inst.n_edges() == values_.size();
    }

    /// Restriction to the first `m` clauses.
    NegationAssignment prefix(std::size_t m) const;

    friend bool operator==(const NegationAssignment&, const NegationAssignment&) = default;

private:
    std::size_t k_ = 0;
    std::vector<std::uint8_t> values_;
    std::vector<std::uint8_t> frozen_;
};

/// Ensemble parameters. Exactly one of alpha / l_degree is used, selected by
/// kind.
struct EnsembleParams {
    std::size_t n = 0;
    std::size_t k = 3;
    EnsembleKind kind = EnsembleKind::random_uniform;
    double alpha = 0.0;
    std::size_t l_degree = 0;
    std::uint64_t seed = 0;

    /// M = round(alpha * N) for the random ensemble, L*N/K for regular graphs.
    std::size_t n_clauses() const;
};

/// Attempts allowed to every rejection sampler before RetryCapExceeded.
inline constexpr std::size_t kRetryCap = 1'000'000;

/// Binomial coefficient C(n, k), saturating at UINT64_MAX.
std::uint64_t choose(std::size_t n, std::size_t k);

/// Uniform random instance: each clause is a uniformly drawn K-subset, duplicate
/// subsets and instances with isolated bits are redrawn.
AdsatInstance generate_random_instance(std::size_t n, std::size_t m, std::size_t k, Rng& rng);
AdsatInstance generate_random_instance(const EnsembleParams& params, Rng& rng);

/// L-regular instance via the configuration model with whole-instance rejection.
AdsatInstance generate_regular_instance(std::size_t n, std::size_t l_degree, std::size_t k,
                                        Rng& rng);

/// Draws `count` new uniformly random clauses whose bit-sets differ from each
/// other and from every clause of `inst`; returns their flat slots.
std::vector<Bit> draw_extra_clauses(const AdsatInstance& inst, std::size_t count, Rng& rng);

/// Frozen mask: one edge per used bit, at its first occurrence scanning
/// clauses then slots in index order.
std::vector<std::uint8_t> compute_frozen_mask(const AdsatInstance& inst);

/// Every bit of degree d gets floor(d/2) negations, placed uniformly at random
/// among its free edges.
NegationAssignment random_balanced_negations(const AdsatInstance& inst, Rng& rng);

/// Negations 0,1,0,1,... along each bit's occurrences in clause order. The
/// frozen first occurrence fixes the phase, so the result is deterministic.
NegationAssignment alternately_balanced_negations(const AdsatInstance& inst);

/// |#negated - #plain| <= 1 for every bit.
bool is_balanced(const AdsatInstance& inst, const NegationAssignment& neg);

// Text formats.
//
//   instance:  "adsat <N> <M> <K> <kind>" then M lines of K bit indices
//   negations: "neg <M> <K>" then M lines of K values in {0,1}
//
// kind is "random" or "regular". Blank lines and lines starting with '#'
// are ignored; anything else that deviates raises ParseError.
void write_instance(std::ostream& out, const AdsatInstance& inst);
AdsatInstance read_instance(std::istream& in);
AdsatInstance load_instance(const std::string& path);
void save_instance(const std::string& path, const AdsatInstance& inst);

void write_negations(std::ostream& out, const NegationAssignment& neg);
NegationAssignment read_negations(std::istream& in, const AdsatInstance& inst);

} // namespace adsat

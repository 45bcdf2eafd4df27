#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "adsat/errors.hpp"
#include "adsat/instance.hpp"

using namespace adsat;

namespace {

AdsatInstance make(std::size_t n, std::size_t k, std::vector<Bit> slots) {
    return AdsatInstance(n, k, std::move(slots));
}

void expect_valid(const AdsatInstance& inst) {
    std::set<std::vector<Bit>> keys;
    for (std::size_t a = 0; a < inst.n_clauses(); ++a) {
        auto key = inst.clause_key(a);
        EXPECT_EQ(std::adjacent_find(key.begin(), key.end()), key.end());
        for (auto b : key) EXPECT_LT(b, inst.n_bits());
        EXPECT_TRUE(keys.insert(key).second);
    }
}

std::vector<int> pattern_of(const AdsatInstance& inst, const NegationAssignment& neg, Bit bit) {
    const auto occ = inst.occurrences();
    std::vector<int> out;
    for (auto e : occ[bit]) out.push_back(neg[e]);
    return out;
}

} // namespace

TEST(Instance, RejectsBadClauses) {
    EXPECT_THROW(make(3, 3, {0, 1, 3}), InvalidInstance);
    EXPECT_THROW(make(3, 3, {0, 1, 1}), InvalidInstance);
    EXPECT_THROW(make(4, 3, {0, 1, 2, 2, 0, 1}), InvalidInstance);   // same bit-set
    EXPECT_NO_THROW(make(4, 3, {0, 1, 2, 1, 2, 3}));
}

TEST(Instance, RegularKindChecksDegrees) {
    EXPECT_THROW(AdsatInstance(4, 3, {0, 1, 2, 1, 2, 3}, EnsembleKind::regular), InvalidInstance);
    EXPECT_NO_THROW(AdsatInstance(3, 3, {0, 1, 2}, EnsembleKind::regular));
}

TEST(Generate, SingleForcedClause) {
    Rng rng(5);
    const auto inst = generate_random_instance(3, 1, 3, rng);
    ASSERT_EQ(inst.n_clauses(), 1u);
    EXPECT_EQ(inst.clause_key(0), (std::vector<Bit>{0, 1, 2}));
}

TEST(Generate, AlphaOneAtSeven) {
    Rng rng(11);
    const auto inst = generate_random_instance(EnsembleParams{7, 3, EnsembleKind::random_uniform, 1.0, 0, 11}, rng);
    EXPECT_EQ(inst.n_clauses(), 7u);
    EXPECT_EQ(inst.k(), 3u);
    expect_valid(inst);
}

TEST(Generate, SameSeedSameInstance) {
    const EnsembleParams p{20, 3, EnsembleKind::random_uniform, 1.6, 0, 42};
    Rng a(42), b(42);
    const auto x = generate_random_instance(p, a);
    const auto y = generate_random_instance(p, b);
    EXPECT_EQ(x, y);
    EXPECT_EQ(x.n_clauses(), 32u);
    Rng ra(7), rb(7);
    EXPECT_EQ(random_balanced_negations(x, ra), random_balanced_negations(y, rb));
}

TEST(Generate, ParameterErrors) {
    Rng rng(1);
    EXPECT_THROW(generate_random_instance(2, 1, 3, rng), ParameterError);
    EXPECT_THROW(generate_random_instance(4, 5, 3, rng), ParameterError);   // C(4,3) = 4
    EXPECT_THROW((EnsembleParams{10, 3, EnsembleKind::random_uniform, 0.0, 0, 0}.n_clauses()), ParameterError);
    EXPECT_THROW(generate_regular_instance(10, 2, 3, rng), ParameterError);
}

TEST(Generate, AllSubsetsWhenMEqualsChoose) {
    Rng rng(3);
    const auto inst = generate_random_instance(5, 10, 3, rng);
    expect_valid(inst);
    EXPECT_EQ(inst.n_clauses(), 10u);
}

TEST(Generate, NoIsolatedBits) {
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const auto inst = generate_random_instance(12, 4, 3, rng);
        for (auto d : inst.degrees()) EXPECT_GE(d, 1u);
    }
}

TEST(Generate, RegularExamples) {
    Rng rng(2);
    struct Case { std::size_t n, l, m; };
    for (const auto c : {Case{9, 7, 21}, Case{18, 6, 36}, Case{3, 1, 1}}) {
        const auto inst = generate_regular_instance(c.n, c.l, 3, rng);
        EXPECT_EQ(inst.n_clauses(), c.m);
        EXPECT_EQ(inst.kind(), EnsembleKind::regular);
        for (auto d : inst.degrees()) EXPECT_EQ(d, c.l);
        expect_valid(inst);
    }
    const auto l6 = generate_regular_instance(18, 6, 3, rng);
    EXPECT_DOUBLE_EQ(l6.alpha(), 2.0);
}

TEST(Generate, RegularDegreesAcrossSeeds) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(s);
        const auto inst = generate_regular_instance(12, 5, 3, rng);
        for (auto d : inst.degrees()) ASSERT_EQ(d, 5u);
    }
}

TEST(Generate, ExtraClausesAreNew) {
    Rng rng(4);
    const auto inst = generate_random_instance(8, 10, 3, rng);
    const auto extra = draw_extra_clauses(inst, 6, rng);
    const auto big = inst.extended(extra);   // constructor rejects duplicates
    EXPECT_EQ(big.n_clauses(), 16u);
    EXPECT_EQ(big.prefix(10), inst);
    EXPECT_THROW(draw_extra_clauses(inst, 47, rng), ParameterError);   // C(8,3) = 56
}

TEST(Frozen, Examples) {
    const auto one = make(3, 3, {0, 1, 2});
    NegationAssignment neg(one);
    EXPECT_EQ(neg.frozen_count(), 3u);
    EXPECT_TRUE(neg.free_edges().empty());

    // bit 5 first appears in clause 2
    const auto inst = make(6, 3, {0, 1, 2, 0, 1, 3, 4, 5, 0, 1, 2, 3, 2, 3, 4, 0, 3, 5});
    const auto mask = compute_frozen_mask(inst);
    EXPECT_EQ(mask[2 * 3 + 1], 1);
    EXPECT_EQ(mask[5 * 3 + 2], 0);
    std::size_t frozen = 0;
    for (auto f : mask) frozen += f;
    EXPECT_EQ(frozen, 6u);
}

TEST(Frozen, CountEqualsNOverManyInstances) {
    Rng rng(123);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 5 + rng.below(16);
        const std::size_t m = n + rng.below(3 * n);
        const auto inst = generate_random_instance(n, std::min<std::size_t>(m, choose(n, 3)), 3, rng);
        NegationAssignment neg(inst);
        ASSERT_EQ(neg.frozen_count(), n);
        ASSERT_EQ(neg.free_edges().size(), 3 * inst.n_clauses() - n);
    }
}

TEST(Frozen, SevenBitsTwentyOneEdges) {
    Rng rng(8);
    const auto inst = generate_random_instance(7, 7, 3, rng);
    NegationAssignment neg(inst);
    EXPECT_EQ(neg.frozen_count(), 7u);
    EXPECT_EQ(neg.free_edges().size(), 14u);
}

TEST(Frozen, IsolatedBitInLoadedFile) {
    std::istringstream in("adsat 4 1 3 random\n0 1 2\n");
    const auto inst = read_instance(in);
    EXPECT_EQ(NegationAssignment(inst).frozen_count(), 3u);
}

TEST(Negations, FrozenEdgesCannotBeSet) {
    const auto inst = make(4, 3, {0, 1, 2, 1, 2, 3});
    NegationAssignment neg(inst);
    EXPECT_THROW(neg.set(0, true), InvalidInstance);
    neg.set(3, true);
    EXPECT_TRUE(neg[3]);
    EXPECT_TRUE(neg.is_legal());
    EXPECT_THROW(NegationAssignment(inst, {1, 0, 0, 0, 0, 0}), InvalidInstance);
    EXPECT_THROW(NegationAssignment(inst, {0, 0, 0}), InvalidInstance);
}

TEST(Balanced, DegreeRules) {
    // bit 0 degree 4, bit 1 degree 3, bit 6 degree 1
    const auto inst = make(7, 3, {0, 1, 2, 0, 1, 3, 0, 1, 4, 0, 5, 6});
    for (std::uint64_t s = 0; s < 50; ++s) {
        Rng rng(s);
        const auto neg = random_balanced_negations(inst, rng);
        const auto p0 = pattern_of(inst, neg, 0);
        const auto p1 = pattern_of(inst, neg, 1);
        EXPECT_EQ(std::count(p0.begin(), p0.end(), 1), 2);
        EXPECT_EQ(std::count(p1.begin(), p1.end(), 1), 1);
        EXPECT_EQ(pattern_of(inst, neg, 6), (std::vector<int>{0}));
        EXPECT_TRUE(neg.is_legal());
        EXPECT_TRUE(is_balanced(inst, neg));
    }
}

TEST(Balanced, OddDegreeFloorIsOptimal) {
    // Degree 3 with the first edge pinned to 0: every legal choice of 1 or 2
    // negations has imbalance 1, none has less, so floor(3/2) loses nothing.
    for (unsigned free = 0; free < 4; ++free) {
        const int neg = __builtin_popcount(free);
        const int imbalance = std::abs(neg - (3 - neg));
        if (neg == 1 || neg == 2) EXPECT_EQ(imbalance, 1);
        else EXPECT_EQ(imbalance, 3);
    }
}

TEST(Balanced, ChoiceIsUniform) {
    // Degree-4 bit: 2 negations among its 3 free edges, three choices.
    const auto inst = make(6, 3, {0, 1, 2, 0, 3, 4, 0, 1, 5, 0, 2, 3});
    std::map<std::vector<int>, int> seen;
    Rng rng(77);
    const int draws = 6000;
    for (int i = 0; i < draws; ++i) ++seen[pattern_of(inst, random_balanced_negations(inst, rng), 0)];
    ASSERT_EQ(seen.size(), 3u);
    for (const auto& [p, c] : seen) EXPECT_NEAR(c, draws / 3.0, 150.0);
}

TEST(Alternating, Examples) {
    // bit 0 in clauses 1, 4, 9
    std::vector<Bit> slots;
    const std::vector<std::vector<Bit>> clauses{{1, 2, 3}, {0, 1, 2}, {1, 3, 4}, {2, 3, 4}, {0, 3, 4},
                                                {1, 2, 4}, {1, 2, 5}, {3, 4, 5}, {2, 4, 5}, {0, 1, 5}};
    for (const auto& c : clauses) slots.insert(slots.end(), c.begin(), c.end());
    const auto inst = make(6, 3, slots);
    const auto neg = alternately_balanced_negations(inst);
    EXPECT_EQ(pattern_of(inst, neg, 0), (std::vector<int>{0, 1, 0}));
    EXPECT_EQ(pattern_of(inst.prefix(9), neg.prefix(9), 0), (std::vector<int>{0, 1}));
    EXPECT_TRUE(neg.is_legal());
    EXPECT_TRUE(is_balanced(inst, neg));

    const auto single = make(3, 3, {0, 1, 2});
    EXPECT_EQ(alternately_balanced_negations(single), NegationAssignment(single));
}

TEST(Alternating, PrefixesCommute) {
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        const auto inst = generate_random_instance(10, 25, 3, rng);
        const auto full = alternately_balanced_negations(inst);
        for (std::size_t s = 1; s <= inst.n_clauses(); ++s) {
            const auto sub = inst.prefix(s);
            ASSERT_EQ(full.prefix(s).values().size(), sub.n_edges());
            ASSERT_TRUE(std::ranges::equal(full.prefix(s).values(), alternately_balanced_negations(sub).values()));
        }
    }
}

TEST(Balance, UnbalancedWitness) {
    // bit 0 with degree 5: negated on all 4 free edges
    const auto inst = make(7, 3, {0, 1, 2, 0, 3, 4, 0, 5, 6, 0, 1, 3, 0, 2, 4});
    std::vector<std::uint8_t> v(inst.n_edges(), 0);
    for (std::size_t a = 1; a < 5; ++a) v[a * 3] = 1;
    EXPECT_FALSE(is_balanced(inst, NegationAssignment(inst, v)));
    EXPECT_TRUE(is_balanced(make(3, 3, {0, 1, 2}), NegationAssignment(make(3, 3, {0, 1, 2}))));
}

TEST(Io, InstanceRoundTrip) {
    Rng rng(6);
    const auto inst = generate_regular_instance(9, 4, 3, rng);
    std::stringstream ss;
    write_instance(ss, inst);
    EXPECT_EQ(read_instance(ss), inst);
}

TEST(Io, NegationRoundTrip) {
    Rng rng(6);
    const auto inst = generate_random_instance(9, 14, 3, rng);
    const auto neg = random_balanced_negations(inst, rng);
    std::stringstream ss;
    write_negations(ss, neg);
    EXPECT_EQ(read_negations(ss, inst), neg);
}

TEST(Io, CommentsAndBlankLines) {
    std::istringstream in("# made by hand\nadsat 4 2 3 random\n\n0 1 2\n# mid\n1 2 3\n");
    const auto inst = read_instance(in);
    EXPECT_EQ(inst.n_clauses(), 2u);
}

TEST(Io, RejectsDeviations) {
    for (const char* text : {"adsat 4 2 3 random\n0 1 2\n",             // too few clauses
                             "adsat 4 1 3 random\n0 1 2 3\n",           // too many fields
                             "adsat 4 1 3 random\n0 1 x\n",             // not a number
                             "adsat 4 1 3 planted\n0 1 2\n",            // unknown kind
                             "sat 4 1 3 random\n0 1 2\n",               // bad tag
                             "adsat 4 1 3 random\n0 1 2\n1 2 3\n",      // trailing clause
                             "adsat 4 1 3 random\n0 1 -2\n"}) {
        std::istringstream in(text);
        EXPECT_THROW(read_instance(in), Error) << text;
    }
    std::istringstream in("adsat 4 2 3 random\n0 1 2\n0 2 1\n");
    EXPECT_THROW(read_instance(in), Error);   // duplicate bit-set

    const auto inst = make(4, 3, {0, 1, 2, 1, 2, 3});
    for (const char* text : {"neg 2 3\n0 0 0\n0 0 2\n", "neg 2 3\n1 0 0\n0 0 0\n", "neg 1 3\n0 0 0\n"}) {
        std::istringstream nin(text);
        EXPECT_THROW(read_negations(nin, inst), Error) << text;
    }
}

TEST(Io, ParseErrorCarriesLine) {
    std::istringstream in("adsat 4 2 3 random\n# note\n0 1 2\n0 1 x\n");
    try {
        read_instance(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

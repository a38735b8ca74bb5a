#include <doctest.h>

#include <set>
#include <vector>

#include "ergo/spaces.hpp"
#include "ergo/splitmix.hpp"
#include "test_util.hpp"

using namespace ergo;
using testutil::random_partition;
using testutil::random_permutation;

namespace {

// Intersection oracle for refine: build blocks as literal set intersections,
// then renumber by smallest member.
std::vector<std::vector<std::size_t>> slow_refine(const Partition& p, const Partition& q) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& pb : p.blocks()) {
        for (const auto& qb : q.blocks()) {
            std::vector<std::size_t> inter;
            std::set<std::size_t> qset(qb.begin(), qb.end());
            for (std::size_t x : pb)
                if (qset.count(x)) inter.push_back(x);
            if (!inter.empty()) out.push_back(inter);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace

TEST_CASE("space construction validates weights") {
    CHECK_THROWS_AS(FiniteProbabilitySpace({Rational(1, 2)}), ErgoError);
    CHECK_THROWS_AS(FiniteProbabilitySpace({Rational(1, 2), Rational(0), Rational(1, 2)}),
                    ErgoError);
    CHECK_THROWS_AS(FiniteProbabilitySpace(std::vector<Rational>{}), ErgoError);
    CHECK_NOTHROW(FiniteProbabilitySpace({Rational(1, 3), Rational(2, 3)}));
    CHECK(FiniteProbabilitySpace::uniform(4).weight(3) == Rational(1, 4));
}

TEST_CASE("automorphism validation and algebra") {
    CHECK_THROWS_AS(Automorphism({0, 0}), ErgoError);
    CHECK_THROWS_AS(Automorphism({0, 2}), ErgoError);
    const auto c = Automorphism::from_cycle(4, {0, 1, 2});
    CHECK(c(0) == 1);
    CHECK(c(2) == 0);
    CHECK(c(3) == 3);
    CHECK(compose(invert(c), c) == Automorphism::identity(4));
    CHECK(compose(c, compose(c, c)) == Automorphism::identity(4));

    SplitMix64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto f = random_permutation(rng, 9);
        const auto g = random_permutation(rng, 9);
        const auto h = random_permutation(rng, 9);
        CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
        CHECK(compose(f, invert(f)) == Automorphism::identity(9));
    }
}

TEST_CASE("measure preservation is weight equality along the permutation") {
    const FiniteProbabilitySpace space({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    CHECK(preserves_measure(space, Automorphism::from_cycle(3, {1, 2})));
    CHECK_FALSE(preserves_measure(space, Automorphism::from_cycle(3, {0, 1})));
    CHECK(preserves_measure(space, Automorphism::identity(3)));
}

TEST_CASE("product space weights multiply in row-major order") {
    const auto y = FiniteProbabilitySpace({Rational(1, 3), Rational(2, 3)});
    const auto one = FiniteProbabilitySpace::uniform(1);
    CHECK(product_space(one, y).weights() == y.weights());

    const auto u2 = FiniteProbabilitySpace::uniform(2);
    const auto u3 = FiniteProbabilitySpace::uniform(3);
    CHECK(same_space(product_space(u2, u3), FiniteProbabilitySpace::uniform(6)));

    const auto halves = FiniteProbabilitySpace({Rational(1, 2), Rational(1, 2)});
    const auto prod = product_space(halves, y);
    CHECK(prod.weights() ==
          std::vector<Rational>{Rational(1, 6), Rational(1, 3), Rational(1, 6), Rational(1, 3)});
    CHECK(prod.weight(pair_atom(1, 0, 2)) == Rational(1, 6));
}

TEST_CASE("partition canonical form is blocks numbered by smallest atom") {
    const Partition p({7, 7, 3, 3, 9});
    CHECK(p.block_ids() == std::vector<int>{0, 0, 1, 1, 2});
    CHECK(p.block_count() == 3);
    // Any relabeling of block names canonicalizes to the same thing.
    CHECK(Partition({1, 1, 0, 0, 2}) == p);
    CHECK(Partition({5, 5, 2, 2, 0}) == p);
    CHECK(p.blocks() == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}, {4}});
}

TEST_CASE("from_blocks requires an exact cover") {
    CHECK(Partition::from_blocks(4, {{0, 1}, {2, 3}}).block_count() == 2);
    CHECK_THROWS_AS(Partition::from_blocks(4, {{0, 1}, {1, 2, 3}}), BlockOutOfRange);
    CHECK_THROWS_AS(Partition::from_blocks(4, {{0, 1}, {2}}), BlockOutOfRange);
    CHECK_THROWS_AS(Partition::from_blocks(4, {{0, 1}, {2, 4}}), BlockOutOfRange);
}

TEST_CASE("refine matches the intersection oracle") {
    const Partition p = Partition::from_blocks(4, {{0, 1}, {2, 3}});
    const Partition q = Partition::from_blocks(4, {{0, 2}, {1, 3}});
    CHECK(is_discrete(refine(p, q)));

    const Partition p2 = Partition::from_blocks(4, {{0, 1, 2}, {3}});
    const Partition q2 = Partition::from_blocks(4, {{0}, {1, 2, 3}});
    CHECK(refine(p2, q2) == Partition::from_blocks(4, {{0}, {1, 2}, {3}}));

    SplitMix64 rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t atoms = 2 + rng.below(14);
        const auto a = random_partition(rng, atoms, 4);
        const auto b = random_partition(rng, atoms, 4);
        CHECK(refine(a, b).blocks() == slow_refine(a, b));
    }
}

TEST_CASE("refine laws") {
    SplitMix64 rng(1234);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t atoms = 2 + rng.below(12);
        const auto p = random_partition(rng, atoms, 5);
        const auto q = random_partition(rng, atoms, 5);
        const auto r = random_partition(rng, atoms, 5);
        CHECK(refine(p, q) == refine(q, p));
        CHECK(refine(p, p) == p);
        CHECK(refine(refine(p, q), r) == refine(p, refine(q, r)));
        CHECK(refine(p, Partition::trivial(atoms)) == p);
        CHECK(refine(p, Partition::discrete(atoms)) == Partition::discrete(atoms));
    }
    CHECK_THROWS_AS(refine(Partition::trivial(3), Partition::trivial(4)), SizeMismatch);
}

TEST_CASE("orbit partition from permutations") {
    CHECK(orbit_partition(5, {}) == Partition::discrete(5));
    CHECK(is_trivial(orbit_partition(3, {Automorphism::from_cycle(3, {0, 1, 2})})));
    CHECK(orbit_partition(4, {Automorphism::from_cycle(4, {0, 1}), Automorphism::from_cycle(4, {2, 3})}) ==
          Partition::from_blocks(4, {{0, 1}, {2, 3}}));
    CHECK_THROWS_AS(orbit_partition(3, {Automorphism::identity(4)}), SizeMismatch);
}

TEST_CASE("orbit partition is stable under inverses and conjugates") {
    SplitMix64 rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t atoms = 3 + rng.below(10);
        const auto f = random_permutation(rng, atoms);
        const auto g = random_permutation(rng, atoms);
        const auto base = orbit_partition(atoms, {f, g});
        CHECK(orbit_partition(atoms, {invert(f), g}) == base);
        CHECK(orbit_partition(atoms, {f, g, compose(f, g)}) == base);
        // Conjugating g by f stays inside the generated group.
        CHECK(orbit_partition(atoms, {f, compose(f, compose(g, invert(f)))}) == base);
    }
}

TEST_CASE("block measures sum atom weights exactly") {
    const auto space = FiniteProbabilitySpace::uniform(4);
    CHECK(block_measure(space, Partition::trivial(4), 0) == 1);
    CHECK(block_measure(space, Partition::discrete(4), 2) == Rational(1, 4));
    CHECK(block_measure(space, Partition::from_blocks(4, {{0, 1}, {2, 3}}), 0) == Rational(1, 2));
    CHECK_THROWS_AS(block_measure(space, Partition::trivial(4), 1), BlockOutOfRange);
}

TEST_CASE("quotient pushes the measure onto blocks") {
    const auto space = FiniteProbabilitySpace::uniform(6);
    const auto mod2 = Partition::from_blocks(6, {{0, 2, 4}, {1, 3, 5}});
    const auto q = quotient(space, mod2);
    CHECK(same_space(q.space, FiniteProbabilitySpace::uniform(2)));
    CHECK(q.factor_map == std::vector<int>{0, 1, 0, 1, 0, 1});

    const auto disc = quotient(space, Partition::discrete(6));
    CHECK(same_space(disc.space, space));
    const auto triv = quotient(space, Partition::trivial(6));
    CHECK(triv.space.atom_count() == 1);

    SplitMix64 rng(31337);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t atoms = 2 + rng.below(10);
        const auto p = random_partition(rng, atoms, 4);
        const auto res = quotient(FiniteProbabilitySpace::uniform(atoms), p);
        Rational total = 0;
        for (const auto& w : res.space.weights()) total += w;
        CHECK(total == 1);
        for (std::size_t b = 0; b < p.block_count(); ++b)
            CHECK(res.space.weight(b) ==
                  block_measure(FiniteProbabilitySpace::uniform(atoms), p, b));
    }
}

TEST_CASE("trivial and discrete detection") {
    CHECK(is_trivial(Partition::trivial(5)));
    CHECK_FALSE(is_discrete(Partition::trivial(5)));
    CHECK(is_discrete(Partition::discrete(5)));
    CHECK_FALSE(is_trivial(Partition::discrete(5)));
    const Partition mixed({0, 0, 1});
    CHECK_FALSE(is_trivial(mixed));
    CHECK_FALSE(is_discrete(mixed));
    CHECK(is_trivial(Partition::discrete(1)));
    CHECK(is_discrete(Partition::trivial(1)));
}

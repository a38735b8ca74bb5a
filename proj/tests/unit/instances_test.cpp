#include <doctest.h>

#include <set>

#include "ergo/actions.hpp"
#include "ergo/instances.hpp"
#include "ergo/rational.hpp"
#include "ergo/splitmix.hpp"

using namespace ergo;

TEST_CASE("instance generators are deterministic per seed") {
    SplitMix64 a(2026);
    SplitMix64 b(2026);
    for (int trial = 0; trial < 10; ++trial) {
        auto pa = random_ergodic_pair(a, 8, 48);
        auto pb = random_ergodic_pair(b, 8, 48);
        REQUIRE(same_group(*pa.left().group(), *pb.left().group()));
        REQUIRE(same_space(pa.left().space(), pb.left().space()));
        REQUIRE(pa.left().generator_images() == pb.left().generator_images());
        REQUIRE(pa.right().generator_images() == pb.right().generator_images());
    }
    auto ma = random_rational_measure(a, GroupDescriptor::free_group(2));
    auto mb = random_rational_measure(b, GroupDescriptor::free_group(2));
    REQUIRE(ma.weights() == mb.weights());
}

TEST_CASE("random ergodic actions are ergodic across sizes") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t atoms = 1 + rng.below(16);
        auto action = random_ergodic_action(rng, atoms);
        CAPTURE(trial);
        CAPTURE(atoms);
        REQUIRE(action.space().atom_count() == atoms);
        REQUIRE(is_ergodic(action));
    }
}

TEST_CASE("random ergodic pairs are jointly ergodic within the atom range") {
    SplitMix64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        auto pair = random_ergodic_pair(rng, 8, 48);
        CAPTURE(trial);
        const std::size_t atoms = pair.left().space().atom_count();
        REQUIRE(atoms >= 8);
        REQUIRE(atoms <= 48);
        REQUIRE(is_ergodic(pair.as_product_action()));
    }
}

TEST_CASE("weight-preserving shuffles respect weight classes") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        auto space = random_weighted_space(rng, 10);
        auto sigma = random_weight_preserving(rng, space);
        REQUIRE(preserves_measure(space, sigma));
        for (std::size_t atom = 0; atom < space.atom_count(); ++atom) {
            REQUIRE(space.weight(sigma(atom)) == space.weight(atom));
        }
    }
}

TEST_CASE("random free actions are free and conjugation keeps ergodicity") {
    SplitMix64 rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        auto action = random_free_finite_action(rng);
        CAPTURE(trial);
        auto report = is_free(action);
        REQUIRE(report.free);
    }
    auto base = random_ergodic_action(rng, 9);
    auto sigma = random_permutation(rng, 9);
    REQUIRE(is_ergodic(conjugate(base, sigma)));
}

TEST_CASE("random measures normalize and live on the requested group") {
    SplitMix64 rng(15);
    const auto groups = {GroupDescriptor::free_group(2), GroupDescriptor::cyclic(6),
                         GroupDescriptor::product(GroupDescriptor::free_group(1),
                                                  GroupDescriptor::cyclic(4))};
    for (const auto& group : groups) {
        for (int trial = 0; trial < 20; ++trial) {
            auto measure = random_rational_measure(rng, group, 5);
            REQUIRE(same_group(*measure.group(), *group));
            Rational total = 0;
            for (const auto& [g, mass] : measure.weights()) total += mass;
            REQUIRE(total == Rational(1));
        }
    }
}

TEST_CASE("short pair elements stay within word length two") {
    SplitMix64 rng(16);
    auto product = GroupDescriptor::product(GroupDescriptor::free_group(1),
                                            GroupDescriptor::cyclic(5));
    for (int trial = 0; trial < 20; ++trial) {
        auto phi = random_short_pair_element(rng, product, 5);
        for (const auto& [g, coefficient] : phi.coefficients()) {
            const auto& left = g.first();
            REQUIRE(left.letters().size() <= 1);
        }
    }
    REQUIRE_THROWS_AS(random_short_pair_element(rng, GroupDescriptor::free_group(2), 3),
                      DescriptorMismatch);
}

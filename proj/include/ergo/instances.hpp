#pragma once

#include "ergo/actions.hpp"
#include "ergo/groups.hpp"
#include "ergo/koopman.hpp"
#include "ergo/spaces.hpp"
#include "ergo/splitmix.hpp"

namespace ergo {

// Seeded instance generators for the property batteries.  Every draw comes
// from the passed stream, so one seed pins each battery exactly; generators
// consume a variable number of draws, which keeps instances independent of
// call-site reordering only when streams are forked per instance.

FiniteSupportMeasure random_rational_measure(SplitMix64& rng, const GroupPtr& group,
                                             std::size_t max_support = 4);

// Random rational weights on 2..max_atoms atoms.
FiniteProbabilitySpace random_weighted_space(SplitMix64& rng, std::size_t max_atoms);

Automorphism random_permutation(SplitMix64& rng, std::size_t size);

// Shuffles inside each weight-equality class, so the result preserves the
// weights by construction.
Automorphism random_weight_preserving(SplitMix64& rng, const FiniteProbabilitySpace& space);

// The action with every generator image conjugated by sigma.
PmpAction conjugate(const PmpAction& action, const Automorphism& sigma);

// Ergodic action on a uniform space: a full cycle always sits among the
// generator images.  Rotates between a one-generator free action, a
// cyclic-group translation, and a rank-2 free action with one extra random
// permutation, each scrambled by conjugation.
PmpAction random_ergodic_action(SplitMix64& rng, std::size_t atoms);

// Jointly ergodic commuting pair with atom count in [min_atoms, max_atoms]:
// plain local products, conjugated local products, and commuting
// translation pairs living on one cycle.
CommutingPair random_ergodic_pair(SplitMix64& rng, std::size_t min_atoms,
                                  std::size_t max_atoms);

// Free cyclic-group action: disjoint regular orbits, conjugated.
PmpAction random_free_finite_action(SplitMix64& rng);

// Element of the product group ring supported on pairs whose coordinates
// are the identity or a first generator letter, so word length stays at
// most two.
GroupRingElement random_short_pair_element(SplitMix64& rng, const GroupPtr& product_group,
                                           std::size_t support);

}  // namespace ergo

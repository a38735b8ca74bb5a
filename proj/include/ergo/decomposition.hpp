#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ergo/actions.hpp"
#include "ergo/spaces.hpp"

namespace ergo {

// Factor of an action through its orbit partition.  Blocks are exactly the
// ergodic components: each is invariant, carries positive mass, and the
// action restricted to it has trivial invariants.
struct ErgodicDecomposition {
    PmpAction source;
    Partition partition;              // orbit partition of the source
    FiniteProbabilitySpace quotient;  // one atom per component, block masses
    std::vector<int> factor_map;      // atom -> component
};

ErgodicDecomposition ergodic_decomposition(const PmpAction& action);

// The right action pushed down to the left action's component space.  Each
// right generator must map left-orbit blocks onto blocks; an atom pair
// landing in different blocks throws OrbitNotPermuted naming the generator
// and atom, and signals a commutation violation upstream.  The result
// preserves the component masses.
PmpAction induced_action(const CommutingPair& pair);

// Exact test that mu(C intersect D) = mu(C) mu(D) for every block pair.
// Blocks generate the two algebras and both sides are additive in C and D,
// so block-level equality settles the full statement.
bool check_independence(const FiniteProbabilitySpace& space, const Partition& p,
                        const Partition& q);

// Joint structure of a commuting pair relative to the components of its two
// factor actions.
struct SynergodicReport {
    CommutingPair pair;
    Partition part_a;  // components of the left action
    Partition part_b;  // components of the right action
    Partition join;    // common refinement: the algebra both generate
    bool ergodic = false;
    // canonical_map[x] = (component of x on the left, component on the right)
    std::vector<std::pair<int, int>> canonical_map;
    // Image of the space measure under the canonical map, indexed row-major
    // over component pairs (a, b) as a * |E_B| + b.
    std::vector<Rational> pushforward;
    bool independence = false;  // pushforward equals the product of the
                                // component measures, exactly
    bool synergodic = false;    // ergodic and the join is discrete
};

SynergodicReport synergodic_decomposition(const CommutingPair& pair);

// Plain-text rendering used by the decompose command: block structures,
// exact component masses, boolean verdicts.
std::string render_synergodic_report(const SynergodicReport& report);

// Checks that an ergodic pair factors onto the local product of its two
// induced component actions through the canonical map: the image measure is
// the product measure, and the map commutes with every generator on every
// atom.  Violations carry witnesses; the list stays empty when the pair is
// genuinely ergodic and commuting.
struct CanonicalFactorReport {
    SynergodicReport decomposition;
    PmpAction component_action_left;   // left group on the right components
    PmpAction component_action_right;  // right group on the left components
    bool pushforward_matches = false;
    bool intertwines = false;
    std::vector<std::string> violations;
    bool passed() const { return violations.empty(); }
};

CanonicalFactorReport verify_canonical_factorization(const CommutingPair& pair);

// Builds the local product of two ergodic actions and checks it is
// synergodic with component partitions equal to the coordinate fibers:
// left components are the slices X x {y}, right components the slices
// {x} x Y.
struct LocalProductReport {
    CommutingPair pair;  // the constructed local product
    SynergodicReport decomposition;
    bool fibers_left = false;
    bool fibers_right = false;
    std::vector<std::string> violations;
    bool passed() const { return violations.empty(); }
};

LocalProductReport verify_local_product_structure(const PmpAction& a, const PmpAction& b);

}  // namespace ergo

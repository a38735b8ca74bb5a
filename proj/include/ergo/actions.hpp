#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ergo/groups.hpp"
#include "ergo/spaces.hpp"

namespace ergo {

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Measure-preserving action given by one permutation per distinguished
// generator.  Construction verifies weight preservation for every image,
// the homomorphism property on the full table for finite kinds, and
// left/right commutation for product kinds; `unchecked` skips verification
// so that loaders and tests can build broken actions and run validate() on
// them.
class PmpAction {
public:
    PmpAction(GroupPtr group, FiniteProbabilitySpace space, std::vector<Automorphism> generator_images);

    static PmpAction unchecked(GroupPtr group, FiniteProbabilitySpace space,
                               std::vector<Automorphism> generator_images);

    const GroupPtr& group() const { return group_; }
    const FiniteProbabilitySpace& space() const { return space_; }
    const std::vector<Automorphism>& generator_images() const { return generator_images_; }

    // Image of an arbitrary element.  Words evaluate as compositions with
    // the leftmost letter applied last: the image of gh is (image of g)
    // after (image of h).
    Automorphism automorphism(const GroupElement& g) const;

    // automorphism(g) applied to one atom, without materializing the
    // permutation for word kinds.
    std::size_t apply(const GroupElement& g, std::size_t atom) const;

    // Product kind only: the restriction to one factor acting on the same
    // space.
    const PmpAction& left_restriction() const;
    const PmpAction& right_restriction() const;

    // Finite kind only: images of all elements, indexed by element index.
    const std::vector<Automorphism>& element_images() const;

private:
    PmpAction() = default;
    static PmpAction build(GroupPtr group, FiniteProbabilitySpace space,
                           std::vector<Automorphism> images, bool verify);

    GroupPtr group_;
    FiniteProbabilitySpace space_{{Rational(1)}};
    std::vector<Automorphism> generator_images_;
    std::vector<Automorphism> element_images_;          // finite kind
    std::shared_ptr<const PmpAction> left_sub_;         // product kind
    std::shared_ptr<const PmpAction> right_sub_;        // product kind

    friend ValidationReport validate(const PmpAction& action);
};

// act(action, g, x): x moved by the image of g.
std::size_t act(const PmpAction& action, const GroupElement& g, std::size_t atom);

// Verified pair of commuting actions of possibly different groups on one
// space.  Commutation is checked on generator pairs, which extends to the
// generated groups.
class CommutingPair {
public:
    CommutingPair(PmpAction left, PmpAction right);

    static CommutingPair unchecked(PmpAction left, PmpAction right);

    const PmpAction& left() const { return left_; }
    const PmpAction& right() const { return right_; }
    const FiniteProbabilitySpace& space() const { return left_.space(); }

    // The same data as one action of Product(G, H).
    PmpAction as_product_action() const;

private:
    CommutingPair(PmpAction left, PmpAction right, bool verify);

    PmpAction left_;
    PmpAction right_;
};

// Every generator fixes every atom.
PmpAction trivial_action(const GroupPtr& group, FiniteProbabilitySpace space);

// Same group acting componentwise on the product space.
PmpAction diagonal(const PmpAction& a, const PmpAction& b);

// Actions of G on X and H on Y assembled into the commuting pair on X x Y
// where the left action moves only the first coordinate and the right
// action only the second.
CommutingPair local_product(const PmpAction& a, const PmpAction& b);

inline constexpr std::size_t kDefaultAtomCap = 1000000;

struct BernoulliPair {
    CommutingPair pair;      // left and right translation shifts
    Automorphism involution; // J: configuration g -> value at g^-1; J L^g J = R^g
};

// Configuration space base^G for a finite-order group G: atom index reads
// the configuration as base-|base| digits in element order (element 0 is the
// most significant digit).  Throws SizeCapExceeded past atom_cap atoms.
BernoulliPair bernoulli_pair(const GroupPtr& group, const FiniteProbabilitySpace& base,
                             std::size_t atom_cap = kDefaultAtomCap);

// Generator-indexed fiber permutations over a base action, verified to
// satisfy the cocycle equation: value(gh, x) = value(g, hx) after
// value(h, x).  Finite kinds verify on the full table; product kinds verify
// factor cocycles plus the cross relation on generator pairs; free kinds
// have nothing to verify.  Every value must preserve the fiber measure.
class Cocycle {
public:
    // values[i][y]: fiber automorphism for generator i at base atom y.
    Cocycle(PmpAction base, FiniteProbabilitySpace fiber,
            std::vector<std::vector<Automorphism>> values);

    const PmpAction& base() const { return base_; }
    const FiniteProbabilitySpace& fiber() const { return fiber_; }

    Automorphism generator_value(std::size_t gen, std::size_t base_atom) const;
    // Extension to an arbitrary element via the cocycle equation.
    Automorphism value(const GroupElement& g, std::size_t base_atom) const;

private:
    PmpAction base_;
    FiniteProbabilitySpace fiber_{{Rational(1)}};
    std::vector<std::vector<Automorphism>> values_;
    std::vector<std::vector<Automorphism>> element_values_;  // finite kind
    std::shared_ptr<const Cocycle> left_sub_;                // product kind
    std::shared_ptr<const Cocycle> right_sub_;
};

// Action on (base x fiber) by g: (y, z) -> (base^g y, value(g, y) z).
// Projection onto the base coordinate is a factor map onto the base action.
PmpAction skew_product(const Cocycle& cocycle);

struct FreenessResult {
    bool free = false;
    // A nontrivial element whose image fixes a positive-measure set, when
    // not free.
    std::optional<GroupElement> witness;
};

// Exhaustive for finite-order groups.  Free-kind actors on a finite space
// are never free: the first generator's image has finite order m, so a1^m
// is a nontrivial kernel element and is returned as witness.  Products with
// an infinite factor inherit that witness.
FreenessResult is_free(const PmpAction& action);

// Orbit partition of the generator images: the finite-space form of the
// invariant sigma-algebra.
Partition invariant_partition(const PmpAction& action);
Partition invariant_partition(const CommutingPair& pair);

bool is_ergodic(const PmpAction& action);
bool is_ergodic(const CommutingPair& pair);

// Reporting re-check of the construction invariants: weight preservation
// per generator, full-table homomorphism for finite kinds, commutation for
// pairs.  Violations carry witnesses; empty report means valid.
ValidationReport validate(const PmpAction& action);
ValidationReport validate(const CommutingPair& pair);

}  // namespace ergo

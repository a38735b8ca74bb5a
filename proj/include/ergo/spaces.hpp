#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ergo/errors.hpp"
#include "ergo/rational.hpp"

namespace ergo {

// Finite standard probability space: atoms 0..N-1 with strictly positive
// rational weights summing to 1.  With no null atoms, "invariant mod null
// sets" coincides with exact set invariance, so every sigma-algebra question
// below is exact combinatorics.
class FiniteProbabilitySpace {
public:
    explicit FiniteProbabilitySpace(std::vector<Rational> weights,
                                    std::vector<std::string> labels = {});

    static FiniteProbabilitySpace uniform(std::size_t atom_count);

    std::size_t atom_count() const { return weights_.size(); }
    const Rational& weight(std::size_t atom) const;
    const std::vector<Rational>& weights() const { return weights_; }

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<std::string>& labels() const { return labels_; }
    // Display label: the stored one, or the atom index.
    std::string label(std::size_t atom) const;

private:
    std::vector<Rational> weights_;
    std::vector<std::string> labels_;
};

// Equal atom counts and exactly equal weights; labels are display-only and
// do not participate.
bool same_space(const FiniteProbabilitySpace& a, const FiniteProbabilitySpace& b);

// Permutation of atom indices.  Measure preservation is a property relative
// to a space and is checked where actions are built; see preserves_measure.
class Automorphism {
public:
    explicit Automorphism(std::vector<std::size_t> images);

    static Automorphism identity(std::size_t size);
    // Cycle constructor: maps cycle[i] to cycle[i+1] (wrapping), fixes the rest.
    static Automorphism from_cycle(std::size_t size, const std::vector<std::size_t>& cycle);

    std::size_t size() const { return images_.size(); }
    std::size_t operator()(std::size_t atom) const { return images_[atom]; }
    const std::vector<std::size_t>& images() const { return images_; }

private:
    std::vector<std::size_t> images_;
};

bool operator==(const Automorphism& a, const Automorphism& b);
inline bool operator!=(const Automorphism& a, const Automorphism& b) { return !(a == b); }

// f after g: (compose(f, g))(x) = f(g(x)).
Automorphism compose(const Automorphism& f, const Automorphism& g);
Automorphism invert(const Automorphism& f);
bool preserves_measure(const FiniteProbabilitySpace& space, const Automorphism& f);

// Partition of the atoms, always held in canonical form: blocks numbered
// 0..B-1 by their smallest contained atom index.  Canonical form makes
// partition equality plain integer-vector equality.
class Partition {
public:
    // Canonicalizes any surjective-or-not labeling of atoms by integers.
    Partition(std::vector<int> block_id);

    static Partition trivial(std::size_t atom_count);
    static Partition discrete(std::size_t atom_count);
    // Blocks must cover 0..N-1 exactly once; throws BlockOutOfRange.
    static Partition from_blocks(std::size_t atom_count,
                                 const std::vector<std::vector<std::size_t>>& blocks);

    std::size_t atom_count() const { return block_id_.size(); }
    std::size_t block_count() const { return block_count_; }
    int block_of(std::size_t atom) const;
    const std::vector<int>& block_ids() const { return block_id_; }
    // Blocks in canonical order, atoms ascending inside each.
    std::vector<std::vector<std::size_t>> blocks() const;

private:
    std::vector<int> block_id_;
    std::size_t block_count_ = 0;
};

bool operator==(const Partition& a, const Partition& b);
inline bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }

bool is_trivial(const Partition& p);
bool is_discrete(const Partition& p);

// Product space with atoms (x, y) in row-major order x * |Y| + y and product
// weights.
FiniteProbabilitySpace product_space(const FiniteProbabilitySpace& x,
                                     const FiniteProbabilitySpace& y);

inline std::size_t pair_atom(std::size_t x, std::size_t y, std::size_t y_count) {
    return x * y_count + y;
}

// Common refinement: blocks are the nonempty intersections of P-blocks with
// Q-blocks.  This is the join of the two partitions, i.e. the generated
// sigma-algebra.
Partition refine(const Partition& p, const Partition& q);

// Connected components of the union of the permutation graphs; the empty
// list yields the discrete partition.  Union-find with path compression.
Partition orbit_partition(std::size_t atom_count, const std::vector<Automorphism>& perms);

// Exact mass of block b.
Rational block_measure(const FiniteProbabilitySpace& space, const Partition& p, std::size_t block);

struct QuotientResult {
    FiniteProbabilitySpace space;       // one atom per block, block masses
    std::vector<int> factor_map;        // atom -> quotient atom (block id)
};

// Factor space of the partition; the factor map pushes the measure forward
// onto the block masses exactly.
QuotientResult quotient(const FiniteProbabilitySpace& space, const Partition& p);

}  // namespace ergo

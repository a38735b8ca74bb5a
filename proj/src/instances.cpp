#include "ergo/instances.hpp"

#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "ergo/errors.hpp"

namespace ergo {

namespace {

// Fisher-Yates over an index list.
void shuffle_indices(SplitMix64& rng, std::vector<std::size_t>& indices) {
    for (std::size_t i = indices.size(); i > 1; --i) {
        std::swap(indices[i - 1], indices[rng.below(i)]);
    }
}

// Full cycle visiting the atoms in a random order.
Automorphism random_cycle(SplitMix64& rng, std::size_t atoms) {
    std::vector<std::size_t> order(atoms);
    for (std::size_t i = 0; i < atoms; ++i) order[i] = i;
    shuffle_indices(rng, order);
    return Automorphism::from_cycle(atoms, order);
}

Automorphism shift_by(std::size_t atoms, std::size_t step) {
    std::vector<std::size_t> images(atoms);
    for (std::size_t x = 0; x < atoms; ++x) images[x] = (x + step) % atoms;
    return Automorphism(std::move(images));
}

}  // namespace

FiniteSupportMeasure random_rational_measure(SplitMix64& rng, const GroupPtr& group,
                                             std::size_t max_support) {
    const std::size_t support = 1 + rng.below(max_support);
    std::vector<std::pair<GroupElement, long>> picks;
    long total = 0;
    for (std::size_t i = 0; i < support; ++i) {
        const long mass = 1 + static_cast<long>(rng.below(9));
        GroupElement g = [&] {
            switch (group->kind()) {
                case GroupKind::finite:
                    return GroupElement::finite(
                        group, static_cast<int>(rng.below(
                                   static_cast<std::uint64_t>(group->order()))));
                case GroupKind::free_group: {
                    std::vector<int> letters;
                    const std::size_t length = rng.below(4);
                    for (std::size_t k = 0; k < length; ++k) {
                        int letter = 1 + static_cast<int>(rng.below(
                                             static_cast<std::uint64_t>(group->rank())));
                        if (rng.below(2)) letter = -letter;
                        letters.push_back(letter);
                    }
                    return GroupElement::word(group, std::move(letters));
                }
                case GroupKind::product: {
                    auto left = random_rational_measure(rng, group->left(), 1);
                    auto right = random_rational_measure(rng, group->right(), 1);
                    return GroupElement::pair(group, left.weights().begin()->first,
                                              right.weights().begin()->first);
                }
            }
            throw ErgoError("unreachable group kind");
        }();
        picks.emplace_back(std::move(g), mass);
        total += mass;
    }
    FiniteSupportMeasure::WeightMap weights;
    for (auto& [g, mass] : picks) {
        Rational share(mass, total);
        share.canonicalize();
        weights[g] += share;
    }
    return FiniteSupportMeasure(group, std::move(weights));
}

FiniteProbabilitySpace random_weighted_space(SplitMix64& rng, std::size_t max_atoms) {
    const std::size_t atoms = 2 + rng.below(max_atoms - 1);
    std::vector<long> raw(atoms);
    long total = 0;
    for (auto& value : raw) {
        value = 1 + static_cast<long>(rng.below(9));
        total += value;
    }
    std::vector<Rational> weights;
    for (long value : raw) {
        Rational share(value, total);
        share.canonicalize();
        weights.push_back(share);
    }
    return FiniteProbabilitySpace(std::move(weights));
}

Automorphism random_permutation(SplitMix64& rng, std::size_t size) {
    std::vector<std::size_t> images(size);
    for (std::size_t i = 0; i < size; ++i) images[i] = i;
    shuffle_indices(rng, images);
    return Automorphism(std::move(images));
}

Automorphism random_weight_preserving(SplitMix64& rng, const FiniteProbabilitySpace& space) {
    std::map<Rational, std::vector<std::size_t>> classes;
    for (std::size_t atom = 0; atom < space.atom_count(); ++atom) {
        classes[space.weight(atom)].push_back(atom);
    }
    std::vector<std::size_t> images(space.atom_count());
    for (auto& [weight, atoms] : classes) {
        std::vector<std::size_t> targets = atoms;
        shuffle_indices(rng, targets);
        for (std::size_t i = 0; i < atoms.size(); ++i) images[atoms[i]] = targets[i];
    }
    return Automorphism(std::move(images));
}

PmpAction conjugate(const PmpAction& action, const Automorphism& sigma) {
    const Automorphism inverse_sigma = invert(sigma);
    std::vector<Automorphism> images;
    for (const auto& image : action.generator_images()) {
        images.push_back(compose(sigma, compose(image, inverse_sigma)));
    }
    return PmpAction(action.group(), action.space(), std::move(images));
}

PmpAction random_ergodic_action(SplitMix64& rng, std::size_t atoms) {
    auto space = FiniteProbabilitySpace::uniform(atoms);
    Automorphism cycle = random_cycle(rng, atoms);
    const auto kind = atoms < 2 ? 0 : rng.below(3);
    switch (kind) {
        case 0:
            return PmpAction(GroupDescriptor::free_group(1), std::move(space), {std::move(cycle)});
        case 1:
            return PmpAction(GroupDescriptor::cyclic(static_cast<int>(atoms)), std::move(space),
                             {std::move(cycle)});
        default:
            return PmpAction(GroupDescriptor::free_group(2), std::move(space),
                             {std::move(cycle), random_permutation(rng, atoms)});
    }
}

CommutingPair random_ergodic_pair(SplitMix64& rng, std::size_t min_atoms,
                                  std::size_t max_atoms) {
    const auto mode = rng.below(3);
    if (mode == 2) {
        // Two translation steps on one cycle; joint ergodicity needs the
        // steps and the length to be coprime as a triple.
        const std::size_t atoms = min_atoms + rng.below(max_atoms - min_atoms + 1);
        std::size_t s = 0;
        std::size_t t = 0;
        do {
            s = 1 + rng.below(atoms - 1);
            t = 1 + rng.below(atoms - 1);
        } while (std::gcd(std::gcd(s, t), atoms) != 1);
        const Automorphism sigma = random_permutation(rng, atoms);
        auto space = FiniteProbabilitySpace::uniform(atoms);
        auto z = GroupDescriptor::free_group(1);
        PmpAction left = conjugate(PmpAction(z, space, {shift_by(atoms, s)}), sigma);
        PmpAction right = conjugate(PmpAction(z, space, {shift_by(atoms, t)}), sigma);
        return CommutingPair(std::move(left), std::move(right));
    }

    std::size_t na = 0;
    std::size_t nb = 0;
    do {
        na = 2 + rng.below(7);
        nb = 2 + rng.below(7);
    } while (na * nb < min_atoms || na * nb > max_atoms);
    CommutingPair pair =
        local_product(random_ergodic_action(rng, na), random_ergodic_action(rng, nb));
    if (mode == 0) return pair;
    const Automorphism sigma = random_permutation(rng, na * nb);
    return CommutingPair(conjugate(pair.left(), sigma), conjugate(pair.right(), sigma));
}

PmpAction random_free_finite_action(SplitMix64& rng) {
    const std::size_t order = 2 + rng.below(5);
    const std::size_t copies = 1 + rng.below(2);
    const std::size_t atoms = order * copies;
    std::vector<std::size_t> images(atoms);
    for (std::size_t copy = 0; copy < copies; ++copy) {
        for (std::size_t j = 0; j < order; ++j) {
            images[copy * order + j] = copy * order + (j + 1) % order;
        }
    }
    PmpAction regular(GroupDescriptor::cyclic(static_cast<int>(order)),
                      FiniteProbabilitySpace::uniform(atoms), {Automorphism(std::move(images))});
    return conjugate(regular, random_permutation(rng, atoms));
}

GroupRingElement random_short_pair_element(SplitMix64& rng, const GroupPtr& product_group,
                                           std::size_t support) {
    if (product_group->kind() != GroupKind::product) {
        throw DescriptorMismatch("short pair elements need a product group");
    }
    const auto short_factor = [&](const GroupPtr& factor) {
        const auto pick = rng.below(3);
        if (pick == 0) return GroupElement::identity(factor);
        const GroupElement generator = factor->generators().front();
        return pick == 1 ? generator : inverse(generator);
    };
    GroupRingElement phi(product_group);
    for (std::size_t i = 0; i < support; ++i) {
        const Complex coefficient(static_cast<double>(rng.below(9)) - 4.0,
                                  (static_cast<double>(rng.below(9)) - 4.0) / 2.0);
        phi.add(GroupElement::pair(product_group, short_factor(product_group->left()),
                                   short_factor(product_group->right())),
                coefficient);
    }
    return phi;
}

}  // namespace ergo

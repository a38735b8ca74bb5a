#include "ergo/spaces.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace ergo {

FiniteProbabilitySpace::FiniteProbabilitySpace(std::vector<Rational> weights,
                                               std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
    if (weights_.empty()) throw ErgoError("space needs at least one atom");
    if (!labels_.empty() && labels_.size() != weights_.size())
        throw SizeMismatch("label count does not match atom count");
    Rational total = 0;
    for (const auto& w : weights_) {
        if (w <= 0) throw ErgoError("atom weights must be strictly positive");
        total += w;
    }
    if (total != 1)
        throw ErgoError("atom weights must sum to 1, got " + format_rational(total));
}

FiniteProbabilitySpace FiniteProbabilitySpace::uniform(std::size_t atom_count) {
    if (atom_count == 0) throw ErgoError("space needs at least one atom");
    Rational share(1, static_cast<unsigned long>(atom_count));
    share.canonicalize();
    return FiniteProbabilitySpace(std::vector<Rational>(atom_count, share));
}

const Rational& FiniteProbabilitySpace::weight(std::size_t atom) const {
    if (atom >= weights_.size()) throw ErgoError("atom index out of range");
    return weights_[atom];
}

std::string FiniteProbabilitySpace::label(std::size_t atom) const {
    if (atom >= weights_.size()) throw ErgoError("atom index out of range");
    if (!labels_.empty()) return labels_[atom];
    return std::to_string(atom);
}

bool same_space(const FiniteProbabilitySpace& a, const FiniteProbabilitySpace& b) {
    return a.weights() == b.weights();
}

Automorphism::Automorphism(std::vector<std::size_t> images) : images_(std::move(images)) {
    std::vector<char> hit(images_.size(), 0);
    for (std::size_t v : images_) {
        if (v >= images_.size() || hit[v]) throw ErgoError("permutation images are not a bijection");
        hit[v] = 1;
    }
}

Automorphism Automorphism::identity(std::size_t size) {
    std::vector<std::size_t> images(size);
    std::iota(images.begin(), images.end(), 0);
    return Automorphism(std::move(images));
}

Automorphism Automorphism::from_cycle(std::size_t size, const std::vector<std::size_t>& cycle) {
    std::vector<std::size_t> images(size);
    std::iota(images.begin(), images.end(), 0);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const std::size_t from = cycle[i];
        const std::size_t to = cycle[(i + 1) % cycle.size()];
        if (from >= size || to >= size) throw ErgoError("cycle entry out of range");
        images[from] = to;
    }
    return Automorphism(std::move(images));
}

bool operator==(const Automorphism& a, const Automorphism& b) { return a.images() == b.images(); }

Automorphism compose(const Automorphism& f, const Automorphism& g) {
    if (f.size() != g.size()) throw SizeMismatch("composing permutations of different sizes");
    std::vector<std::size_t> images(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) images[x] = f(g(x));
    return Automorphism(std::move(images));
}

Automorphism invert(const Automorphism& f) {
    std::vector<std::size_t> images(f.size());
    for (std::size_t x = 0; x < f.size(); ++x) images[f(x)] = x;
    return Automorphism(std::move(images));
}

bool preserves_measure(const FiniteProbabilitySpace& space, const Automorphism& f) {
    if (space.atom_count() != f.size()) throw SizeMismatch("permutation size does not match space");
    for (std::size_t x = 0; x < f.size(); ++x)
        if (space.weight(f(x)) != space.weight(x)) return false;
    return true;
}

Partition::Partition(std::vector<int> block_id) : block_id_(std::move(block_id)) {
    if (block_id_.empty()) throw ErgoError("partition needs at least one atom");
    // Canonicalize: renumber blocks by first occurrence, which orders them by
    // smallest contained atom.
    std::unordered_map<int, int> rename;
    for (int& id : block_id_) {
        if (id < 0) throw BlockOutOfRange("negative block id");
        const auto [it, inserted] = rename.emplace(id, static_cast<int>(rename.size()));
        id = it->second;
    }
    block_count_ = rename.size();
}

Partition Partition::trivial(std::size_t atom_count) {
    if (atom_count == 0) throw ErgoError("partition needs at least one atom");
    return Partition(std::vector<int>(atom_count, 0));
}

Partition Partition::discrete(std::size_t atom_count) {
    if (atom_count == 0) throw ErgoError("partition needs at least one atom");
    std::vector<int> ids(atom_count);
    std::iota(ids.begin(), ids.end(), 0);
    return Partition(std::move(ids));
}

Partition Partition::from_blocks(std::size_t atom_count,
                                 const std::vector<std::vector<std::size_t>>& blocks) {
    std::vector<int> ids(atom_count, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (std::size_t atom : blocks[b]) {
            if (atom >= atom_count) throw BlockOutOfRange("block atom index out of range");
            if (ids[atom] != -1) throw BlockOutOfRange("atom listed in two blocks");
            ids[atom] = static_cast<int>(b);
        }
    }
    for (std::size_t x = 0; x < atom_count; ++x)
        if (ids[x] == -1) throw BlockOutOfRange("atom " + std::to_string(x) + " not covered");
    return Partition(std::move(ids));
}

int Partition::block_of(std::size_t atom) const {
    if (atom >= block_id_.size()) throw BlockOutOfRange("atom index out of range");
    return block_id_[atom];
}

std::vector<std::vector<std::size_t>> Partition::blocks() const {
    std::vector<std::vector<std::size_t>> out(block_count_);
    for (std::size_t x = 0; x < block_id_.size(); ++x)
        out[static_cast<std::size_t>(block_id_[x])].push_back(x);
    return out;
}

bool operator==(const Partition& a, const Partition& b) { return a.block_ids() == b.block_ids(); }

bool is_trivial(const Partition& p) { return p.block_count() == 1; }

bool is_discrete(const Partition& p) { return p.block_count() == p.atom_count(); }

FiniteProbabilitySpace product_space(const FiniteProbabilitySpace& x,
                                     const FiniteProbabilitySpace& y) {
    std::vector<Rational> weights;
    weights.reserve(x.atom_count() * y.atom_count());
    for (std::size_t i = 0; i < x.atom_count(); ++i)
        for (std::size_t j = 0; j < y.atom_count(); ++j) weights.push_back(x.weight(i) * y.weight(j));
    std::vector<std::string> labels;
    if (x.has_labels() || y.has_labels()) {
        labels.reserve(weights.size());
        for (std::size_t i = 0; i < x.atom_count(); ++i)
            for (std::size_t j = 0; j < y.atom_count(); ++j)
                labels.push_back(x.label(i) + "," + y.label(j));
    }
    return FiniteProbabilitySpace(std::move(weights), std::move(labels));
}

Partition refine(const Partition& p, const Partition& q) {
    if (p.atom_count() != q.atom_count())
        throw SizeMismatch("refining partitions of different spaces");
    // Compact ids for (p-block, q-block) pairs; Partition renumbers
    // canonically anyway, so insertion order is irrelevant.
    std::unordered_map<long long, int> pair_ids;
    const long long stride = static_cast<long long>(q.block_count());
    std::vector<int> ids(p.atom_count());
    for (std::size_t x = 0; x < p.atom_count(); ++x) {
        const long long key = p.block_of(x) * stride + q.block_of(x);
        const auto [it, inserted] = pair_ids.emplace(key, static_cast<int>(pair_ids.size()));
        ids[x] = it->second;
    }
    return Partition(std::move(ids));
}

Partition orbit_partition(std::size_t atom_count, const std::vector<Automorphism>& perms) {
    if (atom_count == 0) throw ErgoError("partition needs at least one atom");
    std::vector<std::size_t> parent(atom_count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& perm : perms) {
        if (perm.size() != atom_count)
            throw SizeMismatch("orbit_partition: permutation size does not match atom count");
        for (std::size_t x = 0; x < atom_count; ++x) {
            const std::size_t a = find(x);
            const std::size_t b = find(perm(x));
            if (a != b) parent[a] = b;
        }
    }
    std::vector<int> ids(atom_count);
    for (std::size_t x = 0; x < atom_count; ++x) ids[x] = static_cast<int>(find(x));
    return Partition(std::move(ids));
}

Rational block_measure(const FiniteProbabilitySpace& space, const Partition& p, std::size_t block) {
    if (space.atom_count() != p.atom_count())
        throw SizeMismatch("partition does not match the space");
    if (block >= p.block_count()) throw BlockOutOfRange("block index out of range");
    Rational total = 0;
    for (std::size_t x = 0; x < space.atom_count(); ++x)
        if (p.block_of(x) == static_cast<int>(block)) total += space.weight(x);
    return total;
}

QuotientResult quotient(const FiniteProbabilitySpace& space, const Partition& p) {
    if (space.atom_count() != p.atom_count())
        throw SizeMismatch("partition does not match the space");
    std::vector<Rational> weights(p.block_count(), Rational(0));
    for (std::size_t x = 0; x < space.atom_count(); ++x)
        weights[static_cast<std::size_t>(p.block_of(x))] += space.weight(x);
    return QuotientResult{FiniteProbabilitySpace(std::move(weights)), p.block_ids()};
}

}  // namespace ergo

#include "ergo/actions.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace ergo {

namespace {

std::string atom_name(const FiniteProbabilitySpace& space, std::size_t atom) {
    return std::to_string(atom) + (space.has_labels() ? " (" + space.label(atom) + ")" : "");
}

// lcm of the cycle lengths.
std::uint64_t permutation_order(const Automorphism& perm) {
    std::vector<char> seen(perm.size(), 0);
    std::uint64_t order = 1;
    for (std::size_t start = 0; start < perm.size(); ++start) {
        if (seen[start]) continue;
        std::uint64_t len = 0;
        std::size_t x = start;
        while (!seen[x]) {
            seen[x] = 1;
            x = perm(x);
            ++len;
        }
        order = std::lcm(order, len);
    }
    return order;
}

void check_preservation(const PmpAction& action, std::vector<std::string>& out) {
    const auto& space = action.space();
    const auto& images = action.generator_images();
    for (std::size_t i = 0; i < images.size(); ++i) {
        for (std::size_t x = 0; x < space.atom_count(); ++x) {
            if (space.weight(images[i](x)) != space.weight(x)) {
                out.push_back("generator " + std::to_string(i) + " image sends atom " +
                              atom_name(space, x) + " of weight " +
                              format_rational(space.weight(x)) + " to atom " +
                              atom_name(space, images[i](x)) + " of weight " +
                              format_rational(space.weight(images[i](x))));
                break;
            }
        }
    }
}

void check_finite_homomorphism(const PmpAction& action, std::vector<std::string>& out) {
    const auto& group = *action.group();
    const auto& el = action.element_images();
    const int m = group.order();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const auto composed = compose(el[static_cast<std::size_t>(i)],
                                          el[static_cast<std::size_t>(j)]);
            const auto& direct = el[static_cast<std::size_t>(group.table(i, j))];
            if (!(composed == direct)) {
                std::size_t x = 0;
                while (composed(x) == direct(x)) ++x;
                out.push_back("element images violate the homomorphism law at (" +
                              std::to_string(i) + "," + std::to_string(j) + "), atom " +
                              std::to_string(x));
                return;
            }
        }
    }
}

void check_images_commute(const std::vector<Automorphism>& lefts,
                          const std::vector<Automorphism>& rights, const std::string& what,
                          std::vector<std::string>& out) {
    for (std::size_t i = 0; i < lefts.size(); ++i) {
        for (std::size_t j = 0; j < rights.size(); ++j) {
            const auto lr = compose(lefts[i], rights[j]);
            const auto rl = compose(rights[j], lefts[i]);
            if (!(lr == rl)) {
                std::size_t x = 0;
                while (lr(x) == rl(x)) ++x;
                out.push_back(what + ": left generator " + std::to_string(i) +
                              " and right generator " + std::to_string(j) +
                              " fail to commute at atom " + std::to_string(x));
                return;
            }
        }
    }
}

std::vector<std::string> collect_violations(const PmpAction& action) {
    std::vector<std::string> out;
    check_preservation(action, out);
    switch (action.group()->kind()) {
        case GroupKind::finite:
            check_finite_homomorphism(action, out);
            break;
        case GroupKind::free_group:
            break;  // free assignments are always homomorphisms
        case GroupKind::product: {
            check_images_commute(action.left_restriction().generator_images(),
                                 action.right_restriction().generator_images(),
                                 "product action", out);
            for (const auto& v : collect_violations(action.left_restriction()))
                out.push_back("left factor: " + v);
            for (const auto& v : collect_violations(action.right_restriction()))
                out.push_back("right factor: " + v);
            break;
        }
    }
    return out;
}

}  // namespace

PmpAction PmpAction::build(GroupPtr group, FiniteProbabilitySpace space,
                           std::vector<Automorphism> images, bool verify) {
    if (!group) throw ErgoError("action needs a group descriptor");
    const auto generators = group->generators();
    if (images.size() != generators.size())
        throw SizeMismatch("expected " + std::to_string(generators.size()) +
                           " generator images, got " + std::to_string(images.size()));
    for (const auto& img : images)
        if (img.size() != space.atom_count())
            throw SizeMismatch("generator image size does not match the space");

    PmpAction action;
    action.group_ = group;
    action.space_ = std::move(space);
    action.generator_images_ = std::move(images);

    switch (group->kind()) {
        case GroupKind::finite: {
            // Fill images of all elements from the generator images by
            // breadth-first search over the Cayley graph; the image of v*s is
            // image(v) after image(s).
            const int m = group->order();
            const auto& gens = group->finite_generator_indices();
            std::vector<Automorphism> el(static_cast<std::size_t>(m),
                                         Automorphism::identity(action.space_.atom_count()));
            std::vector<char> known(static_cast<std::size_t>(m), 0);
            known[static_cast<std::size_t>(group->identity_index())] = 1;
            std::deque<int> queue{group->identity_index()};
            while (!queue.empty()) {
                const int v = queue.front();
                queue.pop_front();
                for (std::size_t i = 0; i < gens.size(); ++i) {
                    const int w = group->table(v, gens[i]);
                    if (!known[static_cast<std::size_t>(w)]) {
                        known[static_cast<std::size_t>(w)] = 1;
                        el[static_cast<std::size_t>(w)] =
                            compose(el[static_cast<std::size_t>(v)], action.generator_images_[i]);
                        queue.push_back(w);
                    }
                }
            }
            action.element_images_ = std::move(el);
            break;
        }
        case GroupKind::free_group:
            break;
        case GroupKind::product: {
            const std::size_t left_count = group->left()->generators().size();
            std::vector<Automorphism> left_images(action.generator_images_.begin(),
                                                  action.generator_images_.begin() +
                                                      static_cast<long>(left_count));
            std::vector<Automorphism> right_images(
                action.generator_images_.begin() + static_cast<long>(left_count),
                action.generator_images_.end());
            action.left_sub_ = std::make_shared<const PmpAction>(
                build(group->left(), action.space_, std::move(left_images), false));
            action.right_sub_ = std::make_shared<const PmpAction>(
                build(group->right(), action.space_, std::move(right_images), false));
            break;
        }
    }

    if (verify) {
        const auto violations = collect_violations(action);
        if (!violations.empty()) throw ErgoError("invalid action: " + violations.front());
    }
    return action;
}

PmpAction::PmpAction(GroupPtr group, FiniteProbabilitySpace space,
                     std::vector<Automorphism> generator_images) {
    *this = build(std::move(group), std::move(space), std::move(generator_images), true);
}

PmpAction PmpAction::unchecked(GroupPtr group, FiniteProbabilitySpace space,
                               std::vector<Automorphism> generator_images) {
    return build(std::move(group), std::move(space), std::move(generator_images), false);
}

Automorphism PmpAction::automorphism(const GroupElement& g) const {
    if (!same_group(g.group(), group_))
        throw DescriptorMismatch("automorphism: element from a different group");
    switch (group_->kind()) {
        case GroupKind::finite:
            return element_images_[static_cast<std::size_t>(g.index())];
        case GroupKind::free_group: {
            Automorphism acc = Automorphism::identity(space_.atom_count());
            for (int l : g.letters()) {
                const std::size_t k = static_cast<std::size_t>(l > 0 ? l : -l) - 1;
                acc = l > 0 ? compose(acc, generator_images_[k])
                            : compose(acc, invert(generator_images_[k]));
            }
            return acc;
        }
        case GroupKind::product:
            return compose(left_sub_->automorphism(g.first()),
                           right_sub_->automorphism(g.second()));
    }
    throw ErgoError("unreachable group kind");
}

std::size_t PmpAction::apply(const GroupElement& g, std::size_t atom) const {
    if (!same_group(g.group(), group_))
        throw DescriptorMismatch("apply: element from a different group");
    if (atom >= space_.atom_count()) throw ErgoError("atom index out of range");
    switch (group_->kind()) {
        case GroupKind::finite:
            return element_images_[static_cast<std::size_t>(g.index())](atom);
        case GroupKind::free_group: {
            // Rightmost letter acts first.
            const auto& word = g.letters();
            for (auto it = word.rbegin(); it != word.rend(); ++it) {
                const int l = *it;
                const std::size_t k = static_cast<std::size_t>(l > 0 ? l : -l) - 1;
                if (l > 0) {
                    atom = generator_images_[k](atom);
                } else {
                    const auto& img = generator_images_[k].images();
                    atom = static_cast<std::size_t>(
                        std::find(img.begin(), img.end(), atom) - img.begin());
                }
            }
            return atom;
        }
        case GroupKind::product:
            return left_sub_->apply(g.first(), right_sub_->apply(g.second(), atom));
    }
    throw ErgoError("unreachable group kind");
}

const PmpAction& PmpAction::left_restriction() const {
    if (!left_sub_) throw ErgoError("left_restriction: action is not of product kind");
    return *left_sub_;
}

const PmpAction& PmpAction::right_restriction() const {
    if (!right_sub_) throw ErgoError("right_restriction: action is not of product kind");
    return *right_sub_;
}

const std::vector<Automorphism>& PmpAction::element_images() const {
    if (group_->kind() != GroupKind::finite)
        throw ErgoError("element_images: action is not of finite kind");
    return element_images_;
}

std::size_t act(const PmpAction& action, const GroupElement& g, std::size_t atom) {
    return action.apply(g, atom);
}

CommutingPair::CommutingPair(PmpAction left, PmpAction right, bool verify)
    : left_(std::move(left)), right_(std::move(right)) {
    if (!same_space(left_.space(), right_.space()))
        throw SizeMismatch("pair actions live on different spaces");
    if (verify) {
        std::vector<std::string> out;
        check_images_commute(left_.generator_images(), right_.generator_images(),
                             "commuting pair", out);
        if (!out.empty()) throw ErgoError("invalid pair: " + out.front());
    }
}

CommutingPair::CommutingPair(PmpAction left, PmpAction right)
    : CommutingPair(std::move(left), std::move(right), true) {}

CommutingPair CommutingPair::unchecked(PmpAction left, PmpAction right) {
    return CommutingPair(std::move(left), std::move(right), false);
}

PmpAction CommutingPair::as_product_action() const {
    std::vector<Automorphism> images = left_.generator_images();
    for (const auto& img : right_.generator_images()) images.push_back(img);
    return PmpAction::unchecked(GroupDescriptor::product(left_.group(), right_.group()),
                                left_.space(), std::move(images));
}

PmpAction trivial_action(const GroupPtr& group, FiniteProbabilitySpace space) {
    const std::size_t count = group->generators().size();
    std::vector<Automorphism> images(count, Automorphism::identity(space.atom_count()));
    return PmpAction(group, std::move(space), std::move(images));
}

PmpAction diagonal(const PmpAction& a, const PmpAction& b) {
    if (!same_group(a.group(), b.group()))
        throw GroupMismatch("diagonal: actions of different groups");
    const std::size_t nx = a.space().atom_count();
    const std::size_t ny = b.space().atom_count();
    auto space = product_space(a.space(), b.space());
    std::vector<Automorphism> images;
    for (std::size_t i = 0; i < a.generator_images().size(); ++i) {
        std::vector<std::size_t> perm(nx * ny);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y)
                perm[pair_atom(x, y, ny)] =
                    pair_atom(a.generator_images()[i](x), b.generator_images()[i](y), ny);
        images.emplace_back(std::move(perm));
    }
    return PmpAction(a.group(), std::move(space), std::move(images));
}

CommutingPair local_product(const PmpAction& a, const PmpAction& b) {
    const std::size_t nx = a.space().atom_count();
    const std::size_t ny = b.space().atom_count();
    auto space = product_space(a.space(), b.space());

    std::vector<Automorphism> left_images;
    for (const auto& img : a.generator_images()) {
        std::vector<std::size_t> perm(nx * ny);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) perm[pair_atom(x, y, ny)] = pair_atom(img(x), y, ny);
        left_images.emplace_back(std::move(perm));
    }
    std::vector<Automorphism> right_images;
    for (const auto& img : b.generator_images()) {
        std::vector<std::size_t> perm(nx * ny);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) perm[pair_atom(x, y, ny)] = pair_atom(x, img(y), ny);
        right_images.emplace_back(std::move(perm));
    }
    PmpAction left(a.group(), space, std::move(left_images));
    PmpAction right(b.group(), std::move(space), std::move(right_images));
    return CommutingPair(std::move(left), std::move(right));
}

BernoulliPair bernoulli_pair(const GroupPtr& group, const FiniteProbabilitySpace& base,
                             std::size_t atom_cap) {
    const auto order = group_order(group);
    if (!order) throw ErgoError("Bernoulli shifts need a finite-order group");
    const std::size_t m = static_cast<std::size_t>(*order);
    const std::size_t n = base.atom_count();

    std::size_t atoms = 1;
    for (std::size_t p = 0; p < m; ++p) {
        if (atoms > atom_cap / n)
            throw SizeCapExceeded("configuration space exceeds the atom cap " +
                                  std::to_string(atom_cap));
        atoms *= n;
    }

    const auto elements = enumerate_group(group);
    std::map<GroupElement, std::size_t, ElementOrder> position;
    for (std::size_t p = 0; p < m; ++p) position.emplace(elements[p], p);

    // Digit p of a configuration index is the base atom at group element p;
    // element 0 is the most significant digit.
    std::vector<std::size_t> pow(m, 1);
    for (std::size_t p = m; p > 1; --p) pow[p - 2] = pow[p - 1] * n;
    auto digit = [&](std::size_t config, std::size_t p) { return config / pow[p] % n; };

    std::vector<Rational> weights(atoms, Rational(1));
    std::vector<std::string> labels(atoms);
    for (std::size_t c = 0; c < atoms; ++c) {
        std::string label;
        for (std::size_t p = 0; p < m; ++p) {
            const std::size_t v = digit(c, p);
            weights[c] *= base.weight(v);
            if (n <= 10) {
                label += static_cast<char>('0' + v);
            } else {
                if (p > 0) label += '.';
                label += std::to_string(v);
            }
        }
        labels[c] = std::move(label);
    }
    FiniteProbabilitySpace space(std::move(weights), std::move(labels));

    // A permutation of digit positions induces the configuration map
    // (source[p] tells which old digit lands in position p).
    auto from_positions = [&](const std::vector<std::size_t>& source) {
        std::vector<std::size_t> perm(atoms);
        for (std::size_t c = 0; c < atoms; ++c) {
            std::size_t target = 0;
            for (std::size_t p = 0; p < m; ++p) target += digit(c, source[p]) * pow[p];
            perm[c] = target;
        }
        return Automorphism(std::move(perm));
    };

    std::vector<Automorphism> left_images, right_images;
    for (const auto& h : group->generators()) {
        const auto hinv = inverse(h);
        std::vector<std::size_t> left_src(m), right_src(m);
        for (std::size_t p = 0; p < m; ++p) {
            left_src[p] = position.at(multiply(hinv, elements[p]));  // value at h^-1 g
            right_src[p] = position.at(multiply(elements[p], h));    // value at g h
        }
        left_images.push_back(from_positions(left_src));
        right_images.push_back(from_positions(right_src));
    }

    std::vector<std::size_t> inv_src(m);
    for (std::size_t p = 0; p < m; ++p) inv_src[p] = position.at(inverse(elements[p]));
    Automorphism involution = from_positions(inv_src);

    CommutingPair pair(PmpAction(group, space, std::move(left_images)),
                       PmpAction(group, space, std::move(right_images)));

    if (!(compose(involution, involution) == Automorphism::identity(atoms)))
        throw ErgoError("Bernoulli involution is not an involution");
    for (const auto& g : elements) {
        const auto lg = pair.left().automorphism(g);
        const auto conj = compose(involution, compose(pair.right().automorphism(g), involution));
        if (!(lg == conj))
            throw ErgoError("Bernoulli conjugation identity fails at " + element_literal(g));
    }

    return BernoulliPair{std::move(pair), std::move(involution)};
}

Cocycle::Cocycle(PmpAction base, FiniteProbabilitySpace fiber,
                 std::vector<std::vector<Automorphism>> values)
    : base_(std::move(base)), fiber_(std::move(fiber)), values_(std::move(values)) {
    const std::size_t atoms = base_.space().atom_count();
    if (values_.size() != base_.generator_images().size())
        throw SizeMismatch("cocycle needs one value row per generator");
    for (const auto& row : values_) {
        if (row.size() != atoms) throw SizeMismatch("cocycle value row does not match base atoms");
        for (const auto& v : row) {
            if (v.size() != fiber_.atom_count())
                throw SizeMismatch("cocycle value does not match the fiber");
            if (!preserves_measure(fiber_, v))
                throw ErgoError("cocycle value does not preserve the fiber measure");
        }
    }

    switch (base_.group()->kind()) {
        case GroupKind::free_group:
            break;  // free assignments always satisfy the equation
        case GroupKind::finite: {
            // Extend to all elements by value(s v, x) = value(s, vx) after
            // value(v, x), then verify the equation on the full table.
            const auto& group = *base_.group();
            const int m = group.order();
            const auto& gens = group.finite_generator_indices();
            element_values_.assign(static_cast<std::size_t>(m),
                                   std::vector<Automorphism>(atoms, Automorphism::identity(fiber_.atom_count())));
            std::vector<char> known(static_cast<std::size_t>(m), 0);
            known[static_cast<std::size_t>(group.identity_index())] = 1;
            std::deque<int> queue{group.identity_index()};
            const auto elements = enumerate_group(base_.group());
            while (!queue.empty()) {
                const int v = queue.front();
                queue.pop_front();
                for (std::size_t i = 0; i < gens.size(); ++i) {
                    const int w = group.table(gens[i], v);
                    if (known[static_cast<std::size_t>(w)]) continue;
                    known[static_cast<std::size_t>(w)] = 1;
                    for (std::size_t x = 0; x < atoms; ++x) {
                        const std::size_t vx =
                            base_.apply(elements[static_cast<std::size_t>(v)], x);
                        element_values_[static_cast<std::size_t>(w)][x] =
                            compose(values_[i][vx], element_values_[static_cast<std::size_t>(v)][x]);
                    }
                    queue.push_back(w);
                }
            }
            for (int u = 0; u < m; ++u) {
                for (int v = 0; v < m; ++v) {
                    const int uv = group.table(u, v);
                    for (std::size_t x = 0; x < atoms; ++x) {
                        const std::size_t vx =
                            base_.apply(elements[static_cast<std::size_t>(v)], x);
                        const auto expected = compose(element_values_[static_cast<std::size_t>(u)][vx],
                                                      element_values_[static_cast<std::size_t>(v)][x]);
                        if (!(element_values_[static_cast<std::size_t>(uv)][x] == expected))
                            throw CocycleEquationViolated(
                                "cocycle equation fails at g=" + std::to_string(u) +
                                ", h=" + std::to_string(v) + ", base atom " + std::to_string(x));
                    }
                }
            }
            break;
        }
        case GroupKind::product: {
            const std::size_t left_count = base_.group()->left()->generators().size();
            std::vector<std::vector<Automorphism>> lv(values_.begin(),
                                                      values_.begin() + static_cast<long>(left_count));
            std::vector<std::vector<Automorphism>> rv(values_.begin() + static_cast<long>(left_count),
                                                      values_.end());
            left_sub_ = std::make_shared<const Cocycle>(base_.left_restriction(), fiber_, std::move(lv));
            right_sub_ = std::make_shared<const Cocycle>(base_.right_restriction(), fiber_, std::move(rv));
            // Cross relation on generator pairs: the two ways around the
            // square g h = h g must agree at every base atom.
            const auto& lefts = base_.left_restriction().generator_images();
            const auto& rights = base_.right_restriction().generator_images();
            for (std::size_t i = 0; i < lefts.size(); ++i) {
                for (std::size_t j = 0; j < rights.size(); ++j) {
                    for (std::size_t x = 0; x < atoms; ++x) {
                        const auto gh = compose(values_[i][rights[j](x)],
                                                values_[left_count + j][x]);
                        const auto hg = compose(values_[left_count + j][lefts[i](x)], values_[i][x]);
                        if (!(gh == hg))
                            throw CocycleEquationViolated(
                                "cocycle cross relation fails at left generator " +
                                std::to_string(i) + ", right generator " + std::to_string(j) +
                                ", base atom " + std::to_string(x));
                    }
                }
            }
            break;
        }
    }
}

Automorphism Cocycle::generator_value(std::size_t gen, std::size_t base_atom) const {
    if (gen >= values_.size()) throw ErgoError("generator index out of range");
    if (base_atom >= base_.space().atom_count()) throw ErgoError("base atom out of range");
    return values_[gen][base_atom];
}

Automorphism Cocycle::value(const GroupElement& g, std::size_t base_atom) const {
    if (!same_group(g.group(), base_.group()))
        throw DescriptorMismatch("cocycle value: element from a different group");
    if (base_atom >= base_.space().atom_count()) throw ErgoError("base atom out of range");
    switch (base_.group()->kind()) {
        case GroupKind::finite:
            return element_values_[static_cast<std::size_t>(g.index())][base_atom];
        case GroupKind::free_group: {
            // Fold over the word, rightmost letter first, tracking the base
            // point; value(s^-1, y) = value(s, s^-1 y)^-1.
            Automorphism acc = Automorphism::identity(fiber_.atom_count());
            std::size_t y = base_atom;
            const auto& word = g.letters();
            for (auto it = word.rbegin(); it != word.rend(); ++it) {
                const int l = *it;
                const std::size_t k = static_cast<std::size_t>(l > 0 ? l : -l) - 1;
                if (l > 0) {
                    acc = compose(values_[k][y], acc);
                    y = base_.generator_images()[k](y);
                } else {
                    const auto& img = base_.generator_images()[k].images();
                    y = static_cast<std::size_t>(std::find(img.begin(), img.end(), y) - img.begin());
                    acc = compose(invert(values_[k][y]), acc);
                }
            }
            return acc;
        }
        case GroupKind::product: {
            const std::size_t moved = base_.right_restriction().apply(g.second(), base_atom);
            return compose(left_sub_->value(g.first(), moved),
                           right_sub_->value(g.second(), base_atom));
        }
    }
    throw ErgoError("unreachable group kind");
}

PmpAction skew_product(const Cocycle& cocycle) {
    const auto& base = cocycle.base();
    const std::size_t ny = base.space().atom_count();
    const std::size_t nz = cocycle.fiber().atom_count();
    auto space = product_space(base.space(), cocycle.fiber());
    std::vector<Automorphism> images;
    for (std::size_t i = 0; i < base.generator_images().size(); ++i) {
        std::vector<std::size_t> perm(ny * nz);
        for (std::size_t y = 0; y < ny; ++y) {
            const auto fiber_map = cocycle.generator_value(i, y);
            const std::size_t target_y = base.generator_images()[i](y);
            for (std::size_t z = 0; z < nz; ++z)
                perm[pair_atom(y, z, nz)] = pair_atom(target_y, fiber_map(z), nz);
        }
        images.emplace_back(std::move(perm));
    }
    return PmpAction(base.group(), std::move(space), std::move(images));
}

FreenessResult is_free(const PmpAction& action) {
    const auto order = group_order(action.group());
    if (order) {
        for (const auto& g : enumerate_group(action.group())) {
            if (g.is_identity()) continue;
            const auto perm = action.automorphism(g);
            for (std::size_t x = 0; x < perm.size(); ++x)
                if (perm(x) == x) return FreenessResult{false, g};
        }
        return FreenessResult{true, std::nullopt};
    }
    switch (action.group()->kind()) {
        case GroupKind::free_group: {
            // The first generator's image has finite order m, so a1^m lies in
            // the kernel and fixes everything.
            const auto m = permutation_order(action.generator_images()[0]);
            const GroupElement witness =
                power(GroupElement::word(action.group(), {1}), static_cast<long long>(m));
            return FreenessResult{false, witness};
        }
        case GroupKind::product: {
            const auto& group = action.group();
            if (!group_order(group->left())) {
                const auto sub = is_free(action.left_restriction());
                return FreenessResult{
                    false, GroupElement::pair(group, *sub.witness,
                                              GroupElement::identity(group->right()))};
            }
            const auto sub = is_free(action.right_restriction());
            return FreenessResult{
                false,
                GroupElement::pair(group, GroupElement::identity(group->left()), *sub.witness)};
        }
        default:
            throw ErgoError("unreachable group kind");
    }
}

Partition invariant_partition(const PmpAction& action) {
    return orbit_partition(action.space().atom_count(), action.generator_images());
}

Partition invariant_partition(const CommutingPair& pair) {
    std::vector<Automorphism> images = pair.left().generator_images();
    for (const auto& img : pair.right().generator_images()) images.push_back(img);
    return orbit_partition(pair.space().atom_count(), images);
}

bool is_ergodic(const PmpAction& action) { return is_trivial(invariant_partition(action)); }

bool is_ergodic(const CommutingPair& pair) { return is_trivial(invariant_partition(pair)); }

ValidationReport validate(const PmpAction& action) {
    return ValidationReport{collect_violations(action)};
}

ValidationReport validate(const CommutingPair& pair) {
    ValidationReport report;
    for (const auto& v : validate(pair.left()).violations)
        report.violations.push_back("left action: " + v);
    for (const auto& v : validate(pair.right()).violations)
        report.violations.push_back("right action: " + v);
    if (!same_space(pair.left().space(), pair.right().space()))
        report.violations.push_back("pair actions live on different spaces");
    check_images_commute(pair.left().generator_images(), pair.right().generator_images(),
                         "commuting pair", report.violations);
    return report;
}

}  // namespace ergo

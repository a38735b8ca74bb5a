#include "ergo/decomposition.hpp"

#include <sstream>

#include "ergo/errors.hpp"

namespace ergo {

ErgodicDecomposition ergodic_decomposition(const PmpAction& action) {
    Partition part = invariant_partition(action);
    QuotientResult q = quotient(action.space(), part);
    return {action, std::move(part), std::move(q.space), std::move(q.factor_map)};
}

PmpAction induced_action(const CommutingPair& pair) {
    ErgodicDecomposition dec = ergodic_decomposition(pair.left());
    const Partition& part = dec.partition;
    const PmpAction& right = pair.right();
    std::size_t blocks = part.block_count();
    std::vector<Automorphism> images;
    images.reserve(right.generator_images().size());
    for (std::size_t i = 0; i < right.generator_images().size(); ++i) {
        const Automorphism& h = right.generator_images()[i];
        // blocks itself is the unassigned marker; every block gets written
        // because every block contains an atom.
        std::vector<std::size_t> block_image(blocks, blocks);
        for (std::size_t x = 0; x < part.atom_count(); ++x) {
            auto from = static_cast<std::size_t>(part.block_of(x));
            auto to = static_cast<std::size_t>(part.block_of(h(x)));
            if (block_image[from] == blocks) {
                block_image[from] = to;
            } else if (block_image[from] != to) {
                throw OrbitNotPermuted("right generator " + std::to_string(i) +
                                       " splits left component " + std::to_string(from) +
                                       " at atom " + std::to_string(x));
            }
        }
        images.emplace_back(std::move(block_image));
    }
    return PmpAction(right.group(), std::move(dec.quotient), std::move(images));
}

bool check_independence(const FiniteProbabilitySpace& space, const Partition& p,
                        const Partition& q) {
    if (p.atom_count() != space.atom_count() || q.atom_count() != space.atom_count()) {
        throw SizeMismatch("partitions cover " + std::to_string(p.atom_count()) + " and " +
                           std::to_string(q.atom_count()) + " atoms on a space with " +
                           std::to_string(space.atom_count()));
    }
    std::size_t pb = p.block_count();
    std::size_t qb = q.block_count();
    std::vector<Rational> mass_p(pb, Rational(0));
    std::vector<Rational> mass_q(qb, Rational(0));
    std::vector<Rational> joint(pb * qb, Rational(0));
    for (std::size_t x = 0; x < space.atom_count(); ++x) {
        auto a = static_cast<std::size_t>(p.block_of(x));
        auto b = static_cast<std::size_t>(q.block_of(x));
        mass_p[a] += space.weight(x);
        mass_q[b] += space.weight(x);
        joint[a * qb + b] += space.weight(x);
    }
    for (std::size_t a = 0; a < pb; ++a) {
        for (std::size_t b = 0; b < qb; ++b) {
            if (joint[a * qb + b] != mass_p[a] * mass_q[b]) return false;
        }
    }
    return true;
}

SynergodicReport synergodic_decomposition(const CommutingPair& pair) {
    Partition part_a = invariant_partition(pair.left());
    Partition part_b = invariant_partition(pair.right());
    Partition join = refine(part_a, part_b);
    bool ergodic = is_ergodic(pair);
    const FiniteProbabilitySpace& space = pair.space();
    std::size_t na = part_a.block_count();
    std::size_t nb = part_b.block_count();
    std::vector<std::pair<int, int>> phi(space.atom_count());
    std::vector<Rational> push(na * nb, Rational(0));
    std::vector<Rational> mass_a(na, Rational(0));
    std::vector<Rational> mass_b(nb, Rational(0));
    for (std::size_t x = 0; x < space.atom_count(); ++x) {
        int a = part_a.block_of(x);
        int b = part_b.block_of(x);
        phi[x] = {a, b};
        push[pair_atom(static_cast<std::size_t>(a), static_cast<std::size_t>(b), nb)] +=
            space.weight(x);
        mass_a[static_cast<std::size_t>(a)] += space.weight(x);
        mass_b[static_cast<std::size_t>(b)] += space.weight(x);
    }
    bool independent = true;
    for (std::size_t a = 0; a < na && independent; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
            if (push[a * nb + b] != mass_a[a] * mass_b[b]) {
                independent = false;
                break;
            }
        }
    }
    bool synergodic = ergodic && is_discrete(join);
    return {pair,     std::move(part_a), std::move(part_b), std::move(join), ergodic,
            std::move(phi), std::move(push),   independent,       synergodic};
}

namespace {

void render_partition(std::ostringstream& out, const char* name,
                      const FiniteProbabilitySpace& space, const Partition& part) {
    out << name << ": " << part.block_count()
        << (part.block_count() == 1 ? " block\n" : " blocks\n");
    auto blocks = part.blocks();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        out << "  block " << b << " (mass " << format_rational(block_measure(space, part, b))
            << "):";
        for (std::size_t atom : blocks[b]) out << ' ' << atom;
        out << '\n';
    }
}

const char* verdict_word(bool v) { return v ? "true" : "false"; }

}  // namespace

std::string render_synergodic_report(const SynergodicReport& report) {
    std::ostringstream out;
    const FiniteProbabilitySpace& space = report.pair.space();
    out << "atoms: " << space.atom_count() << '\n';
    render_partition(out, "left components", space, report.part_a);
    render_partition(out, "right components", space, report.part_b);
    render_partition(out, "join", space, report.join);
    out << "ergodic: " << verdict_word(report.ergodic) << '\n';
    out << "independence: " << verdict_word(report.independence) << '\n';
    out << "synergodic: " << verdict_word(report.synergodic) << '\n';
    return out.str();
}

CanonicalFactorReport verify_canonical_factorization(const CommutingPair& pair) {
    if (!is_ergodic(pair)) {
        throw NotErgodic("commuting pair has more than one joint component");
    }
    SynergodicReport dec = synergodic_decomposition(pair);
    CommutingPair swapped(pair.right(), pair.left());
    PmpAction left_on_b = induced_action(swapped);
    PmpAction right_on_a = induced_action(pair);
    // Left group moves the right components, right group the left
    // components, so the model space is E_B x E_A and the canonical map
    // sends x to (component on the right, component on the left).
    CommutingPair model = local_product(left_on_b, right_on_a);

    std::vector<std::string> violations;
    const FiniteProbabilitySpace& space = pair.space();
    std::size_t na = dec.part_a.block_count();
    std::size_t nb = dec.part_b.block_count();

    std::vector<Rational> mass_a(na, Rational(0));
    std::vector<Rational> mass_b(nb, Rational(0));
    for (std::size_t x = 0; x < space.atom_count(); ++x) {
        mass_a[static_cast<std::size_t>(dec.canonical_map[x].first)] += space.weight(x);
        mass_b[static_cast<std::size_t>(dec.canonical_map[x].second)] += space.weight(x);
    }
    bool push_ok = true;
    for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
            const Rational& got = dec.pushforward[a * nb + b];
            Rational want = mass_a[a] * mass_b[b];
            if (got != want) {
                push_ok = false;
                violations.push_back("component pair (" + std::to_string(a) + ", " +
                                     std::to_string(b) + "): image mass " + format_rational(got) +
                                     ", product mass " + format_rational(want));
            }
        }
    }

    std::vector<std::size_t> image(space.atom_count());
    for (std::size_t x = 0; x < space.atom_count(); ++x) {
        image[x] = pair_atom(static_cast<std::size_t>(dec.canonical_map[x].second),
                             static_cast<std::size_t>(dec.canonical_map[x].first), na);
    }
    bool inter_ok = true;
    auto check_side = [&](const PmpAction& source, const PmpAction& target, const char* side) {
        for (std::size_t i = 0; i < source.generator_images().size(); ++i) {
            const Automorphism& s = source.generator_images()[i];
            const Automorphism& t = target.generator_images()[i];
            for (std::size_t x = 0; x < space.atom_count(); ++x) {
                if (image[s(x)] != t(image[x])) {
                    inter_ok = false;
                    violations.push_back(std::string(side) + " generator " + std::to_string(i) +
                                         " does not commute with the canonical map at atom " +
                                         std::to_string(x));
                }
            }
        }
    };
    check_side(pair.left(), model.left(), "left");
    check_side(pair.right(), model.right(), "right");

    return {std::move(dec), std::move(left_on_b), std::move(right_on_a),
            push_ok,        inter_ok,             std::move(violations)};
}

LocalProductReport verify_local_product_structure(const PmpAction& a, const PmpAction& b) {
    if (!is_ergodic(a)) throw NotErgodic("left action has more than one component");
    if (!is_ergodic(b)) throw NotErgodic("right action has more than one component");
    CommutingPair lp = local_product(a, b);
    SynergodicReport dec = synergodic_decomposition(lp);
    std::vector<std::string> violations;
    if (!dec.synergodic) violations.push_back("local product is not synergodic");

    std::size_t nx = a.space().atom_count();
    std::size_t ny = b.space().atom_count();
    std::vector<int> left_fiber(nx * ny);
    std::vector<int> right_fiber(nx * ny);
    for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t y = 0; y < ny; ++y) {
            left_fiber[pair_atom(x, y, ny)] = static_cast<int>(y);
            right_fiber[pair_atom(x, y, ny)] = static_cast<int>(x);
        }
    }
    bool fibers_left = dec.part_a == Partition(std::move(left_fiber));
    bool fibers_right = dec.part_b == Partition(std::move(right_fiber));
    if (!fibers_left) {
        violations.push_back("left components differ from the second-coordinate fibers");
    }
    if (!fibers_right) {
        violations.push_back("right components differ from the first-coordinate fibers");
    }
    return {std::move(lp), std::move(dec), fibers_left, fibers_right, std::move(violations)};
}

}  // namespace ergo

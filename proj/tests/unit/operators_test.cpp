#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ergo/operators.hpp"
#include "test_util.hpp"

using namespace ergo;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Z acting on m atoms by the one-step rotation.
PmpAction integer_rotation(std::size_t m) {
    std::vector<std::size_t> cycle(m);
    for (std::size_t i = 0; i < m; ++i) cycle[i] = i;
    return PmpAction(GroupDescriptor::free_group(1), FiniteProbabilitySpace::uniform(m),
                     {Automorphism::from_cycle(m, cycle)});
}

// Z/m acting on itself by translation.
PmpAction cyclic_translation(int m) {
    std::vector<std::size_t> cycle(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < cycle.size(); ++i) cycle[i] = i;
    return PmpAction(GroupDescriptor::cyclic(m),
                     FiniteProbabilitySpace::uniform(static_cast<std::size_t>(m)),
                     {Automorphism::from_cycle(static_cast<std::size_t>(m), cycle)});
}

// Symmetric one-step walk on Z: half left, half right.
FiniteSupportMeasure symmetric_step(const GroupPtr& z) {
    return FiniteSupportMeasure::uniform(
        z, {GroupElement::word(z, {1}), GroupElement::word(z, {-1})});
}

// Lazy symmetric walk on Z: thirds on {a', e, a}.
FiniteSupportMeasure lazy_step(const GroupPtr& z) {
    return FiniteSupportMeasure::uniform(
        z, {GroupElement::word(z, {1}), GroupElement::identity(z), GroupElement::word(z, {-1})});
}

std::vector<Rational> rationals(std::initializer_list<Rational> values) { return values; }

}  // namespace

TEST_CASE("markov operator of a point mass at the identity is the identity") {
    auto rot = integer_rotation(4);
    auto m = exact_markov_operator(rot, FiniteSupportMeasure::point(GroupElement::identity(rot.group())));
    CHECK(m == ExactMarkovMatrix::identity(4));
}

TEST_CASE("markov operator of the symmetric step is the neighbor average") {
    auto rot = integer_rotation(3);
    auto m = exact_markov_operator(rot, symmetric_step(rot.group()));
    for (std::size_t x = 0; x < 3; ++x) {
        CHECK(m.at(x, x) == 0);
        CHECK(m.at(x, (x + 1) % 3) == Rational(1, 2));
        CHECK(m.at(x, (x + 2) % 3) == Rational(1, 2));
    }
    auto rounded = markov_operator(rot, symmetric_step(rot.group()));
    CHECK(rounded.at(0, 1) == doctest::Approx(0.5));
    CHECK(rounded.at(0, 0) == 0.0);
}

TEST_CASE("trivial actions average nothing") {
    auto space = FiniteProbabilitySpace::uniform(5);
    auto action = trivial_action(GroupDescriptor::free_group(2), space);
    SplitMix64 rng(11);
    auto w = testutil::random_measure(rng, action.group());
    CHECK(exact_markov_operator(action, w) == ExactMarkovMatrix::identity(5));
}

TEST_CASE("markov operator rejects measures on another group") {
    auto rot = integer_rotation(3);
    auto other = GroupDescriptor::cyclic(3);
    CHECK_THROWS_AS(
        markov_operator(rot, FiniteSupportMeasure::point(GroupElement::identity(other))),
        DescriptorMismatch);
}

TEST_CASE("averaging over a convolution composes the operators") {
    SplitMix64 rng(404142);
    auto action = cyclic_translation(6);
    for (int trial = 0; trial < 20; ++trial) {
        auto w = testutil::random_measure(rng, action.group());
        auto u = testutil::random_measure(rng, action.group());
        auto composed = exact_markov_operator(action, convolve(w, u));
        auto product = multiply(exact_markov_operator(action, u), exact_markov_operator(action, w));
        CHECK(composed == product);
    }
}

TEST_CASE("composition order pinned by a nonabelian example") {
    // a1 swaps atoms 0 and 1, a2 rotates 0 -> 1 -> 2.  The word a1 a2 moves
    // an atom by a2 first, so its operator fixes 0 and swaps 1 with 2.
    auto f2 = GroupDescriptor::free_group(2);
    PmpAction action(f2, FiniteProbabilitySpace::uniform(3),
                     {Automorphism({1, 0, 2}), Automorphism({1, 2, 0})});
    auto w = FiniteSupportMeasure::point(GroupElement::word(f2, {1}));
    auto u = FiniteSupportMeasure::point(GroupElement::word(f2, {2}));
    auto composed = exact_markov_operator(action, convolve(w, u));
    ExactMarkovMatrix expected(3, rationals({Rational(1), Rational(0), Rational(0),  //
                                             Rational(0), Rational(0), Rational(1),  //
                                             Rational(0), Rational(1), Rational(0)}));
    CHECK(composed == expected);
    CHECK(composed ==
          multiply(exact_markov_operator(action, u), exact_markov_operator(action, w)));
    CHECK(composed !=
          multiply(exact_markov_operator(action, w), exact_markov_operator(action, u)));
}

TEST_CASE("conditional expectation averages blocks") {
    auto uniform4 = FiniteProbabilitySpace::uniform(4);
    auto halves = Partition::from_blocks(4, {{0, 1}, {2, 3}});
    auto e = exact_conditional_expectation(uniform4, halves);
    auto averaged = e.apply(rationals({Rational(1), Rational(3), Rational(0), Rational(2)}));
    CHECK(averaged == rationals({Rational(2), Rational(2), Rational(1), Rational(1)}));

    CHECK(exact_conditional_expectation(uniform4, Partition::discrete(4)) ==
          ExactMarkovMatrix::identity(4));
    CHECK(exact_conditional_expectation(uniform4, Partition::trivial(4)) ==
          exact_integration_matrix(uniform4));

    CHECK_THROWS_AS(exact_conditional_expectation(uniform4, Partition::trivial(3)), SizeMismatch);
}

TEST_CASE("conditional expectations are idempotent self-adjoint contractions") {
    SplitMix64 rng(777001);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 2 + rng.below(7);
        std::vector<Rational> weights;
        long total = 0;
        std::vector<long> masses;
        for (std::size_t i = 0; i < n; ++i) {
            masses.push_back(1 + static_cast<long>(rng.below(5)));
            total += masses.back();
        }
        for (long m : masses) {
            Rational r(m, total);
            r.canonicalize();
            weights.push_back(r);
        }
        FiniteProbabilitySpace space(weights);
        auto part = testutil::random_partition(rng, n, 1 + rng.below(n));
        auto e = exact_conditional_expectation(space, part);

        CHECK(multiply(e, e) == e);
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = 0; y < n; ++y) {
                CHECK(space.weight(x) * e.at(x, y) == space.weight(y) * e.at(y, x));
            }
        }

        std::vector<double> psi(n);
        for (auto& v : psi) v = static_cast<double>(rng.below(19)) - 9.0;
        auto projected = e.rounded().apply(psi);
        for (double p : {1.0, 2.0, 3.5, kInf}) {
            CHECK(p_norm(space, projected, p) <= p_norm(space, psi, p) + 1e-12);
        }
    }
}

TEST_CASE("integration matrix projects onto constants") {
    FiniteProbabilitySpace space({Rational(1, 2), Rational(1, 3), Rational(1, 6)});
    auto j = exact_integration_matrix(space);
    CHECK(multiply(j, j) == j);
    auto projected = j.apply(rationals({Rational(1), Rational(2), Rational(6)}));
    for (const auto& v : projected) CHECK(v == Rational(13, 6));
}

TEST_CASE("integration sums weighted values") {
    auto uniform3 = FiniteProbabilitySpace::uniform(3);
    CHECK(integrate(uniform3, std::vector<double>{4.0, 4.0, 4.0}) == doctest::Approx(4.0));
    CHECK(integrate(uniform3, rationals({Rational(1), Rational(2), Rational(6)})) == Rational(3));
    FiniteProbabilitySpace halves({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    CHECK(integrate(halves, std::vector<double>{1.0, 0.0, 0.0}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(integrate(uniform3, std::vector<double>{1.0}), SizeMismatch);
}

TEST_CASE("weighted p-norms") {
    auto uniform2 = FiniteProbabilitySpace::uniform(2);
    auto uniform3 = FiniteProbabilitySpace::uniform(3);
    for (double p : {1.0, 2.0, 7.0, kInf}) {
        CHECK(p_norm(uniform3, {1.0, 1.0, 1.0}, p) == doctest::Approx(1.0));
    }
    CHECK(p_norm(uniform2, {1.0, -1.0}, 2.0) == doctest::Approx(1.0));
    CHECK(p_norm(uniform3, {2.0 / 3, -1.0 / 3, -1.0 / 3}, 2.0) ==
          doctest::Approx(std::sqrt(2.0) / 3));
    CHECK(p_norm(uniform3, {2.0 / 3, -1.0 / 3, -1.0 / 3}, kInf) == doctest::Approx(2.0 / 3));
    CHECK(p_norm(uniform2, {3.0, -1.0}, 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(p_norm(uniform2, {1.0, 1.0}, 0.5), BadExponent);
    CHECK_THROWS_AS(p_norm(uniform2, {1.0, 1.0}, std::nan("")), BadExponent);
}

TEST_CASE("stochastic matrices validate rows and contract norms") {
    MarkovMatrix::Builder bad(2);
    bad.add(0, 0, 0.7);
    bad.add(0, 1, 0.7);
    bad.add(1, 1, 1.0);
    CHECK_THROWS_AS(bad.finish(), ErgoError);

    MarkovMatrix::Builder negative(2);
    CHECK_THROWS_AS(negative.add(0, 0, -0.25), ErgoError);

    SplitMix64 rng(92); // contraction on random walks and observables
    auto action = cyclic_translation(8);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = markov_operator(action, testutil::random_measure(rng, action.group()));
        std::vector<double> psi(8);
        for (auto& v : psi) v = static_cast<double>(rng.below(21)) - 10.0;
        auto averaged = m.apply(psi);
        for (double p : {1.0, 2.0, kInf}) {
            CHECK(p_norm(action.space(), averaged, p) <= p_norm(action.space(), psi, p) + 1e-12);
        }
    }
}

TEST_CASE("large spaces fall back to sparse rows") {
    auto rot = integer_rotation(600);
    auto m = markov_operator(rot, symmetric_step(rot.group()));
    CHECK_FALSE(m.is_dense());
    CHECK(m.at(0, 1) == doctest::Approx(0.5));
    CHECK(m.at(0, 599) == doctest::Approx(0.5));
    CHECK(m.at(0, 2) == 0.0);

    std::vector<double> psi(600, 0.0);
    psi[10] = 6.0;
    auto averaged = m.apply(psi);
    CHECK(averaged[9] == doctest::Approx(3.0));
    CHECK(averaged[11] == doctest::Approx(3.0));
    CHECK(averaged[10] == 0.0);

    auto two_step = multiply(m, m);
    CHECK_FALSE(two_step.is_dense());
    CHECK(two_step.at(0, 0) == doctest::Approx(0.5));
    CHECK(two_step.at(0, 2) == doctest::Approx(0.25));
    CHECK(two_step.at(0, 598) == doctest::Approx(0.25));

    CHECK(MarkovMatrix::identity(600).at(599, 599) == 1.0);
}

TEST_CASE("deviation of a constant observable is zero") {
    auto rot = integer_rotation(3);
    auto deviations =
        convolution_deviation(rot, lazy_step(rot.group()), {2.0, 2.0, 2.0}, 2.0, 8);
    for (double d : deviations) CHECK(d == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("lazy walk averages decay monotonically") {
    // On three atoms the lazy step is already the uniform average, so the
    // deviation vanishes from the first step.
    auto rot3 = integer_rotation(3);
    auto flat = convolution_deviation(rot3, lazy_step(rot3.group()), {1.0, 0.0, 0.0}, 2.0, 5);
    for (double d : flat) CHECK(d == doctest::Approx(0.0).epsilon(1e-14));

    auto rot5 = integer_rotation(5);
    auto deviations =
        convolution_deviation(rot5, lazy_step(rot5.group()), {1.0, 0.0, 0.0, 0.0, 0.0}, 2.0, 40);
    for (std::size_t i = 1; i < deviations.size(); ++i) CHECK(deviations[i] < deviations[i - 1]);
    CHECK(deviations.back() < 1e-9);
}

TEST_CASE("symmetric step deviations follow the closed form") {
    auto rot = integer_rotation(3);
    const std::vector<double> psi{2.0 / 3, -1.0 / 3, -1.0 / 3};
    auto deviations = convolution_deviation(rot, symmetric_step(rot.group()), psi, 2.0, 20);
    const double base = std::sqrt(2.0) / 3;
    for (int n = 1; n <= 20; ++n) {
        CHECK(std::abs(deviations[static_cast<std::size_t>(n - 1)] - std::pow(0.5, n) * base) <
              1e-12);
    }
    CHECK(deviations[0] == doctest::Approx(0.23570226));
}

TEST_CASE("matrix-power sweep matches literal convolution") {
    auto rot = integer_rotation(5);
    auto w = lazy_step(rot.group());
    std::vector<FiniteSupportMeasure> powers;
    for (int n = 1; n <= 6; ++n) powers.push_back(autoconvolve(w, n));
    const std::vector<double> psi{1.0, -2.0, 0.5, 3.0, -2.5};
    auto literal = ergodic_deviation(rot, powers, psi, 2.0);
    auto powered = convolution_deviation(rot, w, psi, 2.0, 6);
    REQUIRE(literal.size() == powered.size());
    for (std::size_t i = 0; i < literal.size(); ++i) {
        CHECK(literal[i] == doctest::Approx(powered[i]).epsilon(1e-12));
    }
}

TEST_CASE("eccentricity schedules") {
    auto id = EccentricitySchedule::identity();
    CHECK(id(1) == 1);
    CHECK(id(7) == 7);
    CHECK(id.name() == "n");

    auto square = EccentricitySchedule::power(2);
    CHECK(square(1) == 1);
    CHECK(square(3) == 9);
    CHECK(square(60) == 3600);
    CHECK_THROWS_AS(EccentricitySchedule::power(0), ErgoError);
    CHECK_THROWS_AS(EccentricitySchedule::power(9)(1000), ErgoError);

    auto logs = EccentricitySchedule::log_growth();
    CHECK(logs(1) == 1);
    CHECK(logs(2) == 2);
    CHECK(logs(3) == 3);
    CHECK(logs(4) == 3);
    CHECK(logs(8) == 4);
    CHECK(logs(9) == 5);
    CHECK(logs(64) == 7);

    auto table = EccentricitySchedule::from_table({2, 1, 5});
    CHECK(table(1) == 2);
    CHECK(table(3) == 5);
    CHECK_THROWS_AS(table(4), ErgoError);
    CHECK_THROWS_AS(table(0), ErgoError);
    CHECK_THROWS_AS(EccentricitySchedule::from_table({1, 0}), ErgoError);
}

TEST_CASE("eccentric measures advance the two clocks separately") {
    auto z = GroupDescriptor::free_group(1);
    auto w = symmetric_step(z);

    auto first = eccentric_measures(w, w, EccentricitySchedule::identity(), 1);
    CHECK(first.weights() == product_measure(w, w).weights());

    auto g = GroupElement::word(z, {1});
    auto point = FiniteSupportMeasure::point(g);
    auto eccentric = eccentric_measures(point, point, EccentricitySchedule::power(2), 2);
    CHECK(eccentric.support_size() == 1);
    CHECK(eccentric.at(GroupElement::pair(eccentric.group(), power(g, 2), power(g, 4))) ==
          Rational(1));

    auto spread = eccentric_measures(w, w, EccentricitySchedule::power(2), 2);
    CHECK(spread.support_size() == 15);
    auto pg = spread.group();
    CHECK(spread.at(GroupElement::pair(pg, GroupElement::identity(z), GroupElement::identity(z))) ==
          Rational(1, 2) * Rational(6, 16));
    CHECK(spread.at(GroupElement::pair(pg, power(g, 2), power(g, 4))) ==
          Rational(1, 4) * Rational(1, 16));
}

TEST_CASE("pair walks compose the two factor operators") {
    auto lp = local_product(cyclic_translation(2), cyclic_translation(3));
    auto pg = lp.as_product_action().group();
    auto identity_mass = FiniteSupportMeasure::point(GroupElement::identity(pg));
    CHECK(exact_pair_markov(lp, identity_mass) == ExactMarkovMatrix::identity(6));

    SplitMix64 rng(5150);
    for (int trial = 0; trial < 10; ++trial) {
        auto w = testutil::random_measure(rng, pg->left());
        auto u = testutil::random_measure(rng, pg->right());
        auto joint = exact_pair_markov(lp, product_measure(w, u));
        auto ma = exact_markov_operator(lp.left(), w);
        auto mb = exact_markov_operator(lp.right(), u);
        CHECK(joint == multiply(ma, mb));
        CHECK(joint == multiply(mb, ma));

        auto one_sided = exact_pair_markov(
            lp, product_measure(w, FiniteSupportMeasure::point(GroupElement::identity(pg->right()))));
        CHECK(one_sided == ma);
    }

    CHECK_THROWS_AS(
        pair_markov(lp, FiniteSupportMeasure::point(GroupElement::identity(pg->left()))),
        DescriptorMismatch);
}

TEST_CASE("block projections of an ergodic pair compose to integration") {
    auto space = FiniteProbabilitySpace::uniform(6);
    PmpAction ergodic_left(GroupDescriptor::cyclic(6), space,
                           {Automorphism::from_cycle(6, {0, 1, 2, 3, 4, 5})});
    CHECK(check_expectation_product(
        CommutingPair(ergodic_left, trivial_action(GroupDescriptor::cyclic(3), space))));

    CHECK(check_expectation_product(local_product(cyclic_translation(2), cyclic_translation(3))));

    PmpAction by3(GroupDescriptor::cyclic(2), space, {Automorphism({3, 4, 5, 0, 1, 2})});
    PmpAction by2(GroupDescriptor::cyclic(3), space, {Automorphism({2, 3, 4, 5, 0, 1})});
    CHECK(check_expectation_product(CommutingPair(by3, by2)));

    auto two = FiniteProbabilitySpace::uniform(2);
    CHECK_THROWS_AS(check_expectation_product(CommutingPair(
                        trivial_action(GroupDescriptor::cyclic(2), two),
                        trivial_action(GroupDescriptor::cyclic(2), two))),
                    NotErgodic);
}

TEST_CASE("coordinate projections on a triple product integrate") {
    auto point = FiniteProbabilitySpace::uniform(1);
    CHECK(check_cube_expectations(point, point, point));

    auto uniform2 = FiniteProbabilitySpace::uniform(2);
    CHECK(check_cube_expectations(uniform2, uniform2, uniform2));

    FiniteProbabilitySpace thirds({Rational(1, 3), Rational(2, 3)});
    FiniteProbabilitySpace quarters({Rational(1, 4), Rational(3, 4)});
    CHECK(check_cube_expectations(thirds, uniform2, quarters));
}

TEST_CASE("middle-coordinate observable on the cube") {
    auto uniform2 = FiniteProbabilitySpace::uniform(2);
    auto y = product_space(product_space(uniform2, uniform2), uniform2);
    std::vector<int> coord1(8), coord2(8);
    std::vector<Rational> psi(8);
    for (std::size_t atom = 0; atom < 8; ++atom) {
        coord1[atom] = static_cast<int>(atom / 4);
        coord2[atom] = static_cast<int>((atom / 2) % 2);
        psi[atom] = Rational(static_cast<int>((atom / 2) % 2));
    }
    auto p1 = exact_conditional_expectation(y, Partition(coord1));
    auto p2 = exact_conditional_expectation(y, Partition(coord2));
    CHECK(p2.apply(psi) == psi);
    auto flattened = p1.apply(p2.apply(psi));
    for (const auto& v : flattened) CHECK(v == Rational(1, 2));
}

TEST_CASE("one-sided averages of an invariant set flatten to its mass") {
    auto pair = local_product(integer_rotation(3), cyclic_translation(2));
    auto w = lazy_step(pair.left().group());

    // {0} x Y is the right-component block holding atoms 0 and 1.
    auto deviations = onside_deviation(pair, w, {0, 1}, 2.0, 40);
    for (std::size_t i = 1; i < deviations.size(); ++i) {
        CHECK(deviations[i] <= deviations[i - 1] + 1e-15);
    }
    auto crossing = first_crossing(deviations, 1e-6);
    REQUIRE(crossing.has_value());
    CHECK(*crossing <= 40);

    auto all = onside_deviation(pair, w, {0, 1, 2, 3, 4, 5}, 2.0, 5);
    for (double d : all) CHECK(d == doctest::Approx(0.0).epsilon(1e-14));
    auto none = onside_deviation(pair, w, {}, kInf, 5);
    for (double d : none) CHECK(d == doctest::Approx(0.0).epsilon(1e-14));

    CHECK_THROWS_AS(onside_deviation(pair, w, {0}, 2.0, 3), NotInvariant);
    CHECK_THROWS_AS(onside_deviation(pair, w, {6}, 2.0, 3), BlockOutOfRange);

    auto two = FiniteProbabilitySpace::uniform(2);
    auto still = CommutingPair(trivial_action(pair.left().group(), two),
                               trivial_action(GroupDescriptor::cyclic(2), two));
    CHECK_THROWS_AS(onside_deviation(still, w, {0, 1}, 2.0, 3), NotErgodic);
}

TEST_CASE("eccentric sweeps satisfy the two-stage bound and converge") {
    auto pair = local_product(integer_rotation(3), integer_rotation(4));
    auto w = lazy_step(pair.left().group());
    auto u = lazy_step(pair.right().group());
    SplitMix64 rng(314159);
    std::vector<double> psi(12);
    for (auto& v : psi) v = static_cast<double>(rng.below(13)) - 6.0;

    // The lazy right walk contracts by 1/3 per step, so it only crosses 1e-6
    // when tau itself grows: the identity and square schedules qualify.
    const EccentricitySchedule fast_schedules[] = {EccentricitySchedule::identity(),
                                                   EccentricitySchedule::power(2)};
    for (const auto& tau : fast_schedules) {
        // Support tracking for the square schedule would walk powers past
        // 1000; the deviations do not need it.
        const std::size_t cap = tau.name() == "n^2" ? 0 : kDefaultSupportCap;
        for (double p : {1.0, 2.0, kInf}) {
            auto rows = eccentric_deviation_sweep(pair, w, u, tau, psi, p, 40, cap);
            REQUIRE(rows.size() == 40);
            std::vector<double> pair_deviations;
            for (const auto& row : rows) {
                CHECK(row.tau_n == tau(row.n));
                CHECK(row.pair_deviation <= row.left_deviation + row.right_deviation + 1e-9);
                if (cap != 0) {
                    REQUIRE(row.support_size.has_value());
                    CHECK(*row.support_size ==
                          static_cast<std::size_t>(2 * row.n + 1) *
                              static_cast<std::size_t>(2 * row.tau_n + 1));
                }
                pair_deviations.push_back(row.pair_deviation);
            }
            auto crossing = first_crossing(pair_deviations, 1e-6);
            REQUIRE(crossing.has_value());
            CHECK(*crossing <= 40);
        }
    }

    // The log schedule stalls at tau(40) = 7, which leaves a lazy right walk
    // at (1/3)^7 of its starting deviation. Crossing within the horizon needs
    // a right walk that is uniform after a single step; the left walk on five
    // atoms still decays slowly enough to exercise the sweep.
    auto log_pair = local_product(integer_rotation(5), integer_rotation(4));
    auto w5 = lazy_step(log_pair.left().group());
    const auto& zr = log_pair.right().group();
    auto u_flat = FiniteSupportMeasure::uniform(
        zr, {GroupElement::identity(zr), GroupElement::word(zr, {1}),
             GroupElement::word(zr, {1, 1}), GroupElement::word(zr, {1, 1, 1})});
    std::vector<double> psi20(20);
    for (auto& v : psi20) v = static_cast<double>(rng.below(13)) - 6.0;
    auto tau_log = EccentricitySchedule::log_growth();
    for (double p : {1.0, 2.0, kInf}) {
        auto rows = eccentric_deviation_sweep(log_pair, w5, u_flat, tau_log, psi20, p, 40);
        REQUIRE(rows.size() == 40);
        std::vector<double> pair_deviations;
        for (const auto& row : rows) {
            CHECK(row.tau_n == tau_log(row.n));
            CHECK(row.pair_deviation <= row.left_deviation + row.right_deviation + 1e-9);
            CHECK(row.right_deviation <= 1e-12);
            REQUIRE(row.support_size.has_value());
            CHECK(*row.support_size == static_cast<std::size_t>(2 * row.n + 1) *
                                           static_cast<std::size_t>(3 * row.tau_n + 1));
            pair_deviations.push_back(row.pair_deviation);
        }
        auto crossing = first_crossing(pair_deviations, 1e-6);
        REQUIRE(crossing.has_value());
        CHECK(*crossing <= 40);
    }

    // Tracked square schedule on a short horizon: the walk on Z never
    // saturates, so the sizes are the interval lengths.
    auto tracked =
        eccentric_deviation_sweep(pair, w, u, EccentricitySchedule::power(2), psi, 2.0, 10);
    for (const auto& row : tracked) {
        REQUIRE(row.support_size.has_value());
        CHECK(*row.support_size == static_cast<std::size_t>(2 * row.n + 1) *
                                       static_cast<std::size_t>(2 * row.tau_n + 1));
    }
}

TEST_CASE("support sizes reach a fixed point on finite groups") {
    auto z6 = GroupDescriptor::cyclic(6);
    auto even = FiniteSupportMeasure::uniform(
        z6, {GroupElement::finite(z6, 2), GroupElement::finite(z6, 4)});
    auto sizes = convolution_support_sizes(even, 2000);
    REQUIRE(sizes.size() == 2000);
    CHECK(sizes[0] == std::size_t{2});
    CHECK(sizes[1] == std::size_t{3});
    for (std::size_t i = 2; i < sizes.size(); ++i) CHECK(sizes[i] == std::size_t{3});
}

TEST_CASE("support tracking stops at the cap without touching deviations") {
    auto pair = local_product(integer_rotation(3), integer_rotation(4));
    auto w = lazy_step(pair.left().group());
    auto u = lazy_step(pair.right().group());
    std::vector<double> psi{1, 0, 0, 0, 2, 0, 0, -1, 0, 0, 0, 1};
    auto rows =
        eccentric_deviation_sweep(pair, w, u, EccentricitySchedule::identity(), psi, 2.0, 12, 9);
    // Supports 2n+1 pass 9 from n = 5 onward.
    for (const auto& row : rows) {
        if (row.n <= 4) {
            REQUIRE(row.support_size.has_value());
        } else {
            CHECK_FALSE(row.support_size.has_value());
        }
        CHECK(row.pair_deviation >= 0.0);
    }

    auto sizes = convolution_support_sizes(w, 6, 9);
    REQUIRE(sizes.size() == 6);
    CHECK(sizes[0] == std::size_t{3});
    CHECK(sizes[3] == std::size_t{9});
    CHECK_FALSE(sizes[4].has_value());
    CHECK_FALSE(sizes[5].has_value());
}

TEST_CASE("first crossing finds the earliest index under threshold") {
    CHECK(first_crossing({0.5, 0.2, 0.05, 0.01}, 0.1) == 3);
    CHECK(first_crossing({0.5, 0.2}, 1.0) == 1);
    CHECK_FALSE(first_crossing({0.5, 0.2}, 0.1).has_value());
    CHECK_FALSE(first_crossing({}, 0.1).has_value());
}

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergo/actions.hpp"
#include "ergo/groups.hpp"
#include "ergo/rational.hpp"
#include "ergo/spaces.hpp"

namespace ergo {

// Row-stochastic matrix in binary64.  Entry (x, y) is the mass moved from x
// to y, so application realizes psi(x) -> sum_y M[x][y] psi(y).  Rows are
// nonnegative and sum to 1 within 1e-12.  Storage is dense below 512 atoms
// and sorted sparse rows from there up.
class MarkovMatrix {
public:
    static constexpr std::size_t kDenseLimit = 512;
    static constexpr double kRowSumTolerance = 1e-12;

    class Builder {
    public:
        explicit Builder(std::size_t size);
        void add(std::size_t row, std::size_t col, double value);
        MarkovMatrix finish();

    private:
        std::size_t size_;
        std::vector<double> dense_;
        std::vector<std::vector<std::pair<std::size_t, double>>> sparse_;
    };

    static MarkovMatrix identity(std::size_t size);

    std::size_t size() const { return size_; }
    bool is_dense() const { return sparse_.empty(); }
    double at(std::size_t row, std::size_t col) const;
    std::vector<double> apply(const std::vector<double>& psi) const;

private:
    MarkovMatrix() = default;

    std::size_t size_ = 0;
    std::vector<double> dense_;
    std::vector<std::vector<std::pair<std::size_t, double>>> sparse_;

    friend MarkovMatrix multiply(const MarkovMatrix& p, const MarkovMatrix& q);
};

// Matrix product p * q: the operator applying q first, then p.
MarkovMatrix multiply(const MarkovMatrix& p, const MarkovMatrix& q);

// Dense row-stochastic matrix over the rationals; rows sum to 1 exactly.
// Used wherever an identity is claimed rather than a limit.
class ExactMarkovMatrix {
public:
    ExactMarkovMatrix(std::size_t size, std::vector<Rational> entries);

    static ExactMarkovMatrix identity(std::size_t size);

    std::size_t size() const { return size_; }
    const Rational& at(std::size_t row, std::size_t col) const;
    std::vector<Rational> apply(const std::vector<Rational>& psi) const;
    MarkovMatrix rounded() const;

private:
    std::size_t size_ = 0;
    std::vector<Rational> entries_;
};

ExactMarkovMatrix multiply(const ExactMarkovMatrix& p, const ExactMarkovMatrix& q);
bool operator==(const ExactMarkovMatrix& a, const ExactMarkovMatrix& b);
inline bool operator!=(const ExactMarkovMatrix& a, const ExactMarkovMatrix& b) {
    return !(a == b);
}

// Averaging operator of a random walk: M[x][y] = sum of w(g) over the g
// moving x to y, so application averages psi over the walk's one-step
// images.
MarkovMatrix markov_operator(const PmpAction& action, const FiniteSupportMeasure& w);
ExactMarkovMatrix exact_markov_operator(const PmpAction& action, const FiniteSupportMeasure& w);

// Block-averaging projection onto the partition's algebra: each value is
// replaced by the mean of its block.  Idempotent, self-adjoint for the
// weighted inner product, and a contraction in every p-norm.
MarkovMatrix conditional_expectation(const FiniteProbabilitySpace& space, const Partition& p);
ExactMarkovMatrix exact_conditional_expectation(const FiniteProbabilitySpace& space,
                                                const Partition& p);

// Rank-one projection onto constants: every row is the weight vector.
ExactMarkovMatrix exact_integration_matrix(const FiniteProbabilitySpace& space);

double integrate(const FiniteProbabilitySpace& space, const std::vector<double>& psi);
Rational integrate(const FiniteProbabilitySpace& space, const std::vector<Rational>& psi);

// Weighted p-norm, p in [1, infinity].  Pass
// std::numeric_limits<double>::infinity() for the max norm; every atom has
// positive mass, so the essential sup is the plain maximum.
double p_norm(const FiniteProbabilitySpace& space, const std::vector<double>& psi, double p);

// tau: n -> tau(n) >= 1, queried for n >= 1.  The unbounded kinds grow
// without bound; explicit tables answer only within their range.
class EccentricitySchedule {
public:
    static EccentricitySchedule identity();
    static EccentricitySchedule power(int exponent);
    static EccentricitySchedule log_growth();  // ceil(log2 n) + 1
    static EccentricitySchedule from_table(std::vector<int> values);

    int operator()(int n) const;
    const std::string& name() const { return name_; }

private:
    enum class Kind { identity, power, log_growth, table };
    EccentricitySchedule(Kind kind, int exponent, std::vector<int> table, std::string name);

    Kind kind_;
    int exponent_ = 1;
    std::vector<int> table_;
    std::string name_;
};

// The product walk with eccentric clocks: left factor advanced n steps,
// right factor tau(n) steps.
FiniteSupportMeasure eccentric_measures(const FiniteSupportMeasure& w,
                                        const FiniteSupportMeasure& u,
                                        const EccentricitySchedule& tau, int n,
                                        std::size_t support_cap = kDefaultSupportCap);

// Averaging operator of a walk on the product group applied through a
// commuting pair: mass m(g, h) moves x to the right image of the left
// image.  For product measures this is the matrix product of the two
// single-factor operators, in either order.
MarkovMatrix pair_markov(const CommutingPair& pair, const FiniteSupportMeasure& m);
ExactMarkovMatrix exact_pair_markov(const CommutingPair& pair, const FiniteSupportMeasure& m);

// Exact identity check for ergodic pairs: composing the two block
// projections in either order gives integration.
bool check_expectation_product(const CommutingPair& pair);

// Exact identity check on a triple product space: for the three coordinate
// partitions, composing any two distinct coordinate projections gives
// integration.
bool check_cube_expectations(const FiniteProbabilitySpace& x1, const FiniteProbabilitySpace& x2,
                             const FiniteProbabilitySpace& x3);

// delta_n = p_norm((M_n - E)psi) where M_n averages over measures[n-1] and
// E projects onto the action's components.
std::vector<double> ergodic_deviation(const PmpAction& action,
                                      const std::vector<FiniteSupportMeasure>& measures,
                                      const std::vector<double>& psi, double p);

// Same deviations for the convolution powers w, w*w, ..., computed by
// iterating the one-step matrix: the operator of the n-th power equals the
// n-th matrix power, so no group-side convolution is needed.
std::vector<double> convolution_deviation(const PmpAction& action, const FiniteSupportMeasure& w,
                                          const std::vector<double>& psi, double p, int n_max);

// delta_n = p_norm(mu(D) - A(w^n) 1_D) for a D that is a union of blocks of
// the right action's components.  The pair must be ergodic and D exactly
// block-aligned.
std::vector<double> onside_deviation(const CommutingPair& pair, const FiniteSupportMeasure& w,
                                     const std::vector<std::size_t>& block_atoms, double p,
                                     int n_max);

struct EccentricSweepRow {
    int n = 0;
    int tau_n = 0;
    // Support size of the eccentric product measure; empty once the literal
    // convolution would pass the support cap.  The deviations are unaffected:
    // they come from matrix powers.
    std::optional<std::size_t> support_size;
    double pair_deviation = 0;   // pair average against integration
    double left_deviation = 0;   // left average against its block projection
    double right_deviation = 0;  // right average of the left-projected
                                 // observable against integration
};

// Deviation sweep for the eccentric pair averages of an ergodic pair.  Each
// row also carries the two single-side deviations whose sum dominates the
// pair deviation.
std::vector<EccentricSweepRow> eccentric_deviation_sweep(
    const CommutingPair& pair, const FiniteSupportMeasure& w, const FiniteSupportMeasure& u,
    const EccentricitySchedule& tau, const std::vector<double>& psi, double p, int n_max,
    std::size_t support_cap = kDefaultSupportCap);

// Support sizes of w, w*w, ..., up to n_max, from set arithmetic on the
// supports.  Entries turn empty from the first power whose support passes
// the cap; a cap of zero disables tracking entirely.  On finite groups the
// supports reach a fixed point and the tail costs nothing.
std::vector<std::optional<std::size_t>> convolution_support_sizes(
    const FiniteSupportMeasure& w, int n_max, std::size_t support_cap = kDefaultSupportCap);

// First 1-based index with deviation <= threshold, if any.
std::optional<int> first_crossing(const std::vector<double>& deviations, double threshold);

}  // namespace ergo

#include "ergo/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "ergo/errors.hpp"

namespace ergo {

MarkovMatrix::Builder::Builder(std::size_t size) : size_(size) {
    if (size < MarkovMatrix::kDenseLimit) {
        dense_.assign(size * size, 0.0);
    } else {
        sparse_.resize(size);
    }
}

void MarkovMatrix::Builder::add(std::size_t row, std::size_t col, double value) {
    if (row >= size_ || col >= size_) {
        throw SizeMismatch("matrix entry (" + std::to_string(row) + ", " + std::to_string(col) +
                           ") outside size " + std::to_string(size_));
    }
    if (value < 0) {
        throw ErgoError("negative mass " + std::to_string(value) + " in a stochastic matrix");
    }
    if (!dense_.empty()) {
        dense_[row * size_ + col] += value;
    } else {
        sparse_[row].emplace_back(col, value);
    }
}

MarkovMatrix MarkovMatrix::Builder::finish() {
    MarkovMatrix m;
    m.size_ = size_;
    if (!dense_.empty()) {
        for (std::size_t r = 0; r < size_; ++r) {
            double sum = 0;
            for (std::size_t c = 0; c < size_; ++c) sum += dense_[r * size_ + c];
            if (std::abs(sum - 1.0) > MarkovMatrix::kRowSumTolerance) {
                throw ErgoError("stochastic row " + std::to_string(r) + " sums to " +
                                std::to_string(sum));
            }
        }
        m.dense_ = std::move(dense_);
        return m;
    }
    for (std::size_t r = 0; r < size_; ++r) {
        auto& row = sparse_[r];
        std::sort(row.begin(), row.end());
        std::size_t out = 0;
        double sum = 0;
        for (std::size_t i = 0; i < row.size();) {
            std::size_t col = row[i].first;
            double value = 0;
            while (i < row.size() && row[i].first == col) value += row[i++].second;
            row[out++] = {col, value};
            sum += value;
        }
        row.resize(out);
        if (std::abs(sum - 1.0) > MarkovMatrix::kRowSumTolerance) {
            throw ErgoError("stochastic row " + std::to_string(r) + " sums to " +
                            std::to_string(sum));
        }
    }
    m.sparse_ = std::move(sparse_);
    return m;
}

MarkovMatrix MarkovMatrix::identity(std::size_t size) {
    Builder b(size);
    for (std::size_t i = 0; i < size; ++i) b.add(i, i, 1.0);
    return b.finish();
}

double MarkovMatrix::at(std::size_t row, std::size_t col) const {
    if (row >= size_ || col >= size_) {
        throw SizeMismatch("matrix entry (" + std::to_string(row) + ", " + std::to_string(col) +
                           ") outside size " + std::to_string(size_));
    }
    if (!dense_.empty()) return dense_[row * size_ + col];
    const auto& entries = sparse_[row];
    auto it = std::lower_bound(entries.begin(), entries.end(), col,
                               [](const auto& e, std::size_t c) { return e.first < c; });
    if (it != entries.end() && it->first == col) return it->second;
    return 0.0;
}

std::vector<double> MarkovMatrix::apply(const std::vector<double>& psi) const {
    if (psi.size() != size_) {
        throw SizeMismatch("observable of length " + std::to_string(psi.size()) +
                           " against a matrix of size " + std::to_string(size_));
    }
    std::vector<double> out(size_, 0.0);
    if (!dense_.empty()) {
        for (std::size_t r = 0; r < size_; ++r) {
            double acc = 0;
            const double* row = dense_.data() + r * size_;
            for (std::size_t c = 0; c < size_; ++c) acc += row[c] * psi[c];
            out[r] = acc;
        }
        return out;
    }
    for (std::size_t r = 0; r < size_; ++r) {
        double acc = 0;
        for (const auto& [c, v] : sparse_[r]) acc += v * psi[c];
        out[r] = acc;
    }
    return out;
}

MarkovMatrix multiply(const MarkovMatrix& p, const MarkovMatrix& q) {
    if (p.size() != q.size()) {
        throw SizeMismatch("matrix sizes " + std::to_string(p.size()) + " and " +
                           std::to_string(q.size()));
    }
    const std::size_t n = p.size();
    MarkovMatrix::Builder b(n);
    std::vector<double> acc(n, 0.0);
    auto scan_row = [n](const MarkovMatrix& m, std::size_t r, auto&& fn) {
        if (!m.dense_.empty()) {
            const double* row = m.dense_.data() + r * n;
            for (std::size_t c = 0; c < n; ++c) {
                if (row[c] != 0.0) fn(c, row[c]);
            }
        } else {
            for (const auto& [c, v] : m.sparse_[r]) fn(c, v);
        }
    };
    for (std::size_t r = 0; r < n; ++r) {
        std::fill(acc.begin(), acc.end(), 0.0);
        scan_row(p, r, [&](std::size_t z, double pv) {
            scan_row(q, z, [&](std::size_t y, double qv) { acc[y] += pv * qv; });
        });
        for (std::size_t y = 0; y < n; ++y) {
            if (acc[y] != 0.0) b.add(r, y, acc[y]);
        }
    }
    return b.finish();
}

ExactMarkovMatrix::ExactMarkovMatrix(std::size_t size, std::vector<Rational> entries)
    : size_(size), entries_(std::move(entries)) {
    if (entries_.size() != size_ * size_) {
        throw SizeMismatch("exact matrix of size " + std::to_string(size_) + " needs " +
                           std::to_string(size_ * size_) + " entries, got " +
                           std::to_string(entries_.size()));
    }
    for (std::size_t r = 0; r < size_; ++r) {
        Rational sum(0);
        for (std::size_t c = 0; c < size_; ++c) {
            const Rational& v = entries_[r * size_ + c];
            if (sgn(v) < 0) throw ErgoError("negative mass in a stochastic matrix");
            sum += v;
        }
        if (sum != 1) {
            throw ErgoError("stochastic row " + std::to_string(r) + " sums to " +
                            format_rational(sum));
        }
    }
}

ExactMarkovMatrix ExactMarkovMatrix::identity(std::size_t size) {
    std::vector<Rational> entries(size * size, Rational(0));
    for (std::size_t i = 0; i < size; ++i) entries[i * size + i] = 1;
    return {size, std::move(entries)};
}

const Rational& ExactMarkovMatrix::at(std::size_t row, std::size_t col) const {
    if (row >= size_ || col >= size_) {
        throw SizeMismatch("matrix entry (" + std::to_string(row) + ", " + std::to_string(col) +
                           ") outside size " + std::to_string(size_));
    }
    return entries_[row * size_ + col];
}

std::vector<Rational> ExactMarkovMatrix::apply(const std::vector<Rational>& psi) const {
    if (psi.size() != size_) {
        throw SizeMismatch("observable of length " + std::to_string(psi.size()) +
                           " against a matrix of size " + std::to_string(size_));
    }
    std::vector<Rational> out(size_, Rational(0));
    for (std::size_t r = 0; r < size_; ++r) {
        Rational acc(0);
        for (std::size_t c = 0; c < size_; ++c) acc += entries_[r * size_ + c] * psi[c];
        out[r] = acc;
    }
    return out;
}

MarkovMatrix ExactMarkovMatrix::rounded() const {
    MarkovMatrix::Builder b(size_);
    for (std::size_t r = 0; r < size_; ++r) {
        for (std::size_t c = 0; c < size_; ++c) {
            const Rational& v = entries_[r * size_ + c];
            if (v != 0) b.add(r, c, to_double(v));
        }
    }
    return b.finish();
}

ExactMarkovMatrix multiply(const ExactMarkovMatrix& p, const ExactMarkovMatrix& q) {
    if (p.size() != q.size()) {
        throw SizeMismatch("matrix sizes " + std::to_string(p.size()) + " and " +
                           std::to_string(q.size()));
    }
    const std::size_t n = p.size();
    std::vector<Rational> entries(n * n, Rational(0));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t z = 0; z < n; ++z) {
            const Rational& pv = p.at(r, z);
            if (pv == 0) continue;
            for (std::size_t y = 0; y < n; ++y) {
                const Rational& qv = q.at(z, y);
                if (qv != 0) entries[r * n + y] += pv * qv;
            }
        }
    }
    return {n, std::move(entries)};
}

bool operator==(const ExactMarkovMatrix& a, const ExactMarkovMatrix& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < a.size(); ++c) {
            if (a.at(r, c) != b.at(r, c)) return false;
        }
    }
    return true;
}

namespace {

void require_measure_group(const PmpAction& action, const FiniteSupportMeasure& w) {
    if (!same_group(*action.group(), *w.group())) {
        throw DescriptorMismatch("measure lives on a different group than the action");
    }
}

}  // namespace

MarkovMatrix markov_operator(const PmpAction& action, const FiniteSupportMeasure& w) {
    require_measure_group(action, w);
    const std::size_t n = action.space().atom_count();
    MarkovMatrix::Builder b(n);
    for (const auto& [g, weight] : w.weights()) {
        Automorphism image = action.automorphism(g);
        const double v = to_double(weight);
        for (std::size_t x = 0; x < n; ++x) b.add(x, image(x), v);
    }
    return b.finish();
}

ExactMarkovMatrix exact_markov_operator(const PmpAction& action, const FiniteSupportMeasure& w) {
    require_measure_group(action, w);
    const std::size_t n = action.space().atom_count();
    std::vector<Rational> entries(n * n, Rational(0));
    for (const auto& [g, weight] : w.weights()) {
        Automorphism image = action.automorphism(g);
        for (std::size_t x = 0; x < n; ++x) entries[x * n + image(x)] += weight;
    }
    return {n, std::move(entries)};
}

MarkovMatrix conditional_expectation(const FiniteProbabilitySpace& space, const Partition& p) {
    return exact_conditional_expectation(space, p).rounded();
}

ExactMarkovMatrix exact_conditional_expectation(const FiniteProbabilitySpace& space,
                                                const Partition& p) {
    if (p.atom_count() != space.atom_count()) {
        throw SizeMismatch("partition covers " + std::to_string(p.atom_count()) +
                           " atoms on a space with " + std::to_string(space.atom_count()));
    }
    const std::size_t n = space.atom_count();
    std::vector<Rational> block_mass(p.block_count(), Rational(0));
    for (std::size_t x = 0; x < n; ++x) {
        block_mass[static_cast<std::size_t>(p.block_of(x))] += space.weight(x);
    }
    std::vector<Rational> entries(n * n, Rational(0));
    for (std::size_t x = 0; x < n; ++x) {
        const auto block = static_cast<std::size_t>(p.block_of(x));
        for (std::size_t y = 0; y < n; ++y) {
            if (static_cast<std::size_t>(p.block_of(y)) == block) {
                entries[x * n + y] = space.weight(y) / block_mass[block];
            }
        }
    }
    return {n, std::move(entries)};
}

ExactMarkovMatrix exact_integration_matrix(const FiniteProbabilitySpace& space) {
    const std::size_t n = space.atom_count();
    std::vector<Rational> entries(n * n, Rational(0));
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) entries[x * n + y] = space.weight(y);
    }
    return {n, std::move(entries)};
}

double integrate(const FiniteProbabilitySpace& space, const std::vector<double>& psi) {
    if (psi.size() != space.atom_count()) {
        throw SizeMismatch("observable of length " + std::to_string(psi.size()) + " on " +
                           std::to_string(space.atom_count()) + " atoms");
    }
    double acc = 0;
    for (std::size_t x = 0; x < psi.size(); ++x) acc += to_double(space.weight(x)) * psi[x];
    return acc;
}

Rational integrate(const FiniteProbabilitySpace& space, const std::vector<Rational>& psi) {
    if (psi.size() != space.atom_count()) {
        throw SizeMismatch("observable of length " + std::to_string(psi.size()) + " on " +
                           std::to_string(space.atom_count()) + " atoms");
    }
    Rational acc(0);
    for (std::size_t x = 0; x < psi.size(); ++x) acc += space.weight(x) * psi[x];
    return acc;
}

double p_norm(const FiniteProbabilitySpace& space, const std::vector<double>& psi, double p) {
    if (psi.size() != space.atom_count()) {
        throw SizeMismatch("observable of length " + std::to_string(psi.size()) + " on " +
                           std::to_string(space.atom_count()) + " atoms");
    }
    if (std::isnan(p) || p < 1.0) {
        throw BadExponent("p-norm needs p in [1, infinity], got " + std::to_string(p));
    }
    if (std::isinf(p)) {
        double best = 0;
        for (double v : psi) best = std::max(best, std::abs(v));
        return best;
    }
    double acc = 0;
    for (std::size_t x = 0; x < psi.size(); ++x) {
        acc += to_double(space.weight(x)) * std::pow(std::abs(psi[x]), p);
    }
    return std::pow(acc, 1.0 / p);
}

EccentricitySchedule::EccentricitySchedule(Kind kind, int exponent, std::vector<int> table,
                                           std::string name)
    : kind_(kind), exponent_(exponent), table_(std::move(table)), name_(std::move(name)) {}

EccentricitySchedule EccentricitySchedule::identity() {
    return {Kind::identity, 1, {}, "n"};
}

EccentricitySchedule EccentricitySchedule::power(int exponent) {
    if (exponent < 1) {
        throw ErgoError("schedule exponent must be at least 1, got " + std::to_string(exponent));
    }
    return {Kind::power, exponent, {}, "n^" + std::to_string(exponent)};
}

EccentricitySchedule EccentricitySchedule::log_growth() {
    return {Kind::log_growth, 1, {}, "ceil(log2(n))+1"};
}

EccentricitySchedule EccentricitySchedule::from_table(std::vector<int> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 1) {
            throw ErgoError("schedule value " + std::to_string(values[i]) + " at position " +
                            std::to_string(i + 1) + " is below 1");
        }
    }
    return {Kind::table, 1, std::move(values), "table"};
}

int EccentricitySchedule::operator()(int n) const {
    if (n < 1) throw ErgoError("schedules are defined for n >= 1, got " + std::to_string(n));
    switch (kind_) {
        case Kind::identity:
            return n;
        case Kind::power: {
            long long value = 1;
            for (int i = 0; i < exponent_; ++i) {
                value *= n;
                if (value > std::numeric_limits<int>::max()) {
                    throw ErgoError("schedule value overflows at n = " + std::to_string(n));
                }
            }
            return static_cast<int>(value);
        }
        case Kind::log_growth: {
            int bits = 0;
            for (int v = n; v > 1; v = (v + 1) / 2) ++bits;
            return bits + 1;
        }
        case Kind::table:
            if (static_cast<std::size_t>(n) > table_.size()) {
                throw ErgoError("schedule table of length " + std::to_string(table_.size()) +
                                " queried at n = " + std::to_string(n));
            }
            return table_[static_cast<std::size_t>(n) - 1];
    }
    throw ErgoError("unreachable schedule kind");
}

FiniteSupportMeasure eccentric_measures(const FiniteSupportMeasure& w,
                                        const FiniteSupportMeasure& u,
                                        const EccentricitySchedule& tau, int n,
                                        std::size_t support_cap) {
    return product_measure(autoconvolve(w, n, support_cap),
                           autoconvolve(u, tau(n), support_cap));
}

MarkovMatrix pair_markov(const CommutingPair& pair, const FiniteSupportMeasure& m) {
    return exact_pair_markov(pair, m).rounded();
}

ExactMarkovMatrix exact_pair_markov(const CommutingPair& pair, const FiniteSupportMeasure& m) {
    const GroupPtr& mg = m.group();
    if (mg->kind() != GroupKind::product || !same_group(*mg->left(), *pair.left().group()) ||
        !same_group(*mg->right(), *pair.right().group())) {
        throw DescriptorMismatch("pair walk needs a measure on the product of the two groups");
    }
    const std::size_t n = pair.space().atom_count();
    std::vector<Rational> entries(n * n, Rational(0));
    for (const auto& [gh, weight] : m.weights()) {
        Automorphism a = pair.left().automorphism(gh.first());
        Automorphism b = pair.right().automorphism(gh.second());
        for (std::size_t x = 0; x < n; ++x) entries[x * n + b(a(x))] += weight;
    }
    return {n, std::move(entries)};
}

bool check_expectation_product(const CommutingPair& pair) {
    if (!is_ergodic(pair)) {
        throw NotErgodic("expectation product identity needs an ergodic pair");
    }
    auto ea = exact_conditional_expectation(pair.space(), invariant_partition(pair.left()));
    auto eb = exact_conditional_expectation(pair.space(), invariant_partition(pair.right()));
    auto ex = exact_integration_matrix(pair.space());
    return multiply(eb, ea) == ex && multiply(ea, eb) == ex;
}

bool check_cube_expectations(const FiniteProbabilitySpace& x1, const FiniteProbabilitySpace& x2,
                             const FiniteProbabilitySpace& x3) {
    FiniteProbabilitySpace y = product_space(product_space(x1, x2), x3);
    const std::size_t n2 = x2.atom_count();
    const std::size_t n3 = x3.atom_count();
    std::vector<int> by_coord[3];
    for (auto& ids : by_coord) ids.resize(y.atom_count());
    for (std::size_t atom = 0; atom < y.atom_count(); ++atom) {
        std::size_t rest = atom;
        const auto c3 = static_cast<int>(rest % n3);
        rest /= n3;
        const auto c2 = static_cast<int>(rest % n2);
        const auto c1 = static_cast<int>(rest / n2);
        by_coord[0][atom] = c1;
        by_coord[1][atom] = c2;
        by_coord[2][atom] = c3;
    }
    ExactMarkovMatrix projections[3] = {
        exact_conditional_expectation(y, Partition(by_coord[0])),
        exact_conditional_expectation(y, Partition(by_coord[1])),
        exact_conditional_expectation(y, Partition(by_coord[2]))};
    auto ey = exact_integration_matrix(y);
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            if (j == k) continue;
            if (multiply(projections[j], projections[k]) != ey) return false;
        }
    }
    return true;
}

namespace {

std::vector<double> residual(const std::vector<double>& lhs, const std::vector<double>& rhs) {
    std::vector<double> out(lhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) out[i] = lhs[i] - rhs[i];
    return out;
}

// Powers of a stochastic matrix applied to vectors through a square cache:
// apply(m, v) costs one matrix-vector product per set bit of m.  Repeated
// squaring drifts off exact row sum 1 by accumulation, so the powers live
// on raw rows rather than in the validated matrix type.
class MatrixPowerCache {
public:
    explicit MatrixPowerCache(const MarkovMatrix& base) : n_(base.size()) {
        std::vector<double> flat(n_ * n_, 0.0);
        for (std::size_t r = 0; r < n_; ++r) {
            for (std::size_t c = 0; c < n_; ++c) flat[r * n_ + c] = base.at(r, c);
        }
        squares_.push_back(std::move(flat));
    }

    std::vector<double> apply(long long power, std::vector<double> v) {
        while ((1LL << squares_.size()) <= power) {
            squares_.push_back(square(squares_.back()));
        }
        for (std::size_t bit = 0; power != 0; ++bit, power >>= 1) {
            if (power & 1) v = mat_vec(squares_[bit], v);
        }
        return v;
    }

private:
    std::vector<double> square(const std::vector<double>& m) const {
        std::vector<double> out(n_ * n_, 0.0);
        for (std::size_t r = 0; r < n_; ++r) {
            for (std::size_t z = 0; z < n_; ++z) {
                const double v = m[r * n_ + z];
                if (v == 0.0) continue;
                const double* row = m.data() + z * n_;
                double* target = out.data() + r * n_;
                for (std::size_t c = 0; c < n_; ++c) target[c] += v * row[c];
            }
        }
        return out;
    }

    std::vector<double> mat_vec(const std::vector<double>& m, const std::vector<double>& v) const {
        std::vector<double> out(n_, 0.0);
        for (std::size_t r = 0; r < n_; ++r) {
            const double* row = m.data() + r * n_;
            double acc = 0;
            for (std::size_t c = 0; c < n_; ++c) acc += row[c] * v[c];
            out[r] = acc;
        }
        return out;
    }

    std::size_t n_;
    std::vector<std::vector<double>> squares_;
};

}  // namespace

std::vector<double> ergodic_deviation(const PmpAction& action,
                                      const std::vector<FiniteSupportMeasure>& measures,
                                      const std::vector<double>& psi, double p) {
    const auto fixed =
        conditional_expectation(action.space(), invariant_partition(action)).apply(psi);
    std::vector<double> out;
    out.reserve(measures.size());
    for (const auto& w : measures) {
        out.push_back(p_norm(action.space(), residual(markov_operator(action, w).apply(psi), fixed), p));
    }
    return out;
}

std::vector<double> convolution_deviation(const PmpAction& action, const FiniteSupportMeasure& w,
                                          const std::vector<double>& psi, double p, int n_max) {
    const auto fixed =
        conditional_expectation(action.space(), invariant_partition(action)).apply(psi);
    MarkovMatrix step = markov_operator(action, w);
    std::vector<double> averaged = psi;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(n_max, 0)));
    for (int n = 1; n <= n_max; ++n) {
        averaged = step.apply(averaged);
        out.push_back(p_norm(action.space(), residual(averaged, fixed), p));
    }
    return out;
}

std::vector<double> onside_deviation(const CommutingPair& pair, const FiniteSupportMeasure& w,
                                     const std::vector<std::size_t>& block_atoms, double p,
                                     int n_max) {
    if (!is_ergodic(pair)) throw NotErgodic("one-sided averaging needs an ergodic pair");
    const FiniteProbabilitySpace& space = pair.space();
    std::vector<char> member(space.atom_count(), 0);
    for (std::size_t atom : block_atoms) {
        if (atom >= space.atom_count()) {
            throw BlockOutOfRange("atom " + std::to_string(atom) + " outside the space");
        }
        member[atom] = 1;
    }
    Partition part_b = invariant_partition(pair.right());
    for (std::size_t x = 0; x < space.atom_count(); ++x) {
        for (std::size_t y = x + 1; y < space.atom_count(); ++y) {
            if (part_b.block_of(x) == part_b.block_of(y) && member[x] != member[y]) {
                throw NotInvariant("atoms " + std::to_string(x) + " and " + std::to_string(y) +
                                   " share a right component but only one is in the set");
            }
        }
    }
    Rational mass(0);
    std::vector<double> indicator(space.atom_count(), 0.0);
    for (std::size_t x = 0; x < space.atom_count(); ++x) {
        if (member[x]) {
            mass += space.weight(x);
            indicator[x] = 1.0;
        }
    }
    const double target = to_double(mass);
    MarkovMatrix step = markov_operator(pair.left(), w);
    std::vector<double> averaged = std::move(indicator);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(n_max, 0)));
    std::vector<double> diff(space.atom_count());
    for (int n = 1; n <= n_max; ++n) {
        averaged = step.apply(averaged);
        for (std::size_t x = 0; x < space.atom_count(); ++x) diff[x] = target - averaged[x];
        out.push_back(p_norm(space, diff, p));
    }
    return out;
}

std::vector<std::optional<std::size_t>> convolution_support_sizes(const FiniteSupportMeasure& w,
                                                                  int n_max,
                                                                  std::size_t support_cap) {
    std::vector<std::optional<std::size_t>> out;
    if (n_max < 1) return out;
    out.reserve(static_cast<std::size_t>(n_max));
    // Weights stay positive under convolution, so the support of the n-th
    // power is the n-fold product set and the sizes come from set arithmetic
    // alone.  A zero cap disables tracking.
    using ElementSet = std::set<GroupElement, ElementOrder>;
    ElementSet current;
    for (const auto& [g, weight] : w.weights()) current.insert(g);
    if (current.size() > support_cap) {
        out.assign(static_cast<std::size_t>(n_max), std::nullopt);
        return out;
    }
    out.emplace_back(current.size());
    for (int n = 2; n <= n_max; ++n) {
        ElementSet next;
        for (const auto& [g, weight] : w.weights()) {
            for (const auto& h : current) next.insert(multiply(g, h));
        }
        if (next.size() > support_cap) {
            out.resize(static_cast<std::size_t>(n_max), std::nullopt);
            return out;
        }
        if (next == current) {
            // Fixed point: the support absorbs another step, so every later
            // power has the same support.
            out.resize(static_cast<std::size_t>(n_max), std::optional(current.size()));
            return out;
        }
        out.emplace_back(next.size());
        current = std::move(next);
    }
    return out;
}

std::vector<EccentricSweepRow> eccentric_deviation_sweep(
    const CommutingPair& pair, const FiniteSupportMeasure& w, const FiniteSupportMeasure& u,
    const EccentricitySchedule& tau, const std::vector<double>& psi, double p, int n_max,
    std::size_t support_cap) {
    if (!is_ergodic(pair)) throw NotErgodic("eccentric averaging needs an ergodic pair");
    const FiniteProbabilitySpace& space = pair.space();
    const PmpAction& left = pair.left();
    const PmpAction& right = pair.right();

    const auto left_fixed =
        conditional_expectation(space, invariant_partition(left)).apply(psi);
    const double mean = integrate(space, psi);
    const std::vector<double> mean_vec(space.atom_count(), mean);
    const auto right_fixed =
        conditional_expectation(space, invariant_partition(right)).apply(left_fixed);

    MarkovMatrix left_step = markov_operator(left, w);
    MatrixPowerCache right_powers(markov_operator(right, u));

    int tau_max = 1;
    for (int n = 1; n <= n_max; ++n) tau_max = std::max(tau_max, tau(n));
    auto left_supports = convolution_support_sizes(w, n_max, support_cap);
    auto right_supports = convolution_support_sizes(u, tau_max, support_cap);

    std::vector<EccentricSweepRow> rows;
    rows.reserve(static_cast<std::size_t>(std::max(n_max, 0)));
    std::vector<double> left_avg = psi;
    for (int n = 1; n <= n_max; ++n) {
        const int m = tau(n);
        left_avg = left_step.apply(left_avg);

        EccentricSweepRow row;
        row.n = n;
        row.tau_n = m;
        const auto& ls = left_supports[static_cast<std::size_t>(n - 1)];
        const auto& rs = right_supports[static_cast<std::size_t>(m - 1)];
        if (ls && rs) row.support_size = *ls * *rs;

        auto pair_avg = right_powers.apply(m, left_avg);
        row.pair_deviation = p_norm(space, residual(pair_avg, mean_vec), p);
        row.left_deviation = p_norm(space, residual(left_avg, left_fixed), p);
        auto right_avg = right_powers.apply(m, left_fixed);
        row.right_deviation = p_norm(space, residual(right_avg, right_fixed), p);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::optional<int> first_crossing(const std::vector<double>& deviations, double threshold) {
    for (std::size_t i = 0; i < deviations.size(); ++i) {
        if (deviations[i] <= threshold) return static_cast<int>(i) + 1;
    }
    return std::nullopt;
}

}  // namespace ergo

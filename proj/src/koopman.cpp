#include "ergo/koopman.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "ergo/rational.hpp"

namespace ergo {

namespace {

void require_same_group(const GroupPtr& a, const GroupPtr& b, const char* what) {
    if (!same_group(a, b)) throw DescriptorMismatch(what);
}

void require_same_space(const KoopmanOperator& a, const KoopmanOperator& b) {
    if (!same_space(a.space(), b.space())) {
        throw ErgoError("koopman operators live on different spaces");
    }
}

}  // namespace

GroupRingElement::GroupRingElement(GroupPtr group) : group_(std::move(group)) {
    if (!group_) throw ErgoError("group ring element needs a group");
}

GroupRingElement GroupRingElement::delta(const GroupElement& g) {
    GroupRingElement result(g.group());
    result.set(g, Complex(1.0, 0.0));
    return result;
}

Complex GroupRingElement::at(const GroupElement& g) const {
    require_same_group(g.group(), group_, "group ring lookup from another group");
    auto it = coefficients_.find(g);
    return it == coefficients_.end() ? Complex(0.0, 0.0) : it->second;
}

void GroupRingElement::set(const GroupElement& g, Complex value) {
    require_same_group(g.group(), group_, "group ring entry from another group");
    if (value == Complex(0.0, 0.0)) {
        coefficients_.erase(g);
    } else {
        coefficients_[g] = value;
    }
}

void GroupRingElement::add(const GroupElement& g, Complex value) { set(g, at(g) + value); }

GroupRingElement GroupRingElement::star() const {
    GroupRingElement result(group_);
    for (const auto& [g, value] : coefficients_) result.set(inverse(g), std::conj(value));
    return result;
}

GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
    require_same_group(a.group(), b.group(), "group ring sum across groups");
    GroupRingElement result = a;
    for (const auto& [g, value] : b.coefficients()) result.add(g, value);
    return result;
}

GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) {
    return a + Complex(-1.0, 0.0) * b;
}

GroupRingElement operator*(Complex scalar, const GroupRingElement& a) {
    GroupRingElement result(a.group());
    for (const auto& [g, value] : a.coefficients()) result.set(g, scalar * value);
    return result;
}

GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    require_same_group(a.group(), b.group(), "group ring product across groups");
    GroupRingElement result(a.group());
    for (const auto& [g, left] : a.coefficients()) {
        for (const auto& [h, right] : b.coefficients()) {
            result.add(multiply(g, h), left * right);
        }
    }
    return result;
}

bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return same_group(a.group(), b.group()) && a.coefficients() == b.coefficients();
}

KoopmanOperator::KoopmanOperator(FiniteProbabilitySpace space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(space_.atom_count());
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw ErgoError("koopman matrix shape does not match the space");
    }
}

KoopmanOperator KoopmanOperator::identity(FiniteProbabilitySpace space) {
    const auto n = static_cast<Eigen::Index>(space.atom_count());
    return KoopmanOperator(std::move(space), Matrix::Identity(n, n));
}

KoopmanOperator KoopmanOperator::zero(FiniteProbabilitySpace space) {
    const auto n = static_cast<Eigen::Index>(space.atom_count());
    return KoopmanOperator(std::move(space), Matrix::Zero(n, n));
}

KoopmanOperator KoopmanOperator::adjoint() const {
    const auto n = static_cast<Eigen::Index>(size());
    Matrix result(n, n);
    for (Eigen::Index x = 0; x < n; ++x) {
        const double wx = to_double(space_.weight(static_cast<std::size_t>(x)));
        for (Eigen::Index y = 0; y < n; ++y) {
            const double wy = to_double(space_.weight(static_cast<std::size_t>(y)));
            result(x, y) = std::conj(matrix_(y, x)) * (wy / wx);
        }
    }
    return KoopmanOperator(space_, std::move(result));
}

KoopmanOperator operator+(const KoopmanOperator& a, const KoopmanOperator& b) {
    require_same_space(a, b);
    return KoopmanOperator(a.space(), a.matrix() + b.matrix());
}

KoopmanOperator operator-(const KoopmanOperator& a, const KoopmanOperator& b) {
    require_same_space(a, b);
    return KoopmanOperator(a.space(), a.matrix() - b.matrix());
}

KoopmanOperator operator*(Complex scalar, const KoopmanOperator& a) {
    return KoopmanOperator(a.space(), scalar * a.matrix());
}

KoopmanOperator operator*(const KoopmanOperator& a, const KoopmanOperator& b) {
    require_same_space(a, b);
    return KoopmanOperator(a.space(), a.matrix() * b.matrix());
}

Complex weighted_inner_product(const FiniteProbabilitySpace& space,
                               const KoopmanOperator::Vector& psi,
                               const KoopmanOperator::Vector& chi) {
    if (psi.size() != chi.size() ||
        psi.size() != static_cast<Eigen::Index>(space.atom_count())) {
        throw ErgoError("inner product arguments do not match the space");
    }
    Complex total(0.0, 0.0);
    for (Eigen::Index x = 0; x < psi.size(); ++x) {
        total += to_double(space.weight(static_cast<std::size_t>(x))) * psi(x) *
                 std::conj(chi(x));
    }
    return total;
}

double weighted_norm(const FiniteProbabilitySpace& space, const KoopmanOperator::Vector& psi) {
    return std::sqrt(std::max(0.0, weighted_inner_product(space, psi, psi).real()));
}

KoopmanOperator koopman(const Automorphism& t, const FiniteProbabilitySpace& space) {
    if (t.size() != space.atom_count()) {
        throw ErgoError("automorphism size does not match the space");
    }
    if (!preserves_measure(space, t)) {
        throw ErgoError("composition operators need weight-preserving automorphisms");
    }
    const auto n = static_cast<Eigen::Index>(space.atom_count());
    KoopmanOperator::Matrix m = KoopmanOperator::Matrix::Zero(n, n);
    // The operator sends psi to psi after the inverse, so column y feeds
    // row t(y).
    for (std::size_t y = 0; y < space.atom_count(); ++y) {
        m(static_cast<Eigen::Index>(t(y)), static_cast<Eigen::Index>(y)) = Complex(1.0, 0.0);
    }
    return KoopmanOperator(space, std::move(m));
}

KoopmanOperator evaluate(const PmpAction& action, const GroupRingElement& phi) {
    if (!same_group(*action.group(), *phi.group())) {
        throw DescriptorMismatch("group ring element from another group");
    }
    const auto n = static_cast<Eigen::Index>(action.space().atom_count());
    KoopmanOperator::Matrix m = KoopmanOperator::Matrix::Zero(n, n);
    for (const auto& [g, coefficient] : phi.coefficients()) {
        const Automorphism image = action.automorphism(g);
        for (std::size_t y = 0; y < action.space().atom_count(); ++y) {
            m(static_cast<Eigen::Index>(image(y)), static_cast<Eigen::Index>(y)) +=
                coefficient;
        }
    }
    return KoopmanOperator(action.space(), std::move(m));
}

namespace {

// Similarity by the diagonal square-root weights: turns the weighted
// operator norm into the plain spectral norm.
Eigen::MatrixXcd weight_conjugated(const KoopmanOperator& op) {
    const auto n = static_cast<Eigen::Index>(op.size());
    std::vector<double> root(op.size());
    for (std::size_t x = 0; x < op.size(); ++x) root[x] = std::sqrt(to_double(op.space().weight(x)));
    Eigen::MatrixXcd b(n, n);
    for (Eigen::Index x = 0; x < n; ++x) {
        for (Eigen::Index y = 0; y < n; ++y) {
            b(x, y) = op.matrix()(x, y) *
                      (root[static_cast<std::size_t>(x)] / root[static_cast<std::size_t>(y)]);
        }
    }
    return b;
}

}  // namespace

OperatorNormResult operator_norm_details(const KoopmanOperator& op) {
    const Eigen::MatrixXcd b = weight_conjugated(op);
    const Eigen::MatrixXcd gram = b.adjoint() * b;
    const auto n = gram.rows();

    OperatorNormResult result;
    if (op.size() < kDenseEigensolveLimit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram);
        result.value = std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
        return result;
    }

    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = Complex(1.0 + 0.001 * static_cast<double>(i + 1) / static_cast<double>(n), 0.0);
    }
    v.normalize();

    double eigenvalue = 0.0;
    for (std::size_t it = 1; it <= kNormIterationCap; ++it) {
        const Eigen::VectorXcd w = gram * v;
        eigenvalue = v.dot(w).real();
        // Residual bound for Hermitian matrices: the nearest eigenvalue is
        // within the residual norm, so this is a relative stop with a unit
        // floor for near-zero operators.
        const double residual = (w - eigenvalue * v).norm();
        if (residual <= kNormTolerance * std::max(eigenvalue, 1.0)) {
            result.value = std::sqrt(std::max(0.0, eigenvalue));
            result.iterations = it;
            return result;
        }
        const double scale = w.norm();
        if (scale == 0.0) {
            result.value = 0.0;
            result.iterations = it;
            return result;
        }
        v = w / scale;
    }
    result.value = std::sqrt(std::max(0.0, eigenvalue));
    result.iterations = kNormIterationCap;
    result.converged = false;
    return result;
}

double operator_norm(const KoopmanOperator& op) {
    const OperatorNormResult result = operator_norm_details(op);
    if (!result.converged) {
        throw IterationCapExceeded("operator norm power iteration hit the cap");
    }
    return result.value;
}

namespace {

using ColumnEntries = std::vector<std::vector<std::pair<Eigen::Index, Complex>>>;

ColumnEntries nonzero_columns(const Eigen::MatrixXcd& m) {
    ColumnEntries columns(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
        for (Eigen::Index row = 0; row < m.rows(); ++row) {
            if (m(row, col) != Complex(0.0, 0.0)) {
                columns[static_cast<std::size_t>(col)].emplace_back(row, m(row, col));
            }
        }
    }
    return columns;
}

}  // namespace

TensorCheckReport tensor_check(const PmpAction& c, const PmpAction& d,
                               const GroupRingElement& phi) {
    const std::size_t ny = c.space().atom_count();
    const std::size_t nz = d.space().atom_count();
    if (ny * nz > kTensorDimensionCap) {
        throw DimensionOverflow("tensor check dimension over the cap");
    }

    const CommutingPair pair = local_product(c, d);
    const KoopmanOperator through_pair = evaluate(pair.as_product_action(), phi);

    const auto rows = static_cast<Eigen::Index>(ny * nz);
    KoopmanOperator::Matrix assembled = KoopmanOperator::Matrix::Zero(rows, rows);
    for (const auto& [g, coefficient] : phi.coefficients()) {
        const KoopmanOperator left = koopman(c.automorphism(g.first()), c.space());
        const KoopmanOperator right = koopman(d.automorphism(g.second()), d.space());
        const ColumnEntries left_columns = nonzero_columns(left.matrix());
        const ColumnEntries right_columns = nonzero_columns(right.matrix());
        for (std::size_t yp = 0; yp < ny; ++yp) {
            for (const auto& [y, lv] : left_columns[yp]) {
                for (std::size_t zp = 0; zp < nz; ++zp) {
                    for (const auto& [z, rv] : right_columns[zp]) {
                        const auto row = y * static_cast<Eigen::Index>(nz) + z;
                        const auto col = static_cast<Eigen::Index>(yp * nz + zp);
                        assembled(row, col) += coefficient * lv * rv;
                    }
                }
            }
        }
    }
    const KoopmanOperator tensor(pair.space(), std::move(assembled));

    TensorCheckReport report;
    report.pair_norm = operator_norm(through_pair);
    report.tensor_norm = operator_norm(tensor);
    report.matches = std::abs(report.pair_norm - report.tensor_norm) <= kTensorTolerance;
    return report;
}

bool conjugation_invariance_check(const PmpAction& action, const GroupRingElement& phi,
                                  const Automorphism& u) {
    const KoopmanOperator base = evaluate(action, phi);
    const KoopmanOperator forward = koopman(u, action.space());
    const KoopmanOperator backward = koopman(invert(u), action.space());
    const double direct = operator_norm(base);
    const double conjugated = operator_norm(backward * base * forward);
    return std::abs(direct - conjugated) <= kConjugationTolerance;
}

}  // namespace ergo

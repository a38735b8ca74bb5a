#pragma once

#include <complex>
#include <cstddef>
#include <map>

#include <Eigen/Dense>

#include "ergo/actions.hpp"
#include "ergo/errors.hpp"
#include "ergo/groups.hpp"
#include "ergo/spaces.hpp"

namespace ergo {

using Complex = std::complex<double>;

// Finitely supported complex function on a group, with the convolution
// product and the involution star: the starred value at g is the conjugate
// of the value at g inverse.
class GroupRingElement {
public:
    explicit GroupRingElement(GroupPtr group);

    static GroupRingElement delta(const GroupElement& g);

    const GroupPtr& group() const { return group_; }
    const std::map<GroupElement, Complex, ElementOrder>& coefficients() const {
        return coefficients_;
    }

    Complex at(const GroupElement& g) const;
    // Setting an entry to zero erases it, keeping the support exact.
    void set(const GroupElement& g, Complex value);
    void add(const GroupElement& g, Complex value);

    GroupRingElement star() const;

private:
    GroupPtr group_;
    std::map<GroupElement, Complex, ElementOrder> coefficients_;
};

GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b);
GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b);
GroupRingElement operator*(Complex scalar, const GroupRingElement& a);
// Convolution: the coefficient at g collects products over factorizations
// g = hk.
GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b);

bool operator==(const GroupRingElement& a, const GroupRingElement& b);
inline bool operator!=(const GroupRingElement& a, const GroupRingElement& b) {
    return !(a == b);
}

// Linear operator on functions over a weighted space.  The weights fix the
// inner product <psi, chi> = sum mu(x) psi(x) conj(chi(x)); adjoints and
// norms are always taken with respect to it.
class KoopmanOperator {
public:
    using Matrix = Eigen::MatrixXcd;
    using Vector = Eigen::VectorXcd;

    KoopmanOperator(FiniteProbabilitySpace space, Matrix matrix);

    static KoopmanOperator identity(FiniteProbabilitySpace space);
    static KoopmanOperator zero(FiniteProbabilitySpace space);

    const FiniteProbabilitySpace& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }
    std::size_t size() const { return space_.atom_count(); }

    Vector apply(const Vector& psi) const { return matrix_ * psi; }

    KoopmanOperator adjoint() const;

private:
    FiniteProbabilitySpace space_;
    Matrix matrix_;
};

KoopmanOperator operator+(const KoopmanOperator& a, const KoopmanOperator& b);
KoopmanOperator operator-(const KoopmanOperator& a, const KoopmanOperator& b);
KoopmanOperator operator*(Complex scalar, const KoopmanOperator& a);
// Composition: a after b.
KoopmanOperator operator*(const KoopmanOperator& a, const KoopmanOperator& b);

Complex weighted_inner_product(const FiniteProbabilitySpace& space,
                               const KoopmanOperator::Vector& psi,
                               const KoopmanOperator::Vector& chi);
double weighted_norm(const FiniteProbabilitySpace& space, const KoopmanOperator::Vector& psi);

// Composition operator of a weight-preserving automorphism: it carries psi
// to psi after the inverse of T.  Unitary for the weighted inner product.
KoopmanOperator koopman(const Automorphism& t, const FiniteProbabilitySpace& space);

// The group-ring element evaluated through the action: the sum of
// coefficient times the composition operator of each support element.
// Linear and multiplicative in the element.
KoopmanOperator evaluate(const PmpAction& action, const GroupRingElement& phi);

struct OperatorNormResult {
    double value = 0.0;
    std::size_t iterations = 0;  // zero on the dense path
    bool converged = true;
};

inline constexpr std::size_t kDenseEigensolveLimit = 64;
inline constexpr double kNormTolerance = 1e-10;
inline constexpr std::size_t kNormIterationCap = 100000;

// Largest singular value with respect to the weighted inner product.  The
// matrix is conjugated by the diagonal square-root weight similarity, which
// turns the weighted norm into the plain one; below kDenseEigensolveLimit
// atoms the Gram matrix is eigensolved densely, above it power iteration
// runs from the all-ones start vector plus a fixed perturbation until the
// eigenvalue residual falls below kNormTolerance relative to the iterate.
OperatorNormResult operator_norm_details(const KoopmanOperator& op);
// Same computation; throws IterationCapExceeded instead of reporting a
// non-converged result.
double operator_norm(const KoopmanOperator& op);

inline constexpr double kTensorTolerance = 1e-9;
inline constexpr std::size_t kTensorDimensionCap = 4096;

struct TensorCheckReport {
    double pair_norm = 0.0;
    double tensor_norm = 0.0;
    bool matches = false;

    bool passed() const { return matches; }
};

// Evaluates phi once through the product-group action assembled from the
// two factors, and once as the explicitly assembled sum of tensor products
// of the factor operators; the two norms must agree within
// kTensorTolerance.  The single-representation value is a lower bound for
// the minimal tensor norm of phi; no supremum over representations is
// attempted.  Throws DimensionOverflow past kTensorDimensionCap atoms.
TensorCheckReport tensor_check(const PmpAction& c, const PmpAction& d,
                               const GroupRingElement& phi);

inline constexpr double kConjugationTolerance = 1e-9;

// Conjugating the evaluated operator by the composition operator of a
// weight-preserving automorphism must not move the norm.
bool conjugation_invariance_check(const PmpAction& action, const GroupRingElement& phi,
                                  const Automorphism& u);

}  // namespace ergo

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ergo/errors.hpp"
#include "ergo/rational.hpp"

namespace ergo {

enum class GroupKind { finite, free_group, product };

// Three-valued answer for questions that are only semi-decidable on infinite
// groups.
enum class Verdict { yes, no, unknown };

const char* verdict_name(Verdict v);

class GroupDescriptor;
class GroupElement;
using GroupPtr = std::shared_ptr<const GroupDescriptor>;

// Carrier for one of the three supported group classes:
//   finite     - multiplication table over indices 0..m-1
//   free_group - reduced words in d standard letters
//   product    - ordered pair of descriptors
// Descriptors are immutable and shared; elements keep a pointer to theirs.
class GroupDescriptor : public std::enable_shared_from_this<GroupDescriptor> {
public:
    // Builds a finite group from its multiplication table; verifies
    // associativity, identity and inverses, and that generator_list (default:
    // all elements) generates via Cayley closure.
    static GroupPtr finite(std::vector<std::vector<int>> table,
                           std::vector<int> generator_list = {});

    // Z/m with the residue table and generator {1 mod m}.
    static GroupPtr cyclic(int modulus);

    // Free group of rank d >= 1 with the d standard letters as generators.
    static GroupPtr free_group(int rank);

    static GroupPtr product(GroupPtr left, GroupPtr right);

    GroupKind kind() const { return kind_; }

    // Finite kind only.
    int order() const;
    int identity_index() const;
    int table(int row, int col) const;
    int inverse_index(int index) const;
    const std::vector<int>& finite_generator_indices() const;

    // Free kind only.
    int rank() const;

    // Product kind only.
    const GroupPtr& left() const;
    const GroupPtr& right() const;

    // Distinguished generators as elements.  Finite: the generator list.
    // Free: a1..ad.  Product: (s, e) for s on the left, then (e, t) for t on
    // the right.
    std::vector<GroupElement> generators() const;

private:
    GroupDescriptor() = default;

    GroupKind kind_ = GroupKind::finite;
    // finite
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
    std::vector<int> generator_indices_;
    int identity_ = 0;
    // free
    int rank_ = 0;
    // product
    GroupPtr left_;
    GroupPtr right_;
};

// Structural equality of descriptors: same kind and same defining data.
// Distinct shared_ptr instances with identical structure describe the same
// group.
bool same_group(const GroupDescriptor& a, const GroupDescriptor& b);
bool same_group(const GroupPtr& a, const GroupPtr& b);

// Number of elements, when finite.  free_group and products involving it
// report nothing.
std::optional<std::uint64_t> group_order(const GroupPtr& group);

// All elements of a finite-order group in canonical order.  Throws ErgoError
// on infinite kinds.
std::vector<GroupElement> enumerate_group(const GroupPtr& group);

// Value type tagged by the descriptor's kind: a table index, a reduced word
// of signed letters (+k = a_k, -k = a_k'), or a pair.  Elements of distinct
// descriptors never mix; operations on mixed elements throw
// DescriptorMismatch.
class GroupElement {
public:
    static GroupElement finite(GroupPtr group, int index);
    // Reduces the letter sequence; throws LetterOutOfRange on letters outside
    // the rank and on zero.
    static GroupElement word(GroupPtr group, std::vector<int> letters);
    static GroupElement pair(GroupPtr group, GroupElement first, GroupElement second);
    static GroupElement identity(const GroupPtr& group);

    const GroupPtr& group() const { return group_; }
    GroupKind kind() const { return group_->kind(); }

    int index() const;                       // finite
    const std::vector<int>& letters() const; // free, always reduced
    const GroupElement& first() const;       // product
    const GroupElement& second() const;      // product

    bool is_identity() const;

private:
    GroupElement() = default;

    GroupPtr group_;
    int index_ = 0;
    std::vector<int> word_;
    std::shared_ptr<const std::pair<GroupElement, GroupElement>> parts_;
};

// Total order on elements of one group, used for deterministic map
// iteration: finite by index; free shortlex with a1 < a1' < a2 < a2';
// product lexicographic.  Comparing elements of structurally different
// groups is undefined.
int compare_elements(const GroupElement& a, const GroupElement& b);

struct ElementOrder {
    bool operator()(const GroupElement& a, const GroupElement& b) const {
        return compare_elements(a, b) < 0;
    }
};

bool operator==(const GroupElement& a, const GroupElement& b);
inline bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }

GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);
// g^n for any integer n; n = 0 gives the identity.
GroupElement power(const GroupElement& g, long long n);

// Canonical text form: finite "3"; free "a1 a2'" with "e" for the empty
// word; product "(<left>|<right>)".
std::string element_literal(const GroupElement& g);

// Free-group normal form from an arbitrary letter sequence.
GroupElement reduce_word(const std::vector<int>& letters, int rank);

inline constexpr std::size_t kDefaultSupportCap = 1000000;

// Finitely supported probability measure with exact rational weights.
class FiniteSupportMeasure {
public:
    using WeightMap = std::map<GroupElement, Rational, ElementOrder>;

    // Verifies positivity and exact total mass 1.
    FiniteSupportMeasure(GroupPtr group, WeightMap weights);

    // Point mass at g.
    static FiniteSupportMeasure point(const GroupElement& g);

    // Equal mass 1/|support| on the listed elements (duplicates merge mass).
    static FiniteSupportMeasure uniform(GroupPtr group, const std::vector<GroupElement>& support);

    const GroupPtr& group() const { return group_; }
    const WeightMap& weights() const { return weights_; }
    std::size_t support_size() const { return weights_.size(); }

    // Weight of g, zero off the support.
    Rational at(const GroupElement& g) const;

private:
    GroupPtr group_;
    WeightMap weights_;
};

// [w*u](g) = sum over hk = g of w(h)u(k); exact.
FiniteSupportMeasure convolve(const FiniteSupportMeasure& w, const FiniteSupportMeasure& u);

// n-fold convolution power, n >= 1; throws SupportCapExceeded when an
// intermediate support grows past support_cap.
FiniteSupportMeasure autoconvolve(const FiniteSupportMeasure& w, int n,
                                  std::size_t support_cap = kDefaultSupportCap);

// (w x u)(g, h) = w(g) u(h) on Product(group of w, group of u).
FiniteSupportMeasure product_measure(const FiniteSupportMeasure& w, const FiniteSupportMeasure& u);

// True iff w(g) = w(g^-1) for every g.
bool is_symmetric(const FiniteSupportMeasure& w);

// Whether the listed elements generate the whole group.  Exact for finite
// orders (Cayley closure) and for free groups (graph folding); product
// groups with an infinite factor combine projection answers and may report
// unknown.
Verdict subset_generates(const GroupPtr& group, const std::vector<GroupElement>& elements);

// subset_generates applied to the support of w.
Verdict is_generating(const FiniteSupportMeasure& w);

// Symmetric and w*w generating; when w(e) > 0 this reduces to symmetric and
// w generating.
Verdict is_absolutely_generating(const FiniteSupportMeasure& w);

}  // namespace ergo

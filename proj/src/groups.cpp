#include "ergo/groups.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <utility>

namespace ergo {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::yes: return "Yes";
        case Verdict::no: return "No";
        default: return "Unknown";
    }
}

namespace {

// Indices reachable from the identity by right-multiplying with the given
// elements and their inverses.
std::size_t cayley_closure_size(const std::vector<std::vector<int>>& table, int identity,
                                const std::vector<int>& inverse, const std::vector<int>& seeds) {
    std::vector<int> steps;
    for (int s : seeds) {
        steps.push_back(s);
        steps.push_back(inverse[s]);
    }
    std::vector<char> seen(table.size(), 0);
    std::deque<int> queue;
    seen[identity] = 1;
    queue.push_back(identity);
    std::size_t count = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int s : steps) {
            const int w = table[v][s];
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                queue.push_back(w);
            }
        }
    }
    return count;
}

}  // namespace

GroupPtr GroupDescriptor::finite(std::vector<std::vector<int>> table, std::vector<int> generator_list) {
    const int m = static_cast<int>(table.size());
    if (m == 0) throw ErgoError("finite group table must be nonempty");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != m) throw ErgoError("multiplication table must be square");
        for (int v : row)
            if (v < 0 || v >= m) throw ErgoError("multiplication table entry out of range");
    }

    int identity = -1;
    for (int e = 0; e < m && identity < 0; ++e) {
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) ok = table[e][i] == i && table[i][e] == i;
        if (ok) identity = e;
    }
    if (identity < 0) throw ErgoError("multiplication table has no identity");

    std::vector<int> inverse(m, -1);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (table[i][j] == identity && table[j][i] == identity) {
                inverse[i] = j;
                break;
            }
        }
        if (inverse[i] < 0) throw ErgoError("element " + std::to_string(i) + " has no inverse");
    }

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                if (table[table[i][j]][k] != table[i][table[j][k]])
                    throw ErgoError("multiplication table is not associative");

    if (generator_list.empty()) {
        generator_list.resize(m);
        for (int i = 0; i < m; ++i) generator_list[i] = i;
    } else {
        for (int g : generator_list)
            if (g < 0 || g >= m) throw ErgoError("generator index out of range");
        if (cayley_closure_size(table, identity, inverse, generator_list) !=
            static_cast<std::size_t>(m))
            throw ErgoError("generator list does not generate the group");
    }

    auto d = std::shared_ptr<GroupDescriptor>(new GroupDescriptor());
    d->kind_ = GroupKind::finite;
    d->table_ = std::move(table);
    d->inverse_ = std::move(inverse);
    d->generator_indices_ = std::move(generator_list);
    d->identity_ = identity;
    return d;
}

GroupPtr GroupDescriptor::cyclic(int modulus) {
    if (modulus < 1) throw ErgoError("cyclic group needs modulus >= 1");
    std::vector<std::vector<int>> table(modulus, std::vector<int>(modulus));
    for (int i = 0; i < modulus; ++i)
        for (int j = 0; j < modulus; ++j) table[i][j] = (i + j) % modulus;
    return finite(std::move(table), {1 % modulus});
}

GroupPtr GroupDescriptor::free_group(int rank) {
    if (rank < 1) throw ErgoError("free group needs rank >= 1");
    auto d = std::shared_ptr<GroupDescriptor>(new GroupDescriptor());
    d->kind_ = GroupKind::free_group;
    d->rank_ = rank;
    return d;
}

GroupPtr GroupDescriptor::product(GroupPtr left, GroupPtr right) {
    if (!left || !right) throw ErgoError("product descriptor needs both factors");
    auto d = std::shared_ptr<GroupDescriptor>(new GroupDescriptor());
    d->kind_ = GroupKind::product;
    d->left_ = std::move(left);
    d->right_ = std::move(right);
    return d;
}

int GroupDescriptor::order() const {
    if (kind_ != GroupKind::finite) throw ErgoError("order: descriptor is not finite kind");
    return static_cast<int>(table_.size());
}

int GroupDescriptor::identity_index() const {
    if (kind_ != GroupKind::finite) throw ErgoError("identity_index: descriptor is not finite kind");
    return identity_;
}

int GroupDescriptor::table(int row, int col) const {
    if (kind_ != GroupKind::finite) throw ErgoError("table: descriptor is not finite kind");
    if (row < 0 || row >= order() || col < 0 || col >= order())
        throw ErgoError("table index out of range");
    return table_[row][col];
}

int GroupDescriptor::inverse_index(int index) const {
    if (kind_ != GroupKind::finite) throw ErgoError("inverse_index: descriptor is not finite kind");
    if (index < 0 || index >= order()) throw ErgoError("element index out of range");
    return inverse_[index];
}

const std::vector<int>& GroupDescriptor::finite_generator_indices() const {
    if (kind_ != GroupKind::finite)
        throw ErgoError("finite_generator_indices: descriptor is not finite kind");
    return generator_indices_;
}

int GroupDescriptor::rank() const {
    if (kind_ != GroupKind::free_group) throw ErgoError("rank: descriptor is not free kind");
    return rank_;
}

const GroupPtr& GroupDescriptor::left() const {
    if (kind_ != GroupKind::product) throw ErgoError("left: descriptor is not product kind");
    return left_;
}

const GroupPtr& GroupDescriptor::right() const {
    if (kind_ != GroupKind::product) throw ErgoError("right: descriptor is not product kind");
    return right_;
}

std::vector<GroupElement> GroupDescriptor::generators() const {
    GroupPtr self = shared_from_this();
    std::vector<GroupElement> out;
    switch (kind_) {
        case GroupKind::finite:
            for (int idx : generator_indices_) out.push_back(GroupElement::finite(self, idx));
            break;
        case GroupKind::free_group:
            for (int k = 1; k <= rank_; ++k) out.push_back(GroupElement::word(self, {k}));
            break;
        case GroupKind::product: {
            const GroupElement el = GroupElement::identity(left_);
            const GroupElement er = GroupElement::identity(right_);
            for (const auto& g : left_->generators()) out.push_back(GroupElement::pair(self, g, er));
            for (const auto& h : right_->generators()) out.push_back(GroupElement::pair(self, el, h));
            break;
        }
    }
    return out;
}

bool same_group(const GroupDescriptor& a, const GroupDescriptor& b) {
    if (&a == &b) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case GroupKind::finite: {
            if (a.order() != b.order()) return false;
            if (a.finite_generator_indices() != b.finite_generator_indices()) return false;
            for (int i = 0; i < a.order(); ++i)
                for (int j = 0; j < a.order(); ++j)
                    if (a.table(i, j) != b.table(i, j)) return false;
            return true;
        }
        case GroupKind::free_group:
            return a.rank() == b.rank();
        case GroupKind::product:
            return same_group(a.left(), b.left()) && same_group(a.right(), b.right());
    }
    return false;
}

bool same_group(const GroupPtr& a, const GroupPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return same_group(*a, *b);
}

std::optional<std::uint64_t> group_order(const GroupPtr& group) {
    switch (group->kind()) {
        case GroupKind::finite:
            return static_cast<std::uint64_t>(group->order());
        case GroupKind::free_group:
            return std::nullopt;
        case GroupKind::product: {
            auto l = group_order(group->left());
            auto r = group_order(group->right());
            if (!l || !r) return std::nullopt;
            return *l * *r;
        }
    }
    return std::nullopt;
}

std::vector<GroupElement> enumerate_group(const GroupPtr& group) {
    std::vector<GroupElement> out;
    switch (group->kind()) {
        case GroupKind::finite:
            for (int i = 0; i < group->order(); ++i) out.push_back(GroupElement::finite(group, i));
            break;
        case GroupKind::free_group:
            throw ErgoError("cannot enumerate an infinite group");
        case GroupKind::product: {
            const auto lefts = enumerate_group(group->left());
            const auto rights = enumerate_group(group->right());
            for (const auto& a : lefts)
                for (const auto& b : rights) out.push_back(GroupElement::pair(group, a, b));
            break;
        }
    }
    return out;
}

GroupElement GroupElement::finite(GroupPtr group, int index) {
    if (!group || group->kind() != GroupKind::finite)
        throw ErgoError("finite element needs a finite-kind descriptor");
    if (index < 0 || index >= group->order()) throw ErgoError("element index out of range");
    GroupElement e;
    e.group_ = std::move(group);
    e.index_ = index;
    return e;
}

GroupElement GroupElement::word(GroupPtr group, std::vector<int> letters) {
    if (!group || group->kind() != GroupKind::free_group)
        throw ErgoError("word element needs a free-kind descriptor");
    const int rank = group->rank();
    std::vector<int> reduced;
    reduced.reserve(letters.size());
    for (int l : letters) {
        if (l == 0 || l > rank || l < -rank)
            throw LetterOutOfRange("letter " + std::to_string(l) + " outside rank " +
                                   std::to_string(rank));
        if (!reduced.empty() && reduced.back() == -l)
            reduced.pop_back();
        else
            reduced.push_back(l);
    }
    GroupElement e;
    e.group_ = std::move(group);
    e.word_ = std::move(reduced);
    return e;
}

GroupElement GroupElement::pair(GroupPtr group, GroupElement first, GroupElement second) {
    if (!group || group->kind() != GroupKind::product)
        throw ErgoError("pair element needs a product-kind descriptor");
    if (!same_group(first.group(), group->left()) || !same_group(second.group(), group->right()))
        throw DescriptorMismatch("pair components do not match the product factors");
    GroupElement e;
    e.group_ = std::move(group);
    e.parts_ = std::make_shared<const std::pair<GroupElement, GroupElement>>(std::move(first),
                                                                             std::move(second));
    return e;
}

GroupElement GroupElement::identity(const GroupPtr& group) {
    switch (group->kind()) {
        case GroupKind::finite:
            return finite(group, group->identity_index());
        case GroupKind::free_group:
            return word(group, {});
        case GroupKind::product:
            return pair(group, identity(group->left()), identity(group->right()));
    }
    throw ErgoError("unreachable group kind");
}

int GroupElement::index() const {
    if (kind() != GroupKind::finite) throw ErgoError("index: element is not finite kind");
    return index_;
}

const std::vector<int>& GroupElement::letters() const {
    if (kind() != GroupKind::free_group) throw ErgoError("letters: element is not free kind");
    return word_;
}

const GroupElement& GroupElement::first() const {
    if (kind() != GroupKind::product) throw ErgoError("first: element is not product kind");
    return parts_->first;
}

const GroupElement& GroupElement::second() const {
    if (kind() != GroupKind::product) throw ErgoError("second: element is not product kind");
    return parts_->second;
}

bool GroupElement::is_identity() const {
    switch (kind()) {
        case GroupKind::finite:
            return index_ == group_->identity_index();
        case GroupKind::free_group:
            return word_.empty();
        case GroupKind::product:
            return parts_->first.is_identity() && parts_->second.is_identity();
    }
    return false;
}

namespace {

// Letter key ordering a1 < a1' < a2 < a2' < ...
inline std::pair<int, int> letter_key(int l) { return {l > 0 ? l : -l, l < 0 ? 1 : 0}; }

}  // namespace

int compare_elements(const GroupElement& a, const GroupElement& b) {
    switch (a.kind()) {
        case GroupKind::finite:
            return (a.index() > b.index()) - (a.index() < b.index());
        case GroupKind::free_group: {
            const auto& wa = a.letters();
            const auto& wb = b.letters();
            if (wa.size() != wb.size()) return wa.size() < wb.size() ? -1 : 1;
            for (std::size_t i = 0; i < wa.size(); ++i) {
                const auto ka = letter_key(wa[i]);
                const auto kb = letter_key(wb[i]);
                if (ka != kb) return ka < kb ? -1 : 1;
            }
            return 0;
        }
        case GroupKind::product: {
            const int c = compare_elements(a.first(), b.first());
            if (c != 0) return c;
            return compare_elements(a.second(), b.second());
        }
    }
    return 0;
}

bool operator==(const GroupElement& a, const GroupElement& b) {
    if (!same_group(a.group(), b.group())) return false;
    return compare_elements(a, b) == 0;
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
    if (!same_group(g.group(), h.group()))
        throw DescriptorMismatch("multiply: operands belong to different groups");
    switch (g.kind()) {
        case GroupKind::finite:
            return GroupElement::finite(g.group(), g.group()->table(g.index(), h.index()));
        case GroupKind::free_group: {
            std::vector<int> merged = g.letters();
            for (int l : h.letters()) {
                if (!merged.empty() && merged.back() == -l)
                    merged.pop_back();
                else
                    merged.push_back(l);
            }
            return GroupElement::word(g.group(), std::move(merged));
        }
        case GroupKind::product:
            return GroupElement::pair(g.group(), multiply(g.first(), h.first()),
                                      multiply(g.second(), h.second()));
    }
    throw ErgoError("unreachable group kind");
}

GroupElement inverse(const GroupElement& g) {
    switch (g.kind()) {
        case GroupKind::finite:
            return GroupElement::finite(g.group(), g.group()->inverse_index(g.index()));
        case GroupKind::free_group: {
            std::vector<int> rev(g.letters().rbegin(), g.letters().rend());
            for (int& l : rev) l = -l;
            return GroupElement::word(g.group(), std::move(rev));
        }
        case GroupKind::product:
            return GroupElement::pair(g.group(), inverse(g.first()), inverse(g.second()));
    }
    throw ErgoError("unreachable group kind");
}

GroupElement power(const GroupElement& g, long long n) {
    GroupElement base = n < 0 ? inverse(g) : g;
    unsigned long long count = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1
                                     : static_cast<unsigned long long>(n);
    GroupElement acc = GroupElement::identity(g.group());
    while (count > 0) {
        if (count & 1) acc = multiply(acc, base);
        count >>= 1;
        if (count > 0) base = multiply(base, base);
    }
    return acc;
}

std::string element_literal(const GroupElement& g) {
    switch (g.kind()) {
        case GroupKind::finite:
            return std::to_string(g.index());
        case GroupKind::free_group: {
            if (g.letters().empty()) return "e";
            std::string out;
            for (std::size_t i = 0; i < g.letters().size(); ++i) {
                const int l = g.letters()[i];
                if (i > 0) out += ' ';
                out += 'a';
                out += std::to_string(l > 0 ? l : -l);
                if (l < 0) out += '\'';
            }
            return out;
        }
        case GroupKind::product:
            return "(" + element_literal(g.first()) + "|" + element_literal(g.second()) + ")";
    }
    return {};
}

GroupElement reduce_word(const std::vector<int>& letters, int rank) {
    return GroupElement::word(GroupDescriptor::free_group(rank), letters);
}

FiniteSupportMeasure::FiniteSupportMeasure(GroupPtr group, WeightMap weights)
    : group_(std::move(group)), weights_(std::move(weights)) {
    if (!group_) throw ErgoError("measure needs a group descriptor");
    Rational total = 0;
    for (const auto& [g, w] : weights_) {
        if (!same_group(g.group(), group_))
            throw DescriptorMismatch("measure support element from a different group");
        if (w <= 0) throw ErgoError("measure weights must be strictly positive");
        total += w;
    }
    if (total != 1)
        throw ErgoError("measure weights must sum to 1, got " + format_rational(total));
}

FiniteSupportMeasure FiniteSupportMeasure::point(const GroupElement& g) {
    WeightMap w;
    w.emplace(g, Rational(1));
    return FiniteSupportMeasure(g.group(), std::move(w));
}

FiniteSupportMeasure FiniteSupportMeasure::uniform(GroupPtr group,
                                                   const std::vector<GroupElement>& support) {
    if (support.empty()) throw ErgoError("uniform measure needs a nonempty support");
    WeightMap w;
    const Rational share(1, static_cast<unsigned long>(support.size()));
    for (const auto& g : support) w[g] += share;
    return FiniteSupportMeasure(std::move(group), std::move(w));
}

Rational FiniteSupportMeasure::at(const GroupElement& g) const {
    const auto it = weights_.find(g);
    return it == weights_.end() ? Rational(0) : it->second;
}

FiniteSupportMeasure convolve(const FiniteSupportMeasure& w, const FiniteSupportMeasure& u) {
    if (!same_group(w.group(), u.group()))
        throw DescriptorMismatch("convolve: measures live on different groups");
    FiniteSupportMeasure::WeightMap out;
    for (const auto& [h, wh] : w.weights())
        for (const auto& [k, uk] : u.weights()) out[multiply(h, k)] += wh * uk;
    return FiniteSupportMeasure(w.group(), std::move(out));
}

FiniteSupportMeasure autoconvolve(const FiniteSupportMeasure& w, int n, std::size_t support_cap) {
    if (n < 1) throw ErgoError("autoconvolve needs n >= 1");
    FiniteSupportMeasure acc = w;
    for (int step = 2; step <= n; ++step) {
        acc = convolve(w, acc);
        if (acc.support_size() > support_cap)
            throw SupportCapExceeded("autoconvolution support " +
                                     std::to_string(acc.support_size()) + " exceeds cap " +
                                     std::to_string(support_cap) + " at power " +
                                     std::to_string(step));
    }
    return acc;
}

FiniteSupportMeasure product_measure(const FiniteSupportMeasure& w, const FiniteSupportMeasure& u) {
    const GroupPtr prod = GroupDescriptor::product(w.group(), u.group());
    FiniteSupportMeasure::WeightMap out;
    for (const auto& [g, wg] : w.weights())
        for (const auto& [h, uh] : u.weights())
            out.emplace(GroupElement::pair(prod, g, h), wg * uh);
    return FiniteSupportMeasure(prod, std::move(out));
}

bool is_symmetric(const FiniteSupportMeasure& w) {
    for (const auto& [g, wg] : w.weights())
        if (w.at(inverse(g)) != wg) return false;
    return true;
}

namespace {

// Stallings folding: the subgroup graph of the words, folded to a
// deterministic automaton, spells exactly the subgroup they generate.  The
// words generate the whole free group iff every standard letter loops at the
// base vertex after folding.
bool free_words_generate(int rank, const std::vector<std::vector<int>>& words) {
    std::vector<int> parent{0};
    std::vector<std::map<int, int>> adj(1);
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    auto add_vertex = [&]() {
        parent.push_back(static_cast<int>(parent.size()));
        adj.emplace_back();
        return static_cast<int>(parent.size()) - 1;
    };

    std::deque<std::pair<int, int>> pending;
    auto attach = [&](int v, int key, int target) {
        const auto it = adj[v].find(key);
        if (it == adj[v].end())
            adj[v].emplace(key, target);
        else
            pending.emplace_back(it->second, target);
    };
    auto add_edge = [&](int u, int letter, int v) {
        attach(u, letter, v);
        attach(v, -letter, u);
    };

    const int base = 0;
    for (const auto& word : words) {
        if (word.empty()) continue;
        int cur = base;
        for (std::size_t i = 0; i < word.size(); ++i) {
            const int next = (i + 1 == word.size()) ? base : add_vertex();
            add_edge(cur, word[i], next);
            cur = next;
        }
    }

    while (!pending.empty()) {
        auto [a, b] = pending.front();
        pending.pop_front();
        a = find(a);
        b = find(b);
        if (a == b) continue;
        if (adj[a].size() < adj[b].size()) std::swap(a, b);
        parent[b] = a;
        for (const auto& [key, target] : adj[b]) attach(a, key, target);
        adj[b].clear();
    }

    const int root = find(base);
    for (int l = 1; l <= rank; ++l) {
        const auto it = adj[root].find(l);
        if (it == adj[root].end() || find(it->second) != root) return false;
    }
    return true;
}

}  // namespace

Verdict subset_generates(const GroupPtr& group, const std::vector<GroupElement>& elements) {
    for (const auto& g : elements)
        if (!same_group(g.group(), group))
            throw DescriptorMismatch("subset_generates: element from a different group");

    switch (group->kind()) {
        case GroupKind::finite: {
            std::vector<int> seeds;
            for (const auto& g : elements) seeds.push_back(g.index());
            std::vector<std::vector<int>> table(group->order());
            for (int i = 0; i < group->order(); ++i) {
                table[i].resize(group->order());
                for (int j = 0; j < group->order(); ++j) table[i][j] = group->table(i, j);
            }
            std::vector<int> inv(group->order());
            for (int i = 0; i < group->order(); ++i) inv[i] = group->inverse_index(i);
            return cayley_closure_size(table, group->identity_index(), inv, seeds) ==
                           static_cast<std::size_t>(group->order())
                       ? Verdict::yes
                       : Verdict::no;
        }
        case GroupKind::free_group: {
            std::vector<std::vector<int>> words;
            for (const auto& g : elements) words.push_back(g.letters());
            return free_words_generate(group->rank(), words) ? Verdict::yes : Verdict::no;
        }
        case GroupKind::product: {
            if (group_order(group)) {
                // Finite order: exact closure over pair elements.
                std::set<GroupElement, ElementOrder> seen;
                std::deque<GroupElement> queue;
                const GroupElement e = GroupElement::identity(group);
                seen.insert(e);
                queue.push_back(e);
                std::vector<GroupElement> steps;
                for (const auto& g : elements) {
                    steps.push_back(g);
                    steps.push_back(inverse(g));
                }
                while (!queue.empty()) {
                    const GroupElement v = queue.front();
                    queue.pop_front();
                    for (const auto& s : steps) {
                        GroupElement w = multiply(v, s);
                        if (seen.insert(w).second) queue.push_back(w);
                    }
                }
                return seen.size() == *group_order(group) ? Verdict::yes : Verdict::no;
            }
            // Infinite factor: projections generating is necessary; pure
            // factor elements generating is sufficient.
            std::vector<GroupElement> left_all, right_all, left_pure, right_pure;
            for (const auto& g : elements) {
                left_all.push_back(g.first());
                right_all.push_back(g.second());
                if (g.second().is_identity()) left_pure.push_back(g.first());
                if (g.first().is_identity()) right_pure.push_back(g.second());
            }
            const Verdict lv = subset_generates(group->left(), left_all);
            const Verdict rv = subset_generates(group->right(), right_all);
            if (lv == Verdict::no || rv == Verdict::no) return Verdict::no;
            if (subset_generates(group->left(), left_pure) == Verdict::yes &&
                subset_generates(group->right(), right_pure) == Verdict::yes)
                return Verdict::yes;
            return Verdict::unknown;
        }
    }
    return Verdict::unknown;
}

Verdict is_generating(const FiniteSupportMeasure& w) {
    std::vector<GroupElement> support;
    for (const auto& [g, weight] : w.weights()) support.push_back(g);
    return subset_generates(w.group(), support);
}

Verdict is_absolutely_generating(const FiniteSupportMeasure& w) {
    if (!is_symmetric(w)) return Verdict::no;
    if (w.at(GroupElement::identity(w.group())) > 0) return is_generating(w);
    return is_generating(convolve(w, w));
}

}  // namespace ergo

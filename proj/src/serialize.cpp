#include "ergo/serialize.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <utility>
#include <vector>

#include "ergo/errors.hpp"

namespace ergo {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

long parse_long(const std::string& token) {
    long value = 0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
    if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
        throw ParseError("expected an integer, got '" + token + "'");
    }
    return value;
}

double parse_double(const std::string& token) {
    double value = 0.0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
    if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
        throw ParseError("expected a number, got '" + token + "'");
    }
    return value;
}

std::string double_to_text(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

// Splits the last whitespace-separated token off a line; element literals
// may contain spaces, so fields are taken from the right.
std::pair<std::string, std::string> split_last(const std::string& line) {
    const auto cut = line.find_last_of(" \t");
    if (cut == std::string::npos) {
        throw ParseError("expected at least two fields in '" + line + "'");
    }
    return {trim(line.substr(0, cut)), trim(line.substr(cut + 1))};
}

// Non-blank lines of a document, consumed in order.
class LineCursor {
public:
    explicit LineCursor(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            auto trimmed = trim(line);
            if (!trimmed.empty()) lines_.push_back(std::move(trimmed));
        }
    }

    bool done() const { return next_ == lines_.size(); }

    const std::string& take() {
        if (done()) throw ParseError("unexpected end of input");
        return lines_[next_++];
    }

    void expect(const std::string& line) {
        if (take() != line) {
            throw ParseError("expected '" + line + "' at line " + std::to_string(next_));
        }
    }

    void expect_done() const {
        if (!done()) throw ParseError("unexpected trailing content: '" + lines_[next_] + "'");
    }

private:
    std::vector<std::string> lines_;
    std::size_t next_ = 0;
};

std::size_t generator_count(const GroupPtr& group) {
    switch (group->kind()) {
        case GroupKind::finite:
            return group->finite_generator_indices().size();
        case GroupKind::free_group:
            return static_cast<std::size_t>(group->rank());
        case GroupKind::product:
            return generator_count(group->left()) + generator_count(group->right());
    }
    throw ErgoError("unreachable group kind");
}

void write_group(std::ostream& out, const GroupPtr& group) {
    switch (group->kind()) {
        case GroupKind::free_group:
            out << "group free " << group->rank() << "\n";
            return;
        case GroupKind::product:
            out << "group product\n";
            write_group(out, group->left());
            write_group(out, group->right());
            return;
        case GroupKind::finite: {
            const int order = group->order();
            out << "group finite " << order << "\n";
            out << "generators";
            for (int index : group->finite_generator_indices()) out << ' ' << index;
            out << "\n";
            for (int row = 0; row < order; ++row) {
                for (int col = 0; col < order; ++col) {
                    if (col != 0) out << ' ';
                    out << group->table(row, col);
                }
                out << "\n";
            }
            return;
        }
    }
    throw ErgoError("unreachable group kind");
}

GroupPtr parse_group(LineCursor& in) {
    const auto header = tokens_of(in.take());
    if (header.size() < 2 || header[0] != "group") {
        throw ParseError("expected a group block");
    }
    if (header[1] == "free" && header.size() == 3) {
        return GroupDescriptor::free_group(static_cast<int>(parse_long(header[2])));
    }
    if (header[1] == "cyclic" && header.size() == 3) {
        return GroupDescriptor::cyclic(static_cast<int>(parse_long(header[2])));
    }
    if (header[1] == "product" && header.size() == 2) {
        auto left = parse_group(in);
        auto right = parse_group(in);
        return GroupDescriptor::product(std::move(left), std::move(right));
    }
    if (header[1] == "finite" && header.size() == 3) {
        const long order = parse_long(header[2]);
        if (order <= 0) throw ParseError("finite group order must be positive");
        const auto generator_line = tokens_of(in.take());
        if (generator_line.empty() || generator_line[0] != "generators") {
            throw ParseError("expected a generators line");
        }
        std::vector<int> generators;
        for (std::size_t i = 1; i < generator_line.size(); ++i) {
            generators.push_back(static_cast<int>(parse_long(generator_line[i])));
        }
        std::vector<std::vector<int>> table;
        for (long row = 0; row < order; ++row) {
            const auto entries = tokens_of(in.take());
            if (entries.size() != static_cast<std::size_t>(order)) {
                throw ParseError("table row needs " + std::to_string(order) + " entries");
            }
            std::vector<int> cells;
            for (const auto& entry : entries) cells.push_back(static_cast<int>(parse_long(entry)));
            table.push_back(std::move(cells));
        }
        return GroupDescriptor::finite(std::move(table), std::move(generators));
    }
    throw ParseError("unknown group header '" + header[1] + "'");
}

void write_space(std::ostream& out, const FiniteProbabilitySpace& space) {
    out << "atoms=" << space.atom_count() << "\n";
    for (std::size_t atom = 0; atom < space.atom_count(); ++atom) {
        out << atom << ' ' << rational_to_text(space.weight(atom));
        if (space.has_labels()) out << ' ' << space.labels()[atom];
        out << "\n";
    }
}

FiniteProbabilitySpace parse_space(LineCursor& in) {
    const auto header = in.take();
    if (header.rfind("atoms=", 0) != 0) throw ParseError("expected 'atoms=N'");
    const long count = parse_long(header.substr(6));
    if (count <= 0) throw ParseError("atom count must be positive");

    std::vector<Rational> weights;
    std::vector<std::string> labels;
    bool any_label = false;
    for (long atom = 0; atom < count; ++atom) {
        const auto line = in.take();
        std::istringstream fields(line);
        std::string index_token;
        std::string weight_token;
        if (!(fields >> index_token >> weight_token)) {
            throw ParseError("expected 'index weight' in '" + line + "'");
        }
        if (parse_long(index_token) != atom) {
            throw ParseError("atom lines must be in order, got '" + line + "'");
        }
        weights.push_back(rational_from_text(weight_token));
        std::string label;
        std::getline(fields, label);
        label = trim(label);
        if (!label.empty()) any_label = true;
        labels.push_back(std::move(label));
    }
    if (!any_label) labels.clear();
    return FiniteProbabilitySpace(std::move(weights), std::move(labels));
}

void write_automorphism(std::ostream& out, const Automorphism& f) {
    bool wrote = false;
    std::vector<bool> visited(f.size(), false);
    for (std::size_t start = 0; start < f.size(); ++start) {
        if (visited[start] || f(start) == start) continue;
        out << '(';
        std::size_t atom = start;
        bool first = true;
        while (!visited[atom]) {
            visited[atom] = true;
            if (!first) out << ' ';
            out << atom;
            first = false;
            atom = f(atom);
        }
        out << ')';
        wrote = true;
    }
    if (!wrote) out << "()";
    out << "\n";
}

PmpAction parse_action_body(LineCursor& in, GroupPtr group, FiniteProbabilitySpace space) {
    std::vector<Automorphism> images;
    const std::size_t count = generator_count(group);
    for (std::size_t i = 0; i < count; ++i) {
        images.push_back(automorphism_from_cycles(space.atom_count(), in.take()));
    }
    return PmpAction(std::move(group), std::move(space), std::move(images));
}

}  // namespace

std::string rational_to_text(const Rational& value) { return value.get_str(); }

Rational rational_from_text(const std::string& text) {
    const auto slash = text.find('/');
    const auto is_integer = [](const std::string& part) {
        if (part.empty()) return false;
        std::size_t i = part[0] == '-' ? 1 : 0;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
        }
        return true;
    };
    const std::string numerator = slash == std::string::npos ? text : text.substr(0, slash);
    const std::string denominator = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!is_integer(numerator) || !is_integer(denominator)) {
        throw ParseError("bad rational '" + text + "'");
    }
    Rational value(text, 10);
    if (value.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
    value.canonicalize();
    return value;
}

GroupElement element_from_literal(const GroupPtr& group, const std::string& raw) {
    const std::string text = trim(raw);
    if (text.empty()) throw ParseError("empty element literal");
    switch (group->kind()) {
        case GroupKind::finite: {
            const long index = parse_long(text);
            if (index < 0 || index >= group->order()) {
                throw ParseError("element index " + text + " outside the group");
            }
            return GroupElement::finite(group, static_cast<int>(index));
        }
        case GroupKind::free_group: {
            if (text == "e") return GroupElement::identity(group);
            std::vector<int> letters;
            for (const auto& token : tokens_of(text)) {
                std::string body = token;
                bool inverted = false;
                if (!body.empty() && body.back() == '\'') {
                    inverted = true;
                    body.pop_back();
                }
                if (body.size() < 2 || body[0] != 'a') {
                    throw ParseError("bad letter '" + token + "'");
                }
                const long letter = parse_long(body.substr(1));
                if (letter < 1 || letter > group->rank()) {
                    throw ParseError("letter '" + token + "' outside the rank");
                }
                letters.push_back(inverted ? -static_cast<int>(letter)
                                           : static_cast<int>(letter));
            }
            return GroupElement::word(group, std::move(letters));
        }
        case GroupKind::product: {
            if (text.front() != '(' || text.back() != ')') {
                throw ParseError("product literal needs parentheses: '" + text + "'");
            }
            int depth = 0;
            std::size_t cut = std::string::npos;
            for (std::size_t i = 1; i + 1 < text.size(); ++i) {
                if (text[i] == '(') ++depth;
                if (text[i] == ')') --depth;
                if (text[i] == '|' && depth == 0) {
                    cut = i;
                    break;
                }
            }
            if (cut == std::string::npos) {
                throw ParseError("product literal needs a top-level '|': '" + text + "'");
            }
            auto left = element_from_literal(group->left(), text.substr(1, cut - 1));
            auto right =
                element_from_literal(group->right(), text.substr(cut + 1, text.size() - cut - 2));
            return GroupElement::pair(group, std::move(left), std::move(right));
        }
    }
    throw ErgoError("unreachable group kind");
}

std::string group_to_text(const GroupPtr& group) {
    std::ostringstream out;
    write_group(out, group);
    return out.str();
}

GroupPtr group_from_text(const std::string& text) {
    LineCursor in(text);
    auto group = parse_group(in);
    in.expect_done();
    return group;
}

std::string measure_to_text(const FiniteSupportMeasure& w) {
    std::ostringstream out;
    for (const auto& [g, mass] : w.weights()) {
        out << element_literal(g) << ' ' << rational_to_text(mass) << "\n";
    }
    return out.str();
}

FiniteSupportMeasure measure_from_text(const GroupPtr& group, const std::string& text) {
    LineCursor in(text);
    FiniteSupportMeasure::WeightMap weights;
    while (!in.done()) {
        const auto [literal, mass] = split_last(in.take());
        weights[element_from_literal(group, literal)] += rational_from_text(mass);
    }
    return FiniteSupportMeasure(group, std::move(weights));
}

std::string space_to_text(const FiniteProbabilitySpace& space) {
    std::ostringstream out;
    write_space(out, space);
    return out.str();
}

FiniteProbabilitySpace space_from_text(const std::string& text) {
    LineCursor in(text);
    auto space = parse_space(in);
    in.expect_done();
    return space;
}

std::string partition_to_text(const Partition& partition) {
    std::ostringstream out;
    for (std::size_t atom = 0; atom < partition.atom_count(); ++atom) {
        if (atom != 0) out << ' ';
        out << partition.block_of(atom);
    }
    out << "\n";
    return out.str();
}

Partition partition_from_text(const std::string& text) {
    LineCursor in(text);
    std::vector<int> ids;
    for (const auto& token : tokens_of(in.take())) {
        ids.push_back(static_cast<int>(parse_long(token)));
    }
    in.expect_done();
    return Partition(std::move(ids));
}

std::string automorphism_to_cycles(const Automorphism& f) {
    std::ostringstream out;
    write_automorphism(out, f);
    auto text = out.str();
    text.pop_back();  // the block writers add their own newlines
    return text;
}

Automorphism automorphism_from_cycles(std::size_t size, const std::string& text) {
    std::vector<std::size_t> images(size);
    for (std::size_t i = 0; i < size; ++i) images[i] = i;
    std::vector<bool> seen(size, false);

    std::size_t i = 0;
    const auto skip_spaces = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_spaces();
    if (i == text.size()) throw ParseError("empty permutation line");
    bool any_cycle = false;
    while (i < text.size()) {
        if (text[i] != '(') throw ParseError("expected '(' in '" + text + "'");
        ++i;
        std::vector<std::size_t> cycle;
        while (true) {
            skip_spaces();
            if (i == text.size()) throw ParseError("unterminated cycle in '" + text + "'");
            if (text[i] == ')') {
                ++i;
                break;
            }
            std::size_t begin = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (begin == i) throw ParseError("expected an atom index in '" + text + "'");
            const long atom = parse_long(text.substr(begin, i - begin));
            if (atom < 0 || static_cast<std::size_t>(atom) >= size) {
                throw ParseError("atom " + std::to_string(atom) + " outside the space");
            }
            if (seen[static_cast<std::size_t>(atom)]) {
                throw ParseError("atom " + std::to_string(atom) + " repeated");
            }
            seen[static_cast<std::size_t>(atom)] = true;
            cycle.push_back(static_cast<std::size_t>(atom));
        }
        for (std::size_t k = 0; k + 1 < cycle.size(); ++k) images[cycle[k]] = cycle[k + 1];
        if (cycle.size() > 1) images[cycle.back()] = cycle.front();
        any_cycle = true;
        skip_spaces();
    }
    if (!any_cycle) throw ParseError("expected cycles in '" + text + "'");
    return Automorphism(std::move(images));
}

std::string action_to_text(const PmpAction& action) {
    std::ostringstream out;
    out << "action\n";
    write_group(out, action.group());
    write_space(out, action.space());
    for (const auto& image : action.generator_images()) write_automorphism(out, image);
    return out.str();
}

PmpAction action_from_text(const std::string& text) {
    LineCursor in(text);
    in.expect("action");
    auto group = parse_group(in);
    auto space = parse_space(in);
    auto action = parse_action_body(in, std::move(group), std::move(space));
    in.expect_done();
    return action;
}

std::string pair_to_text(const CommutingPair& pair) {
    std::ostringstream out;
    out << "pair\n";
    write_space(out, pair.space());
    for (const PmpAction* action : {&pair.left(), &pair.right()}) {
        out << "action\n";
        write_group(out, action->group());
        for (const auto& image : action->generator_images()) write_automorphism(out, image);
    }
    return out.str();
}

CommutingPair pair_from_text(const std::string& text) {
    LineCursor in(text);
    in.expect("pair");
    auto space = parse_space(in);
    in.expect("action");
    auto left_group = parse_group(in);
    auto left = parse_action_body(in, std::move(left_group), space);
    in.expect("action");
    auto right_group = parse_group(in);
    auto right = parse_action_body(in, std::move(right_group), space);
    in.expect_done();
    return CommutingPair(std::move(left), std::move(right));
}

std::string ring_element_to_text(const GroupRingElement& phi) {
    std::ostringstream out;
    for (const auto& [g, value] : phi.coefficients()) {
        out << element_literal(g) << ' ' << double_to_text(value.real()) << ' '
            << double_to_text(value.imag()) << "\n";
    }
    return out.str();
}

GroupRingElement ring_element_from_text(const GroupPtr& group, const std::string& text) {
    LineCursor in(text);
    GroupRingElement phi(group);
    while (!in.done()) {
        const auto [head, imaginary] = split_last(in.take());
        const auto [literal, real] = split_last(head);
        phi.add(element_from_literal(group, literal),
                Complex(parse_double(real), parse_double(imaginary)));
    }
    return phi;
}

}  // namespace ergo

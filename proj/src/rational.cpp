#include "ergo/rational.hpp"

#include <stdexcept>

#include "ergo/errors.hpp"

namespace ergo {

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) {
            return Rational(mpz_class(text));
        }
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
        Rational value(num, den);
        value.canonicalize();
        return value;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal '" + text + "'");
    }
}

std::string format_rational(const Rational& value) { return value.get_str(); }

}  // namespace ergo

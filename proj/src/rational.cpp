#include "obsv/rational.hpp"

#include <cctype>

namespace obsv {

namespace {
bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}
}  // namespace

bool parse_rational(std::string_view text, Rational& out)
{
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational q;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            return false;
        BigInt d{std::string(den), 10};
        if (d == 0)
            return false;
        q = Rational(BigInt(std::string(num), 10), d);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if (!all_digits(whole) || !all_digits(frac))
            return false;
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        q = Rational(BigInt(std::string(whole) + std::string(frac), 10), scale);
    } else {
        if (!all_digits(text))
            return false;
        q = Rational(BigInt(std::string(text), 10));
    }
    q.canonicalize();
    out = negative ? Rational(-q) : q;
    return true;
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace obsv

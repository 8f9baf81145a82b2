#include "ringspice/value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ringspice {

namespace {

struct suffix_entry {
    const char* text;
    int exponent;
};

// "meg" must be matched before "m"
constexpr suffix_entry kSuffixes[] = {
    {"meg", 6}, {"f", -15}, {"p", -12}, {"n", -9}, {"u", -6},
    {"m", -3},  {"k", 3},   {"g", 9},
};

bool iequal_prefix(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size())
        return false;
    for (size_t i = 0; i < prefix.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i])
            return false;
    return true;
}

// Split a decimal literal into (mantissa_text, exponent). "1.5e3" -> ("1.5", 3).
void split_exponent(std::string_view num, std::string& mantissa, long& exp10) {
    size_t e = num.find_first_of("eE");
    if (e == std::string_view::npos) {
        mantissa = std::string(num);
        exp10 = 0;
        return;
    }
    mantissa = std::string(num.substr(0, e));
    exp10 = std::strtol(std::string(num.substr(e + 1)).c_str(), nullptr, 10);
}

} // namespace

double parse_value(std::string_view token) {
    if (token.empty())
        throw std::invalid_argument("empty numeric token");
    // strict decimal grammar: no hex floats, no inf/nan keywords
    {
        std::string_view t = token;
        if (t.front() == '+' || t.front() == '-')
            t.remove_prefix(1);
        if (t.empty() ||
            !(std::isdigit(static_cast<unsigned char>(t.front())) || t.front() == '.'))
            throw std::invalid_argument("malformed number '" + std::string(token) + "'");
        if (t.find_first_of("xX") != std::string_view::npos)
            throw std::invalid_argument("malformed number '" + std::string(token) + "'");
    }
    std::string s(token);
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    std::strtod(begin, &end);
    if (end == begin)
        throw std::invalid_argument("malformed number '" + s + "'");
    std::string_view tail(end, s.c_str() + s.size() - end);

    int suffix_exp = 0;
    for (const auto& suf : kSuffixes) {
        if (iequal_prefix(tail, suf.text)) {
            suffix_exp = suf.exponent;
            tail.remove_prefix(std::string_view(suf.text).size());
            break;
        }
    }
    // whatever remains may only be unit letters
    for (char ch : tail)
        if (!std::isalpha(static_cast<unsigned char>(ch)))
            throw std::invalid_argument("malformed number '" + s + "'");

    // Rebuild the literal with the suffix folded into the decimal exponent, so
    // one correctly-rounded strtod sees the full decimal value.
    std::string mantissa;
    long exp10 = 0;
    split_exponent(std::string_view(begin, end - begin), mantissa, exp10);
    exp10 += suffix_exp;
    std::string literal = mantissa + "e" + std::to_string(exp10);
    double v = std::strtod(literal.c_str(), nullptr);
    if (!std::isfinite(v))
        throw std::invalid_argument("numeric overflow in '" + s + "'");
    return v;
}

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_value(double value) {
    if (value == 0.0)
        return "0";
    if (!std::isfinite(value))
        return format_double(value);

    // shortest round-trip digits, normalized scientific: d[.ddd]e[+-]dd
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value,
                             std::chars_format::scientific);
    std::string sci(buf, res.ptr);

    std::string sign;
    std::string_view body = sci;
    if (body.front() == '-') {
        sign = "-";
        body.remove_prefix(1);
    }
    std::string mant;
    long exp10 = 0;
    split_exponent(body, mant, exp10);
    if (exp10 > 11 || exp10 < -15)
        return format_double(value); // out of suffix range, plain scientific
    std::string digits;
    for (char ch : mant)
        if (ch != '.')
            digits.push_back(ch);
    // value = 0.digits * 10^(exp10+1); exp10 is the exponent of the lead digit

    const struct { int e; const char* s; } eng[] = {
        {9, "g"}, {6, "meg"}, {3, "k"}, {0, ""},
        {-3, "m"}, {-6, "u"}, {-9, "n"}, {-12, "p"}, {-15, "f"},
    };
    long pick = -16;
    const char* suffix = nullptr;
    for (const auto& en : eng) {
        if (exp10 >= en.e) {
            pick = en.e;
            suffix = en.s;
            break;
        }
    }
    if (suffix == nullptr) {
        pick = -15;
        suffix = "f";
    }

    // place the decimal point after (exp10 - pick + 1) digits
    long point = exp10 - pick + 1;
    std::string out;
    if (point <= 0) {
        out = "0.";
        out.append(static_cast<size_t>(-point), '0');
        out += digits;
    } else if (static_cast<size_t>(point) >= digits.size()) {
        out = digits;
        out.append(static_cast<size_t>(point) - digits.size(), '0');
    } else {
        out = digits.substr(0, static_cast<size_t>(point)) + "." +
              digits.substr(static_cast<size_t>(point));
    }
    return sign + out + suffix;
}

} // namespace ringspice

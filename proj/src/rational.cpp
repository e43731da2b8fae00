#include "toric/rational.hpp"

#include "toric/error.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>

namespace toric {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

[[noreturn]] void bad(std::string_view text) {
    fail(ErrorKind::Parse, "rational", "cannot parse '" + std::string(text) + "'");
}

Integer pow10(long e) {
    Integer r = 1;
    for (long i = 0; i < e; ++i) r *= 10;
    return r;
}

Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = s.substr(e + 1);
        bool exp_neg = false;
        if (!exp_part.empty() && (exp_part[0] == '-' || exp_part[0] == '+')) {
            exp_neg = exp_part[0] == '-';
            exp_part.remove_prefix(1);
        }
        if (!all_digits(exp_part)) bad(text);
        exponent = std::stol(std::string(exp_part));
        if (exp_neg) exponent = -exponent;
        s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
            (whole.empty() && frac.empty()))
            bad(text);
        digits = std::string(whole) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        if (!all_digits(s)) bad(text);
        digits = std::string(s);
    }
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));  // no octal prefix
    Rational r{Integer(digits)};
    if (exponent >= 0)
        r *= pow10(exponent);
    else
        r /= pow10(-exponent);
    return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    std::string_view s = trim(text);
    if (s.empty()) bad(text);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = trim(s.substr(0, slash));
        std::string_view den = trim(s.substr(slash + 1));
        std::string_view num_digits = num;
        if (!num_digits.empty() && (num_digits[0] == '-' || num_digits[0] == '+')) num_digits.remove_prefix(1);
        if (!all_digits(num_digits) || !all_digits(den)) bad(text);
        Integer q(std::string{den});
        if (q == 0) fail(ErrorKind::Parse, "rational", "zero denominator in '" + std::string(text) + "'");
        std::string n{num};
        if (!n.empty() && n[0] == '+') n.erase(0, 1);
        return Rational(Integer(n), q);
    }
    return parse_decimal(s);
}

std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Rational from_decimal(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::Precondition, "rational", "non-finite value");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return parse_decimal(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

Rational from_double(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::Precondition, "rational", "non-finite value");
    int exp = 0;
    double mant = std::frexp(x, &exp);
    // mant·2^53 is an exact integer.
    auto m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r{Integer(m)};
    Integer two_pow = 1;
    for (int i = 0; i < std::abs(exp); ++i) two_pow *= 2;
    if (exp >= 0)
        r *= two_pow;
    else
        r /= two_pow;
    return r;
}

Integer lcm(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    return boost::multiprecision::lcm(a, b);
}

Integer denominator_lcm(const RVec& v) {
    Integer d = 1;
    for (const auto& x : v) d = lcm(d, denominator(x));
    return d;
}

std::vector<Integer> primitive_direction(const RVec& v) {
    Integer d = denominator_lcm(v);
    std::vector<Integer> out;
    out.reserve(v.size());
    Integer g = 0;
    for (const auto& x : v) {
        Integer n = numerator(x) * (d / denominator(x));
        out.push_back(n);
        g = boost::multiprecision::gcd(g, n);
    }
    if (g == 0) fail(ErrorKind::Precondition, "rational", "primitive direction of the zero vector");
    if (g < 0) g = -g;
    for (auto& x : out) x /= g;
    return out;
}

Rational dot(const RVec& a, const RVec& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> to_double(const RVec& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(to_double(x));
    return out;
}

bool lex_less(const RVec& a, const RVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace toric

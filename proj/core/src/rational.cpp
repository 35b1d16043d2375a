#include "lbeq/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace lbeq {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rat parse_rational(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = (s[0] == '-');
        s.erase(0, 1);
    }
    if (s.empty()) throw std::invalid_argument("empty rational literal: '" + text + "'");

    Rat value;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("bad rational literal: '" + text + "'");
        Int d(den);
        if (d == 0) throw std::invalid_argument("zero denominator in literal: '" + text + "'");
        value = Rat(Int(num), d);
    } else if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!all_digits(ip) || (!fp.empty() && !all_digits(fp)))
            throw std::invalid_argument("bad decimal literal: '" + text + "'");
        Int scale = int_pow(Int(10), static_cast<int>(fp.size()));
        Int mant = Int(ip) * scale + (fp.empty() ? Int(0) : Int(fp));
        value = Rat(mant, scale);
    } else {
        if (!all_digits(s)) throw std::invalid_argument("bad integer literal: '" + text + "'");
        value = Rat(Int(s));
    }
    return negative ? Rat(-value) : value;
}

std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Int int_pow(const Int& base, int exp) {
    if (exp < 0) throw std::invalid_argument("int_pow: negative exponent");
    Int r = 1, b = base;
    int e = exp;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace lbeq

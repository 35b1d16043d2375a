#include "lbeq/scalar.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lbeq {

Scalar::Scalar(long v) : num_(Int(v)) {}

Scalar::Scalar(const Rat& r) : num_(Int(numerator(r))), den_(Int(denominator(r))) {}

Scalar Scalar::param(int id) {
    Scalar s;
    s.num_ = Poly<Int>::variable(id);
    return s;
}

Scalar Scalar::param(const std::string& name) { return param(param_intern(name)); }

Scalar Scalar::from_num_den(Poly<Int> n, Poly<Int> d) {
    if (d.is_zero()) throw std::domain_error("division by zero Scalar");
    Scalar s;
    if (n.is_zero()) return s;
    if (d.is_constant()) {
        Int c = d.constant();
        Int g = coeff_traits<Int>::gcd_abs(n.content(), c);
        if (c < 0) g = -g;
        s.num_ = n.divide_coeff(g);
        s.den_ = d.divide_coeff(g);
        return s;
    }
    Poly<Int> g = poly_gcd(n, d);
    if (!(g.is_constant() && g.constant() == 1)) {
        n = poly_divide_exact(n, g);
        d = poly_divide_exact(d, g);
    }
    if (d.leading().c < 0) {
        n = -n;
        d = -d;
    }
    s.num_ = std::move(n);
    s.den_ = std::move(d);
    return s;
}

bool Scalar::is_one() const {
    return num_.is_constant() && num_.constant() == 1 && den_.is_constant() &&
           den_.constant() == 1;
}

Rat Scalar::rational_value() const {
    if (!is_rational()) throw std::logic_error("Scalar::rational_value: symbolic value");
    return Rat(num_.is_zero() ? Int(0) : num_.constant(), den_.constant());
}

Scalar Scalar::operator-() const {
    Scalar s = *this;
    s.num_ = -s.num_;
    return s;
}

Scalar Scalar::operator+(const Scalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) return from_num_den(num_ + o.num_, den_);
    return from_num_den(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    if (is_zero() || o.is_zero()) return Scalar();
    bool d1 = den_.is_constant() && den_.constant() == 1;
    bool d2 = o.den_.is_constant() && o.den_.constant() == 1;
    if (d1 && d2) {
        Scalar s;
        s.num_ = num_ * o.num_;
        return s;
    }
    // Cross-cancellation; both operands being reduced, the result is already
    // coprime once the diagonal gcds are removed.
    Poly<Int> g1 = poly_gcd(num_, o.den_);
    Poly<Int> g2 = poly_gcd(o.num_, den_);
    Poly<Int> n = poly_divide_exact(num_, g1) * poly_divide_exact(o.num_, g2);
    Poly<Int> d = poly_divide_exact(den_, g2) * poly_divide_exact(o.den_, g1);
    Scalar s;
    if (d.leading().c < 0) {
        n = -n;
        d = -d;
    }
    s.num_ = std::move(n);
    s.den_ = std::move(d);
    return s;
}

Scalar Scalar::invert() const {
    if (is_zero()) throw std::domain_error("division by zero Scalar");
    Scalar s;
    s.num_ = den_;
    s.den_ = num_;
    if (s.den_.leading().c < 0) {
        s.num_ = -s.num_;
        s.den_ = -s.den_;
    }
    return s;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.invert(); }

Scalar Scalar::pow(int e) const {
    if (e < 0) return invert().pow(-e);
    Scalar r(1), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

namespace {

// P with variable v replaced by x, evaluated in Scalar arithmetic.
Scalar substitute_poly(const Poly<Int>& p, int v, const Scalar& x) {
    int d = p.degree_in(v);
    if (d == 0) {
        Scalar s = Scalar::from_num_den(p, Poly<Int>(Int(1)));
        return s;
    }
    Scalar acc;
    Scalar xp(1);
    for (int k = 0; k <= d; ++k) {
        Poly<Int> ck = p.coeff_of(v, k);
        if (!ck.is_zero())
            acc += Scalar::from_num_den(ck, Poly<Int>(Int(1))) * xp;
        if (k < d) xp = xp * x;
    }
    return acc;
}

}  // namespace

Scalar Scalar::substitute(int param, const Scalar& value) const {
    Scalar n = substitute_poly(num_, param, value);
    Scalar d = substitute_poly(den_, param, value);
    return n / d;
}

void Scalar::collect_params(std::set<int>& out) const {
    num_.collect_vars(out);
    den_.collect_vars(out);
}

namespace {

double eval_poly(const Poly<Int>& p, const std::map<int, double>& bindings) {
    double acc = 0.0;
    for (const auto& t : p.terms()) {
        double v = t.c.convert_to<double>();
        for (auto& [var, exp] : t.m.factors()) {
            auto it = bindings.find(var);
            if (it == bindings.end())
                throw std::invalid_argument("unbound parameter '" + param_name(var) + "'");
            v *= std::pow(it->second, exp);
        }
        acc += v;
    }
    return acc;
}

}  // namespace

double Scalar::evaluate(const std::map<int, double>& bindings) const {
    double d = eval_poly(den_, bindings);
    if (d == 0.0) throw std::domain_error("Scalar evaluation: denominator vanished");
    return eval_poly(num_, bindings) / d;
}

std::string latex_symbol(const std::string& name) {
    static const char* greek[] = {"alpha", "beta",  "gamma", "delta", "epsilon", "zeta",
                                  "eta",   "theta", "kappa", "lambda", "mu",     "nu",
                                  "xi",    "pi",    "rho",   "sigma", "tau",     "phi",
                                  "chi",   "psi",   "omega"};
    auto us = name.find('_');
    std::string head = name.substr(0, us);
    std::string tail = us == std::string::npos ? "" : name.substr(us + 1);
    for (const char* g : greek)
        if (head == g) {
            head = "\\" + head;
            break;
        }
    if (tail.empty()) return head;
    return head + "_{" + tail + "}";
}

std::string poly_int_str(const Poly<Int>& p, bool latex) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms()) {
        Int c = t.c;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        Int a = boost::multiprecision::abs(c);
        bool coeff_shown = (a != 1) || t.m.is_one();
        if (coeff_shown) os << a.str();
        bool need_sep = coeff_shown;
        for (auto& [v, e] : t.m.factors()) {
            if (need_sep) os << (latex ? " " : "*");
            need_sep = true;
            os << (latex ? latex_symbol(param_name(v)) : param_name(v));
            if (e > 1) {
                if (latex) os << "^{" << e << "}";
                else os << "^" << e;
            }
        }
    }
    return os.str();
}

std::string Scalar::str() const {
    if (den_.is_constant() && den_.constant() == 1) return poly_int_str(num_, false);
    std::string n = poly_int_str(num_, false);
    std::string d = poly_int_str(den_, false);
    if (num_.size() > 1) n = "(" + n + ")";
    // "x/lambda^2" and "x/12" read fine bare; anything else gets parentheses.
    bool bare = den_.size() == 1 && (den_.leading().m.is_one() ||
                                     (den_.leading().c == 1 &&
                                      den_.leading().m.factors().size() == 1));
    if (!bare) d = "(" + d + ")";
    return n + "/" + d;
}

std::string Scalar::latex() const {
    if (den_.is_constant() && den_.constant() == 1) return poly_int_str(num_, true);
    return "\\frac{" + poly_int_str(num_, true) + "}{" + poly_int_str(den_, true) + "}";
}

bool Scalar::is_single_product() const {
    return num_.size() <= 1 && den_.size() <= 1;
}

}  // namespace lbeq

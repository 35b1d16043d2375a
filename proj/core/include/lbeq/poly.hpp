// Sparse multivariate polynomials over an exact coefficient ring, kept in a
// canonical form: terms sorted in descending graded-lex order, no zero
// coefficients stored.
//
// The same template serves three roles: integer polynomials inside Scalar,
// differential operators (Scalar coefficients over axis ids), and jet
// polynomials (Scalar coefficients over jet variable ids).  Gcd is the
// classical primitive polynomial remainder sequence, recursing on the
// coefficient polynomials; it is exact over both the integers and any
// coefficient field.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "lbeq/monomial.hpp"
#include "lbeq/rational.hpp"

namespace lbeq {

template <class C>
struct coeff_traits;  // specialized per coefficient ring

template <>
struct coeff_traits<Int> {
    static constexpr bool is_field = false;
    static Int zero() { return Int(0); }
    static Int one() { return Int(1); }
    static Int from_int(long v) { return Int(v); }
    static bool is_zero(const Int& c) { return c == 0; }
    static bool is_one(const Int& c) { return c == 1; }
    static bool is_negative(const Int& c) { return c < 0; }
    static Int divide(const Int& a, const Int& b) {
        Int q, r;
        divide_qr(a, b, q, r);
        if (r != 0) throw std::logic_error("coeff divide: not exact");
        return q;
    }
    static Int gcd_abs(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
};

template <class C>
class Poly {
public:
    struct Term {
        Mono m;
        C c;
        bool operator==(const Term& o) const { return m == o.m && c == o.c; }
    };
    using Traits = coeff_traits<C>;

    Poly() = default;
    explicit Poly(const C& c) {
        if (!Traits::is_zero(c)) t_.push_back({Mono(), c});
    }
    Poly(const Mono& m, const C& c) {
        if (!Traits::is_zero(c)) t_.push_back({m, c});
    }
    static Poly variable(int v) { return Poly(Mono::var(v), Traits::one()); }

    // Builds the canonical form from an arbitrary term list.
    static Poly from_terms(std::vector<Term> raw) {
        std::sort(raw.begin(), raw.end(),
                  [](const Term& a, const Term& b) { return Mono::cmp(a.m, b.m) > 0; });
        Poly p;
        for (auto& t : raw) {
            if (!p.t_.empty() && p.t_.back().m == t.m)
                p.t_.back().c = p.t_.back().c + t.c;
            else
                p.t_.push_back(std::move(t));
            if (!p.t_.empty() && Traits::is_zero(p.t_.back().c)) p.t_.pop_back();
        }
        return p;
    }

    const std::vector<Term>& terms() const { return t_; }
    std::size_t size() const { return t_.size(); }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }

    // Pre: is_constant().
    C constant() const {
        if (t_.empty()) return Traits::zero();
        if (!t_[0].m.is_one()) throw std::logic_error("Poly::constant: not a constant");
        return t_[0].c;
    }

    const Term& leading() const {
        if (t_.empty()) throw std::logic_error("Poly::leading: zero polynomial");
        return t_[0];
    }

    int total_degree() const {
        int d = 0;
        for (auto& t : t_) d = std::max(d, t.m.degree());
        return d;
    }

    int degree_in(int v) const {
        int d = 0;
        for (auto& t : t_) d = std::max(d, t.m.degree_in(v));
        return d;
    }

    void collect_vars(std::set<int>& out) const {
        for (auto& t : t_)
            for (auto& [v, e] : t.m.factors()) out.insert(v);
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& t : r.t_) t.c = -t.c;
        return r;
    }

    Poly operator+(const Poly& o) const {
        Poly r;
        r.t_.reserve(t_.size() + o.t_.size());
        std::size_t i = 0, j = 0;
        while (i < t_.size() && j < o.t_.size()) {
            int c = Mono::cmp(t_[i].m, o.t_[j].m);
            if (c > 0)
                r.t_.push_back(t_[i++]);
            else if (c < 0)
                r.t_.push_back(o.t_[j++]);
            else {
                C s = t_[i].c + o.t_[j].c;
                if (!Traits::is_zero(s)) r.t_.push_back({t_[i].m, std::move(s)});
                ++i, ++j;
            }
        }
        for (; i < t_.size(); ++i) r.t_.push_back(t_[i]);
        for (; j < o.t_.size(); ++j) r.t_.push_back(o.t_[j]);
        return r;
    }

    Poly operator-(const Poly& o) const { return *this + (-o); }

    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<Term> raw;
        raw.reserve(t_.size() * o.t_.size());
        for (auto& a : t_)
            for (auto& b : o.t_) raw.push_back({a.m * b.m, a.c * b.c});
        return from_terms(std::move(raw));
    }

    Poly scaled(const C& c) const {
        if (Traits::is_zero(c)) return Poly();
        Poly r = *this;
        for (auto& t : r.t_) t.c = t.c * c;
        r.strip_zeros();
        return r;
    }

    Poly mul_mono(const Mono& m, const C& c) const {
        if (Traits::is_zero(c)) return Poly();
        Poly r = *this;
        for (auto& t : r.t_) {
            t.m = t.m * m;
            t.c = t.c * c;
        }
        r.strip_zeros();
        return r;
    }

    // Exact division by a coefficient; throws if any term fails.
    Poly divide_coeff(const C& c) const {
        Poly r = *this;
        for (auto& t : r.t_) t.c = Traits::divide(t.c, c);
        return r;
    }

    Poly pow(int e) const {
        if (e < 0) throw std::invalid_argument("Poly::pow: negative exponent");
        Poly r(Traits::one());
        Poly b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    Poly derivative(int v) const {
        std::vector<Term> raw;
        for (auto& t : t_) {
            int e = t.m.degree_in(v);
            if (e == 0) continue;
            raw.push_back({t.m.reduce(v), t.c * Traits::from_int(e)});
        }
        return from_terms(std::move(raw));
    }

    // Coefficient of v^k, as a polynomial with v removed.
    Poly coeff_of(int v, int k) const {
        std::vector<Term> raw;
        for (auto& t : t_)
            if (t.m.degree_in(v) == k) raw.push_back({t.m.without(v), t.c});
        return from_terms(std::move(raw));
    }

    Poly substitute(int v, const Poly& repl) const {
        Poly acc;
        std::map<int, Poly> powers;
        for (auto& t : t_) {
            int e = t.m.degree_in(v);
            Poly base(t.m.without(v), t.c);
            if (e == 0) {
                acc = acc + base;
                continue;
            }
            auto it = powers.find(e);
            if (it == powers.end()) it = powers.emplace(e, repl.pow(e)).first;
            acc = acc + base * it->second;
        }
        return acc;
    }

    // Gcd of all term monomials (the common power-product factor).
    Mono monomial_content() const {
        if (t_.empty()) return Mono();
        Mono g = t_[0].m;
        for (std::size_t i = 1; i < t_.size() && !g.is_one(); ++i) g = Mono::gcd(g, t_[i].m);
        return g;
    }

    // Gcd of all coefficients (integer-like rings only).
    C content() const {
        static_assert(!Traits::is_field, "content is trivial over a field");
        C g = Traits::zero();
        for (auto& t : t_) {
            g = Traits::gcd_abs(g, t.c);
            if (Traits::is_one(g)) break;
        }
        return g;
    }

    bool operator==(const Poly& o) const { return t_ == o.t_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

private:
    void strip_zeros() {
        t_.erase(std::remove_if(t_.begin(), t_.end(),
                                [](const Term& t) { return Traits::is_zero(t.c); }),
                 t_.end());
    }

    std::vector<Term> t_;  // descending graded-lex, no zero coefficients
};

// Sign/monic normalization: the canonical associate of p.
template <class C>
Poly<C> poly_canonical(const Poly<C>& p) {
    using T = coeff_traits<C>;
    if (p.is_zero()) return p;
    if constexpr (T::is_field) {
        C lc = p.leading().c;
        if (T::is_one(lc)) return p;
        return p.scaled(T::divide(T::one(), lc));
    } else {
        if (T::is_negative(p.leading().c)) return -p;
        return p;
    }
}

// Exact multivariate division; throws std::logic_error when not divisible.
template <class C>
Poly<C> poly_divide_exact(const Poly<C>& a, const Poly<C>& b) {
    using T = coeff_traits<C>;
    if (b.is_zero()) throw std::logic_error("poly division by zero");
    if (a.is_zero()) return a;
    if (b.is_constant()) return a.divide_coeff(b.constant());
    Poly<C> r = a, q;
    const auto& bl = b.leading();
    while (!r.is_zero()) {
        const auto& rl = r.leading();
        if (!bl.m.divides(rl.m)) throw std::logic_error("poly division: monomial not divisible");
        Mono qm = bl.m.divide_into(rl.m);
        C qc = T::divide(rl.c, bl.c);
        Poly<C> step = Poly<C>(qm, qc);
        q = q + step;
        r = r - b.mul_mono(qm, qc);
    }
    return q;
}

// Pseudo-remainder of a by b with respect to variable v (an associate of the
// classical prem; primitive PRS normalizes afterwards anyway).
template <class C>
Poly<C> poly_pseudo_rem(const Poly<C>& a, const Poly<C>& b, int v) {
    int db = b.degree_in(v);
    if (db == 0) throw std::logic_error("pseudo_rem: divisor constant in main variable");
    Poly<C> lb = b.coeff_of(v, db);
    Poly<C> r = a;
    while (!r.is_zero()) {
        int dr = r.degree_in(v);
        if (dr < db) break;
        Poly<C> lr = r.coeff_of(v, dr);
        // lb*r - lr*v^(dr-db)*b cancels the top v-power of r.
        r = lb * r - (lr * b).mul_mono(Mono::var(v, dr - db), coeff_traits<C>::one());
    }
    return r;
}

template <class C>
Poly<C> poly_gcd(const Poly<C>& a, const Poly<C>& b);

// Gcd of the coefficients of a viewed as a polynomial in v.
template <class C>
Poly<C> poly_content_in(const Poly<C>& a, int v) {
    Poly<C> g;
    int d = a.degree_in(v);
    for (int k = 0; k <= d; ++k) {
        Poly<C> ck = a.coeff_of(v, k);
        if (ck.is_zero()) continue;
        g = g.is_zero() ? poly_canonical(ck) : poly_gcd(g, ck);
        if (g.is_constant() && coeff_traits<C>::is_one(g.constant())) break;
    }
    return g;
}

template <class C>
Poly<C> poly_gcd(const Poly<C>& a, const Poly<C>& b) {
    using T = coeff_traits<C>;
    if (a.is_zero()) return poly_canonical(b);
    if (b.is_zero()) return poly_canonical(a);

    if (a.is_constant() || b.is_constant()) {
        if constexpr (T::is_field) return Poly<C>(T::one());
        else {
            C ca = a.is_constant() ? T::gcd_abs(a.constant(), T::zero()) : a.content();
            C cb = b.is_constant() ? T::gcd_abs(b.constant(), T::zero()) : b.content();
            return Poly<C>(T::gcd_abs(ca, cb));
        }
    }

    // With a single term on either side the gcd is the shared power product
    // times the coefficient gcd; this covers the dominant case of monomial
    // denominators without touching the remainder sequence.
    if (a.size() == 1 || b.size() == 1) {
        Mono m = Mono::gcd(a.monomial_content(), b.monomial_content());
        if constexpr (T::is_field) return Poly<C>(m, T::one());
        else return Poly<C>(m, T::gcd_abs(a.content(), b.content()));
    }

    if (a == b) return poly_canonical(a);

    std::set<int> va, vb;
    a.collect_vars(va);
    b.collect_vars(vb);
    int v = -1, best = -1;
    for (int w : va) {
        if (!vb.count(w)) continue;
        int d = std::max(a.degree_in(w), b.degree_in(w));
        if (best < 0 || d < best) best = d, v = w;
    }
    if (v < 0) {
        // No shared variable: the gcd can only divide the content of either
        // side with respect to one of its own variables.
        int w = *va.begin();
        return poly_gcd(poly_content_in(a, w), b);
    }

    Poly<C> ca = poly_content_in(a, v), cb = poly_content_in(b, v);
    Poly<C> pa = poly_divide_exact(a, ca), pb = poly_divide_exact(b, cb);
    Poly<C> cg = poly_gcd(ca, cb);

    if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
    Poly<C> r0 = pa, r1 = pb;
    while (!r1.is_zero() && r1.degree_in(v) > 0) {
        Poly<C> r = poly_pseudo_rem(r0, r1, v);
        r0 = std::move(r1);
        if (r.is_zero())
            r1 = Poly<C>();
        else
            r1 = poly_divide_exact(r, poly_content_in(r, v));
    }
    Poly<C> g;
    if (r1.is_zero())
        g = cg * poly_divide_exact(r0, poly_content_in(r0, v));
    else
        g = std::move(cg);  // primitive parts coprime in v
    return poly_canonical(g);
}

}  // namespace lbeq

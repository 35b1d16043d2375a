// Sparse power products over integer variable ids, compared in graded
// lexicographic order (total degree first, then the earliest variable with
// the larger exponent wins).
#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lbeq {

class Mono {
public:
    // (variable id, exponent) pairs, sorted by id, exponents > 0.
    using Factor = std::pair<int, int>;

    Mono() = default;

    static Mono var(int v, int exp = 1) {
        Mono m;
        if (exp < 0) throw std::invalid_argument("Mono: negative exponent");
        if (exp > 0) m.f_.emplace_back(v, exp);
        return m;
    }

    static Mono from_factors(std::vector<Factor> f) {
        Mono m;
        m.f_ = std::move(f);  // caller guarantees sorted ids and positive exps
        return m;
    }

    bool is_one() const { return f_.empty(); }

    int degree() const {
        int d = 0;
        for (auto& [v, e] : f_) d += e;
        return d;
    }

    int degree_in(int v) const {
        for (auto& [w, e] : f_)
            if (w == v) return e;
        return 0;
    }

    const std::vector<Factor>& factors() const { return f_; }

    Mono operator*(const Mono& o) const {
        Mono r;
        r.f_.reserve(f_.size() + o.f_.size());
        std::size_t i = 0, j = 0;
        while (i < f_.size() && j < o.f_.size()) {
            if (f_[i].first < o.f_[j].first)
                r.f_.push_back(f_[i++]);
            else if (f_[i].first > o.f_[j].first)
                r.f_.push_back(o.f_[j++]);
            else {
                r.f_.emplace_back(f_[i].first, f_[i].second + o.f_[j].second);
                ++i, ++j;
            }
        }
        for (; i < f_.size(); ++i) r.f_.push_back(f_[i]);
        for (; j < o.f_.size(); ++j) r.f_.push_back(o.f_[j]);
        return r;
    }

    bool divides(const Mono& o) const {
        std::size_t j = 0;
        for (auto& [v, e] : f_) {
            while (j < o.f_.size() && o.f_[j].first < v) ++j;
            if (j == o.f_.size() || o.f_[j].first != v || o.f_[j].second < e) return false;
        }
        return true;
    }

    // Pre: this->divides(o) is false in general use; here o / this with
    // this->divides(o) required.
    Mono divide_into(const Mono& o) const {
        Mono r;
        std::size_t i = 0;
        for (auto& [v, e] : o.f_) {
            int sub = 0;
            while (i < f_.size() && f_[i].first < v) ++i;
            if (i < f_.size() && f_[i].first == v) sub = f_[i].second;
            if (sub > e) throw std::logic_error("Mono::divide_into: not divisible");
            if (e - sub > 0) r.f_.emplace_back(v, e - sub);
        }
        return r;
    }

    static Mono gcd(const Mono& a, const Mono& b) {
        Mono r;
        std::size_t i = 0, j = 0;
        while (i < a.f_.size() && j < b.f_.size()) {
            if (a.f_[i].first < b.f_[j].first)
                ++i;
            else if (a.f_[i].first > b.f_[j].first)
                ++j;
            else {
                r.f_.emplace_back(a.f_[i].first, std::min(a.f_[i].second, b.f_[j].second));
                ++i, ++j;
            }
        }
        return r;
    }

    // Strip one power of v (pre: degree_in(v) > 0).
    Mono reduce(int v) const {
        Mono r;
        bool seen = false;
        for (auto& [w, e] : f_) {
            if (w == v) {
                seen = true;
                if (e > 1) r.f_.emplace_back(w, e - 1);
            } else {
                r.f_.push_back({w, e});
            }
        }
        if (!seen) throw std::logic_error("Mono::reduce: variable absent");
        return r;
    }

    // Remove variable v entirely.
    Mono without(int v) const {
        Mono r;
        for (auto& [w, e] : f_)
            if (w != v) r.f_.push_back({w, e});
        return r;
    }

    // Graded lex: positive when a > b.
    static int cmp(const Mono& a, const Mono& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db ? -1 : 1;
        std::size_t i = 0, j = 0;
        while (i < a.f_.size() && j < b.f_.size()) {
            if (a.f_[i].first != b.f_[j].first)
                // The monomial owning the earlier variable has a positive
                // exponent where the other has zero, so it is lex-larger.
                return a.f_[i].first < b.f_[j].first ? 1 : -1;
            if (a.f_[i].second != b.f_[j].second)
                return a.f_[i].second > b.f_[j].second ? 1 : -1;
            ++i, ++j;
        }
        if (i < a.f_.size()) return 1;
        if (j < b.f_.size()) return -1;
        return 0;
    }

    bool operator==(const Mono& o) const { return f_ == o.f_; }

private:
    std::vector<Factor> f_;
};

}  // namespace lbeq

#include "lbeq/jet.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace lbeq {

namespace {

bool poly_is_one(const JetPoly& p) {
    return p.is_constant() && !p.is_zero() && p.constant().is_one();
}

void check_denominator(const JetPoly& d) {
    if (d.is_zero()) throw std::domain_error("division by zero jet expression");
    std::set<int> vars;
    d.collect_vars(vars);
    for (int v : vars)
        if (jetvar_order(v) != 0)
            throw std::invalid_argument(
                "jet denominator may only involve undifferentiated fields");
}

}  // namespace

JetExpr JetExpr::field(int k, int dim) {
    if (dim < 1) throw std::invalid_argument("JetExpr::field: dimension must be >= 1");
    return var(jetvar_intern(k, std::vector<int>(dim, 0)));
}

JetExpr JetExpr::var(int id) {
    JetExpr e;
    e.num_ = JetPoly::variable(id);
    return e;
}

JetExpr JetExpr::from_num_den(JetPoly n, JetPoly d) {
    check_denominator(d);
    JetExpr e;
    if (n.is_zero()) return e;
    if (d.is_constant()) {
        Scalar c = d.constant();
        e.num_ = c.is_one() ? std::move(n) : n.scaled(c.invert());
        return e;
    }
    JetPoly g = poly_gcd(n, d);
    if (!poly_is_one(g)) {
        n = poly_divide_exact(n, g);
        d = poly_divide_exact(d, g);
    }
    if (d.is_constant()) {
        Scalar c = d.constant();
        e.num_ = c.is_one() ? std::move(n) : n.scaled(c.invert());
        return e;
    }
    Scalar lc = d.leading().c;
    if (!lc.is_one()) {
        Scalar inv = lc.invert();
        n = n.scaled(inv);
        d = d.scaled(inv);
    }
    e.num_ = std::move(n);
    e.den_ = std::move(d);
    return e;
}

bool JetExpr::is_scalar() const {
    std::set<int> vars;
    num_.collect_vars(vars);
    den_.collect_vars(vars);
    return vars.empty();
}

Scalar JetExpr::scalar_value() const {
    if (num_.is_zero()) return Scalar();
    if (!num_.is_constant() || !den_.is_constant())
        throw std::logic_error("JetExpr::scalar_value: expression involves fields");
    return num_.constant() / den_.constant();
}

JetExpr JetExpr::operator-() const {
    JetExpr e = *this;
    e.num_ = -e.num_;
    return e;
}

JetExpr JetExpr::operator+(const JetExpr& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (poly_is_one(den_) && poly_is_one(o.den_)) {
        JetExpr e;
        e.num_ = num_ + o.num_;
        return e;
    }
    if (den_ == o.den_) return from_num_den(num_ + o.num_, den_);
    return from_num_den(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

JetExpr JetExpr::operator-(const JetExpr& o) const { return *this + (-o); }

JetExpr JetExpr::operator*(const JetExpr& o) const {
    if (is_zero() || o.is_zero()) return JetExpr();
    if (poly_is_one(den_) && poly_is_one(o.den_)) {
        JetExpr e;
        e.num_ = num_ * o.num_;
        return e;
    }
    return from_num_den(num_ * o.num_, den_ * o.den_);
}

JetExpr JetExpr::operator/(const JetExpr& o) const {
    if (o.is_zero()) throw std::domain_error("division by zero jet expression");
    return from_num_den(num_ * o.den_, den_ * o.num_);
}

JetExpr JetExpr::scaled(const Scalar& c) const {
    JetExpr e = *this;
    if (c.is_zero()) return JetExpr();
    e.num_ = e.num_.scaled(c);
    return e;
}

JetExpr JetExpr::pow(int e) const {
    if (e < 0) return (JetExpr(Scalar(1)) / *this).pow(-e);
    JetExpr r(Scalar(1)), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

namespace {

// Jet variable with one more derivative along `axis`.
int bump_var(int v, int axis) {
    const JetVarKey& key = jetvar_key(v);
    if (axis < 0 || axis >= static_cast<int>(key.mu.size()))
        throw std::invalid_argument("total_derivative: axis out of range for jet variable");
    std::vector<int> mu = key.mu;
    ++mu[axis];
    return jetvar_intern(key.field, mu);
}

JetPoly dpoly(const JetPoly& p, int axis) {
    std::vector<JetPoly::Term> raw;
    for (const auto& t : p.terms()) {
        for (auto& [v, e] : t.m.factors()) {
            Mono m = t.m.reduce(v) * Mono::var(bump_var(v, axis));
            raw.push_back({m, t.c * Scalar(e)});
        }
    }
    return JetPoly::from_terms(std::move(raw));
}

}  // namespace

JetExpr total_derivative(const JetExpr& e, int axis) {
    if (e.is_zero()) return e;
    if (poly_is_one(e.den())) {
        JetPoly n = dpoly(e.num(), axis);
        return JetExpr::from_num_den(std::move(n), JetPoly(Scalar(1)));
    }
    JetPoly n = dpoly(e.num(), axis) * e.den() - e.num() * dpoly(e.den(), axis);
    return JetExpr::from_num_den(std::move(n), e.den() * e.den());
}

JetExpr derive_mono(const JetExpr& e, const Mono& mu) {
    JetExpr r = e;
    for (auto& [axis, exp] : mu.factors())
        for (int i = 0; i < exp; ++i) r = total_derivative(r, axis);
    return r;
}

namespace {

struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const { return Mono::cmp(a, b) < 0; }
};

// Memoized iterated derivatives of the direction vector, keyed by the jet
// variable id the derivative corresponds to.
class DirectionCache {
public:
    explicit DirectionCache(const std::vector<JetExpr>& g) : g_(g) {}

    const JetExpr& get(int v) {
        auto it = cache_.find(v);
        if (it != cache_.end()) return it->second;
        const JetVarKey& key = jetvar_key(v);
        if (key.field < 0 || key.field >= static_cast<int>(g_.size()))
            throw std::invalid_argument("frechet: direction vector has no component for field " +
                                        std::to_string(key.field));
        JetExpr value;
        if (key.order() == 0) {
            value = g_[key.field];
        } else {
            int axis = 0;
            while (key.mu[axis] == 0) ++axis;
            std::vector<int> mu = key.mu;
            --mu[axis];
            int parent = jetvar_intern(key.field, mu);
            value = total_derivative(get(parent), axis);
        }
        return cache_.emplace(v, std::move(value)).first->second;
    }

private:
    const std::vector<JetExpr>& g_;
    std::map<int, JetExpr> cache_;
};

JetExpr frechet_with_cache(const JetExpr& f, DirectionCache& dg) {
    std::set<int> vars;
    f.num().collect_vars(vars);
    f.den().collect_vars(vars);
    const JetPoly& n = f.num();
    const JetPoly& d = f.den();
    bool simple = poly_is_one(d);
    JetExpr acc;
    for (int v : vars) {
        JetPoly nv = n.derivative(v);
        JetExpr partial;
        if (simple) {
            if (nv.is_zero()) continue;
            partial = JetExpr::from_num_den(std::move(nv), JetPoly(Scalar(1)));
        } else {
            JetPoly dv = d.derivative(v);
            if (nv.is_zero() && dv.is_zero()) continue;
            partial = JetExpr::from_num_den(nv * d - n * dv, d * d);
        }
        acc += partial * dg.get(v);
    }
    return acc;
}

}  // namespace

JetExpr frechet(const JetExpr& f, const std::vector<JetExpr>& g) {
    DirectionCache dg(g);
    return frechet_with_cache(f, dg);
}

std::vector<JetExpr> frechet(const std::vector<JetExpr>& f, const std::vector<JetExpr>& g) {
    DirectionCache dg(g);
    std::vector<JetExpr> r;
    r.reserve(f.size());
    for (const auto& fi : f) r.push_back(frechet_with_cache(fi, dg));
    return r;
}

JetExpr second_directional(const JetExpr& f, const std::vector<JetExpr>& g) {
    DirectionCache dg(g);
    JetExpr first = frechet_with_cache(f, dg);
    return frechet_with_cache(first, dg);
}

std::vector<JetExpr> second_directional(const std::vector<JetExpr>& f,
                                        const std::vector<JetExpr>& g) {
    DirectionCache dg(g);
    std::vector<JetExpr> r;
    r.reserve(f.size());
    for (const auto& fi : f) {
        JetExpr first = frechet_with_cache(fi, dg);
        r.push_back(frechet_with_cache(first, dg));
    }
    return r;
}

std::vector<JetExpr> apply_operator(const OperatorMatrix& op, const std::vector<JetExpr>& v) {
    if (static_cast<int>(v.size()) != op.cols())
        throw std::invalid_argument("apply_operator: vector length does not match columns");
    std::map<int, std::map<Mono, JetExpr, MonoLess>> cache;

    // Iterated derivative of component j, derived from the cached parent with
    // one axis power stripped.
    auto dm = [&](auto&& self, int j, const Mono& m) -> const JetExpr& {
        auto& per = cache[j];
        auto it = per.find(m);
        if (it != per.end()) return it->second;
        JetExpr value;
        if (m.is_one()) {
            value = v[j];
        } else {
            int axis = m.factors().front().first;
            Mono parent = m.reduce(axis);
            value = total_derivative(self(self, j, parent), axis);
        }
        return per.emplace(m, std::move(value)).first->second;
    };

    std::vector<JetExpr> out(op.rows());
    for (int i = 0; i < op.rows(); ++i) {
        JetExpr acc;
        for (int j = 0; j < op.cols(); ++j) {
            const DiffOp& e = op.at(i, j);
            if (e.is_zero()) continue;
            for (const auto& t : e.poly().terms()) acc += dm(dm, j, t.m).scaled(t.c);
        }
        out[i] = std::move(acc);
    }
    return out;
}

namespace {

JetExpr eval_poly_with_replacement(const JetPoly& p, const std::map<int, JetExpr>& repl) {
    JetExpr acc;
    for (const auto& t : p.terms()) {
        JetExpr term(Scalar(1));
        for (auto& [v, e] : t.m.factors()) {
            auto it = repl.find(v);
            JetExpr base = it != repl.end() ? it->second : JetExpr::var(v);
            term = term * base.pow(e);
        }
        acc += term.scaled(t.c);
    }
    return acc;
}

}  // namespace

JetExpr substitute_field(const JetExpr& e, int field, const JetExpr& repl) {
    std::set<int> vars;
    e.num().collect_vars(vars);
    e.den().collect_vars(vars);
    std::map<int, JetExpr> map;
    for (int v : vars) {
        const JetVarKey& key = jetvar_key(v);
        if (key.field != field) continue;
        // Derivatives of the field are replaced by derivatives of the
        // replacement, so the substitution commutes with differentiation.
        std::vector<Mono::Factor> f;
        for (std::size_t a = 0; a < key.mu.size(); ++a)
            if (key.mu[a] > 0) f.emplace_back(static_cast<int>(a), key.mu[a]);
        map.emplace(v, derive_mono(repl, Mono::from_factors(std::move(f))));
    }
    if (map.empty()) return e;
    JetExpr n = eval_poly_with_replacement(e.num(), map);
    JetExpr d = eval_poly_with_replacement(e.den(), map);
    return n / d;
}

JetExpr substitute_param(const JetExpr& e, int param, const Scalar& value) {
    auto map_poly = [&](const JetPoly& p) {
        std::vector<JetPoly::Term> raw;
        for (const auto& t : p.terms()) raw.push_back({t.m, t.c.substitute(param, value)});
        return JetPoly::from_terms(std::move(raw));
    };
    return JetExpr::from_num_den(map_poly(e.num()), map_poly(e.den()));
}

int mono_jet_order(const Mono& m) {
    int o = 0;
    for (auto& [v, e] : m.factors()) o += jetvar_order(v) * e;
    return o;
}

bool is_homogeneous(const JetExpr& e, int order) {
    for (const auto& t : e.num().terms())
        if (mono_jet_order(t.m) != order) return false;
    return true;
}

namespace {

std::string jetvar_display(int id, const std::vector<std::string>& names, bool latex) {
    const JetVarKey& key = jetvar_key(id);
    std::string base = key.field < static_cast<int>(names.size())
                           ? names[key.field]
                           : "w" + std::to_string(key.field);
    int dim = static_cast<int>(key.mu.size());
    std::string letters;
    for (int a = 0; a < dim; ++a)
        for (int i = 0; i < key.mu[a]; ++i) letters += axis_name(a, dim);
    if (latex) {
        std::string b = latex_symbol(base);
        if (letters.empty()) return b;
        return "\\partial_{" + letters + "} " + b;
    }
    if (letters.empty()) return base;
    return "d" + letters + "(" + base + ")";
}

std::string jetpoly_render(const JetPoly& p, const std::vector<std::string>& names, bool latex) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms()) {
        Scalar c = t.c;
        bool neg = c.leading_negative();
        if (neg) c = -c;
        if (!first) os << (neg ? " - " : " + ");
        else if (neg) os << "-";
        first = false;

        bool unit = c.is_one();
        if (t.m.is_one()) {
            os << (latex ? c.latex() : c.str());
            continue;
        }
        if (!unit) {
            std::string cs = latex ? c.latex() : c.str();
            if (!c.is_single_product() && !latex) cs = "(" + cs + ")";
            os << cs << (latex ? " \\, " : "*");
        }
        bool firstv = true;
        for (auto& [v, e] : t.m.factors()) {
            if (!firstv) os << (latex ? " \\, " : "*");
            firstv = false;
            std::string vs = jetvar_display(v, names, latex);
            if (e > 1) {
                if (latex)
                    os << "(" << vs << ")^{" << e << "}";
                else
                    os << vs << "^" << e;
            } else {
                os << vs;
            }
        }
    }
    return os.str();
}

}  // namespace

std::string jet_str(const JetExpr& e, const std::vector<std::string>& names) {
    bool triv = e.den().is_constant();
    std::string n = jetpoly_render(e.num(), names, false);
    if (triv) return n;
    return "(" + n + ")/(" + jetpoly_render(e.den(), names, false) + ")";
}

std::string jet_latex(const JetExpr& e, const std::vector<std::string>& names) {
    bool triv = e.den().is_constant();
    std::string n = jetpoly_render(e.num(), names, true);
    if (triv) return n;
    return "\\frac{" + n + "}{" + jetpoly_render(e.den(), names, true) + "}";
}

std::vector<JetExpr> jets_add(const std::vector<JetExpr>& a, const std::vector<JetExpr>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("jet vector size mismatch");
    std::vector<JetExpr> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

std::vector<JetExpr> jets_sub(const std::vector<JetExpr>& a, const std::vector<JetExpr>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("jet vector size mismatch");
    std::vector<JetExpr> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

std::vector<JetExpr> jets_scale(const std::vector<JetExpr>& a, const Scalar& c) {
    std::vector<JetExpr> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].scaled(c);
    return r;
}

std::vector<JetExpr> jets_diag(const std::vector<Scalar>& d, const std::vector<JetExpr>& a) {
    if (a.size() != d.size()) throw std::invalid_argument("jet vector size mismatch");
    std::vector<JetExpr> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].scaled(d[i]);
    return r;
}

}  // namespace lbeq

#include "lbeq/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lbeq {

using nlohmann::ordered_json;

std::string format_name(ReportFormat f) {
    switch (f) {
        case ReportFormat::text: return "text";
        case ReportFormat::latex: return "latex";
        case ReportFormat::tree: return "tree";
    }
    throw std::logic_error("unreachable");
}

ReportFormat parse_format(const std::string& name) {
    if (name == "text") return ReportFormat::text;
    if (name == "latex") return ReportFormat::latex;
    if (name == "tree") return ReportFormat::tree;
    throw std::invalid_argument("unknown format '" + name + "' (expected text, latex or tree)");
}

namespace {

// ------------------------------------------------------------------ text

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i];
    }
    return out;
}

void render_jet_block(std::ostream& os, const std::string& label,
                      const std::vector<JetExpr>& comps,
                      const std::vector<std::string>& comp_names,
                      const std::vector<std::string>& field_names) {
    os << label << ":\n";
    for (size_t i = 0; i < comps.size(); ++i)
        os << "  " << comp_names[i] << ": " << jet_str(comps[i], field_names) << "\n";
}

void render_op_block(std::ostream& os, const std::string& label, const OperatorMatrix& m,
                     const std::vector<std::string>& row_names,
                     const std::vector<std::string>& col_names) {
    os << label << ":\n";
    bool any = false;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (m.at(i, j).is_zero()) continue;
            os << "  [" << row_names[i] << ", " << col_names[j]
               << "]: " << m.at(i, j).str() << "\n";
            any = true;
        }
    if (!any) os << "  (zero)\n";
}

std::string render_text(const Expansion& e) {
    std::ostringstream os;
    os << "scheme: " << e.scheme << "\n";
    os << "engine: " << engine_name(e.engine) << "\n";
    os << "order: " << e.order << "\n";
    os << "conserved fields: " << join(e.field_names, ", ") << "\n";
    os << "relaxed moments: " << join(e.defect_names, ", ") << "\n";
    os << "\n";
    os << "equivalent system: d_t W";
    for (int j = 1; j <= e.order; ++j) {
        os << " + ";
        if (j == 2) os << "dt ";
        if (j > 2) os << "dt^" << j - 1 << " ";
        os << "Gamma_" << j;
    }
    os << " = O(dt^" << e.order << ")\n";

    for (size_t j = 0; j < e.gamma.size(); ++j) {
        os << "\n";
        render_jet_block(os, "Gamma_" + std::to_string(j + 1), e.gamma[j], e.field_names,
                         e.field_names);
    }
    for (size_t j = 0; j < e.psi.size(); ++j) {
        os << "\n";
        render_jet_block(os, "Psi_" + std::to_string(j + 1), e.psi[j], e.defect_names,
                         e.field_names);
    }
    for (size_t j = 0; j < e.alpha.size(); ++j) {
        os << "\n";
        render_op_block(os, "alpha_" + std::to_string(j + 1), e.alpha[j], e.field_names,
                        e.field_names);
    }
    for (size_t j = 0; j < e.beta.size(); ++j) {
        os << "\n";
        render_op_block(os, "beta_" + std::to_string(j + 1), e.beta[j], e.defect_names,
                        e.field_names);
    }
    return os.str();
}

// ----------------------------------------------------------------- latex

std::string render_latex(const Expansion& e) {
    std::ostringstream os;
    os << "% scheme " << e.scheme << ", engine " << engine_name(e.engine) << ", order "
       << e.order << "\n";
    os << "\\partial_t W";
    for (int j = 1; j <= e.order; ++j) {
        os << " + ";
        if (j > 1) os << "\\Delta t";
        if (j > 2) os << "^{" << j - 1 << "}";
        if (j > 1) os << " \\, ";
        os << "\\Gamma_{" << j << "}";
    }
    os << " = O(\\Delta t^{" << e.order << "})\n";

    auto block = [&](const std::string& sym, size_t j, const std::vector<JetExpr>& comps,
                     const std::vector<std::string>& comp_names) {
        for (size_t i = 0; i < comps.size(); ++i)
            os << sym << "_{" << j + 1 << "}[" << latex_symbol(comp_names[i])
               << "] = " << jet_latex(comps[i], e.field_names) << " \\\\\n";
    };
    for (size_t j = 0; j < e.gamma.size(); ++j) block("\\Gamma", j, e.gamma[j], e.field_names);
    for (size_t j = 0; j < e.psi.size(); ++j) block("\\Psi", j, e.psi[j], e.defect_names);

    auto matrix = [&](const std::string& sym, size_t j, const OperatorMatrix& m) {
        os << sym << "_{" << j + 1 << "} = \\begin{pmatrix}\n";
        for (int r = 0; r < m.rows(); ++r) {
            for (int c = 0; c < m.cols(); ++c) {
                if (c) os << " & ";
                os << m.at(r, c).latex();
            }
            os << " \\\\\n";
        }
        os << "\\end{pmatrix}\n";
    };
    for (size_t j = 0; j < e.alpha.size(); ++j) matrix("\\alpha", j, e.alpha[j]);
    for (size_t j = 0; j < e.beta.size(); ++j) matrix("\\beta", j, e.beta[j]);
    return os.str();
}

// ------------------------------------------------------------------ tree

ordered_json int_poly_to_json(const Poly<Int>& p) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : p.terms()) {
        ordered_json factors = ordered_json::array();
        for (const auto& [v, e] : t.m.factors())
            factors.push_back(ordered_json::array({param_name(v), e}));
        terms.push_back({{"c", t.c.str()}, {"m", std::move(factors)}});
    }
    return terms;
}

ordered_json scalar_to_json(const Scalar& s) {
    return {{"n", int_poly_to_json(s.num())}, {"d", int_poly_to_json(s.den())}};
}

ordered_json jet_poly_to_json(const JetPoly& p) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : p.terms()) {
        ordered_json factors = ordered_json::array();
        for (const auto& [v, e] : t.m.factors()) {
            const JetVarKey& k = jetvar_key(v);
            factors.push_back({{"f", k.field}, {"mu", k.mu}, {"e", e}});
        }
        terms.push_back({{"c", scalar_to_json(t.c)}, {"m", std::move(factors)}});
    }
    return terms;
}

ordered_json jet_to_json(const JetExpr& e) {
    return {{"num", jet_poly_to_json(e.num())}, {"den", jet_poly_to_json(e.den())}};
}

ordered_json op_to_json(const OperatorMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) {
            ordered_json terms = ordered_json::array();
            for (const auto& t : m.at(i, j).poly().terms()) {
                ordered_json factors = ordered_json::array();
                for (const auto& [axis, e] : t.m.factors())
                    factors.push_back(ordered_json::array({axis, e}));
                terms.push_back({{"c", scalar_to_json(t.c)}, {"m", std::move(factors)}});
            }
            row.push_back(std::move(terms));
        }
        rows.push_back(std::move(row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

std::string render_tree(const Expansion& e) {
    ordered_json j;
    j["kind"] = "expansion";
    j["engine"] = engine_name(e.engine);
    j["scheme"] = e.scheme;
    j["order"] = e.order;
    j["dim"] = e.dim;
    j["fields"] = e.field_names;
    j["defects"] = e.defect_names;
    auto jets2 = [](const std::vector<std::vector<JetExpr>>& vv) {
        ordered_json out = ordered_json::array();
        for (const auto& v : vv) {
            ordered_json row = ordered_json::array();
            for (const JetExpr& x : v) row.push_back(jet_to_json(x));
            out.push_back(std::move(row));
        }
        return out;
    };
    j["gamma"] = jets2(e.gamma);
    j["psi"] = jets2(e.psi);
    if (!e.alpha.empty()) {
        ordered_json a = ordered_json::array(), b = ordered_json::array();
        for (const auto& m : e.alpha) a.push_back(op_to_json(m));
        for (const auto& m : e.beta) b.push_back(op_to_json(m));
        j["alpha"] = std::move(a);
        j["beta"] = std::move(b);
    }
    return j.dump(2) + "\n";
}

Poly<Int> int_poly_from_json(const ordered_json& terms) {
    std::vector<Poly<Int>::Term> raw;
    for (const auto& t : terms) {
        std::vector<Mono::Factor> factors;
        for (const auto& f : t.at("m"))
            factors.emplace_back(param_intern(f.at(0).get<std::string>()), f.at(1).get<int>());
        std::sort(factors.begin(), factors.end());
        raw.push_back({Mono::from_factors(std::move(factors)), Int(t.at("c").get<std::string>())});
    }
    return Poly<Int>::from_terms(std::move(raw));
}

Scalar scalar_from_json(const ordered_json& j) {
    return Scalar::from_num_den(int_poly_from_json(j.at("n")), int_poly_from_json(j.at("d")));
}

JetPoly jet_poly_from_json(const ordered_json& terms) {
    std::vector<JetPoly::Term> raw;
    for (const auto& t : terms) {
        std::vector<Mono::Factor> factors;
        for (const auto& f : t.at("m")) {
            int id = jetvar_intern(f.at("f").get<int>(), f.at("mu").get<std::vector<int>>());
            factors.emplace_back(id, f.at("e").get<int>());
        }
        std::sort(factors.begin(), factors.end());
        raw.push_back({Mono::from_factors(std::move(factors)), scalar_from_json(t.at("c"))});
    }
    return JetPoly::from_terms(std::move(raw));
}

JetExpr jet_from_json(const ordered_json& j) {
    return JetExpr::from_num_den(jet_poly_from_json(j.at("num")),
                                 jet_poly_from_json(j.at("den")));
}

OperatorMatrix op_from_json(const ordered_json& j, int dim) {
    OperatorMatrix m(j.at("rows").get<int>(), j.at("cols").get<int>(), dim);
    const auto& rows = j.at("entries");
    for (int i = 0; i < m.rows(); ++i)
        for (int k = 0; k < m.cols(); ++k) {
            std::vector<Poly<Scalar>::Term> raw;
            for (const auto& t : rows.at(i).at(k)) {
                std::vector<Mono::Factor> factors;
                for (const auto& f : t.at("m"))
                    factors.emplace_back(f.at(0).get<int>(), f.at(1).get<int>());
                std::sort(factors.begin(), factors.end());
                raw.push_back({Mono::from_factors(std::move(factors)),
                               scalar_from_json(t.at("c"))});
            }
            m.at(i, k) = DiffOp(dim, Poly<Scalar>::from_terms(std::move(raw)));
        }
    return m;
}

}  // namespace

std::string render_report(const Expansion& e, ReportFormat f) {
    switch (f) {
        case ReportFormat::text: return render_text(e);
        case ReportFormat::latex: return render_latex(e);
        case ReportFormat::tree: return render_tree(e);
    }
    throw std::logic_error("unreachable");
}

Expansion parse_tree_report(const std::string& text) {
    try {
        ordered_json j = ordered_json::parse(text);
        if (j.at("kind").get<std::string>() != "expansion")
            throw std::invalid_argument("not an expansion tree");
        Expansion e;
        e.engine = parse_engine(j.at("engine").get<std::string>());
        e.scheme = j.at("scheme").get<std::string>();
        e.order = j.at("order").get<int>();
        e.dim = j.at("dim").get<int>();
        e.field_names = j.at("fields").get<std::vector<std::string>>();
        e.defect_names = j.at("defects").get<std::vector<std::string>>();
        for (const auto& row : j.at("gamma")) {
            std::vector<JetExpr> v;
            for (const auto& x : row) v.push_back(jet_from_json(x));
            e.gamma.push_back(std::move(v));
        }
        for (const auto& row : j.at("psi")) {
            std::vector<JetExpr> v;
            for (const auto& x : row) v.push_back(jet_from_json(x));
            e.psi.push_back(std::move(v));
        }
        if (j.contains("alpha")) {
            for (const auto& m : j.at("alpha")) e.alpha.push_back(op_from_json(m, e.dim));
            for (const auto& m : j.at("beta")) e.beta.push_back(op_from_json(m, e.dim));
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("malformed expansion tree: ") + ex.what());
    }
}

}  // namespace lbeq

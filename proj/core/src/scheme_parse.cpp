#include "lbeq/scheme_parse.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace lbeq {

namespace {

std::string format_pos(const std::string& path, int line, int col, const std::string& msg) {
    std::ostringstream os;
    os << path;
    if (line > 0) os << ":" << line << ":" << col;
    os << ": " << msg;
    return os.str();
}

}  // namespace

ParseError::ParseError(std::string path_, int line_, int col_, const std::string& msg)
    : std::runtime_error(format_pos(path_, line_, col_, msg)),
      path(std::move(path_)),
      line(line_),
      col(col_) {}

namespace {

// ---------------------------------------------------------------- expressions

struct Token {
    enum Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
    Kind kind = end;
    std::string text;
    int col = 0;  // 1-based within the current line
};

class ExprParser {
public:
    ExprParser(const std::string& text, const std::vector<std::string>& fields, int dim,
               const std::string& path, int line, int col0)
        : fields_(fields), dim_(dim), path_(path), line_(line) {
        lex(text, col0);
    }

    JetExpr run() {
        JetExpr e = parse_sum();
        expect(Token::end, "unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(int col, const std::string& msg) const {
        throw ParseError(path_, line_, col, msg);
    }

    void lex(const std::string& s, int col0) {
        size_t i = 0;
        while (i < s.size()) {
            char c = s[i];
            int col = col0 + (int)i + 1;
            if (std::isspace((unsigned char)c)) {
                ++i;
                continue;
            }
            if (std::isdigit((unsigned char)c)) {
                size_t j = i;
                while (j < s.size() &&
                       (std::isdigit((unsigned char)s[j]) || s[j] == '.'))
                    ++j;
                toks_.push_back({Token::number, s.substr(i, j - i), col});
                i = j;
                continue;
            }
            if (std::isalpha((unsigned char)c) || c == '_') {
                size_t j = i;
                while (j < s.size() &&
                       (std::isalnum((unsigned char)s[j]) || s[j] == '_'))
                    ++j;
                toks_.push_back({Token::ident, s.substr(i, j - i), col});
                i = j;
                continue;
            }
            Token::Kind k;
            switch (c) {
                case '+': k = Token::plus; break;
                case '-': k = Token::minus; break;
                case '*': k = Token::star; break;
                case '/': k = Token::slash; break;
                case '^': k = Token::caret; break;
                case '(': k = Token::lparen; break;
                case ')': k = Token::rparen; break;
                default:
                    fail(col, std::string("unexpected character '") + c + "'");
            }
            toks_.push_back({k, std::string(1, c), col});
            ++i;
        }
        toks_.push_back({Token::end, "", col0 + (int)s.size() + 1});
    }

    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }

    void expect(Token::Kind k, const std::string& what) {
        if (peek().kind != k) fail(peek().col, what);
        ++pos_;
    }

    JetExpr parse_sum() {
        JetExpr e = parse_product();
        while (peek().kind == Token::plus || peek().kind == Token::minus) {
            Token op = take();
            JetExpr r = parse_product();
            e = op.kind == Token::plus ? e + r : e - r;
        }
        return e;
    }

    JetExpr parse_product() {
        JetExpr e = parse_unary();
        while (peek().kind == Token::star || peek().kind == Token::slash) {
            Token op = take();
            JetExpr r = parse_unary();
            if (op.kind == Token::star) {
                e = e * r;
            } else {
                if (r.is_zero()) fail(op.col, "division by zero");
                try {
                    e = e / r;
                } catch (const std::exception& ex) {
                    fail(op.col, ex.what());
                }
            }
        }
        return e;
    }

    JetExpr parse_unary() {
        if (peek().kind == Token::minus) {
            take();
            return -parse_unary();
        }
        return parse_power();
    }

    JetExpr parse_power() {
        JetExpr base = parse_atom();
        if (peek().kind != Token::caret) return base;
        take();
        bool neg = false;
        if (peek().kind == Token::minus) {
            take();
            neg = true;
        }
        Token t = peek();
        if (t.kind != Token::number || t.text.find('.') != std::string::npos)
            fail(t.col, "exponent must be an integer");
        take();
        int e;
        try {
            e = std::stoi(t.text);
        } catch (const std::exception&) {
            fail(t.col, "exponent out of range");
        }
        if (neg && base.is_zero()) fail(t.col, "division by zero");
        try {
            return base.pow(neg ? -e : e);
        } catch (const std::exception& ex) {
            fail(t.col, ex.what());
        }
    }

    JetExpr parse_atom() {
        Token t = peek();
        switch (t.kind) {
            case Token::number: {
                take();
                try {
                    return JetExpr(Scalar(parse_rational(t.text)));
                } catch (const std::exception&) {
                    fail(t.col, "malformed number '" + t.text + "'");
                }
            }
            case Token::ident: {
                take();
                auto it = std::find(fields_.begin(), fields_.end(), t.text);
                if (it != fields_.end())
                    return JetExpr::field((int)(it - fields_.begin()), dim_);
                return JetExpr(Scalar::param(t.text));
            }
            case Token::lparen: {
                take();
                JetExpr e = parse_sum();
                expect(Token::rparen, "expected ')'");
                return e;
            }
            case Token::end:
                fail(t.col, "unexpected end of expression");
            default:
                fail(t.col, "expected a value, got '" + t.text + "'");
        }
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    const std::vector<std::string>& fields_;
    int dim_;
    std::string path_;
    int line_;
};

// -------------------------------------------------------------- line scanning

std::string strip_comment(const std::string& line) {
    auto h = line.find('#');
    return h == std::string::npos ? line : line.substr(0, h);
}

// Returns the trimmed text plus the 1-based column of its first character.
std::pair<std::string, int> trim(const std::string& s, int col0 = 0) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace((unsigned char)s[b])) ++b;
    while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
    return {s.substr(b, e - b), col0 + (int)b + 1};
}

std::vector<std::pair<std::string, int>> split_tokens(const std::string& s, int col0) {
    std::vector<std::pair<std::string, int>> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
        if (i >= s.size()) break;
        size_t j = i;
        while (j < s.size() && !std::isspace((unsigned char)s[j])) ++j;
        out.push_back({s.substr(i, j - i), col0 + (int)i + 1});
        i = j;
    }
    return out;
}

struct SchemeBuilder {
    std::string path;
    SchemeSpec spec;

    std::optional<int> dimension;
    bool have_velocities = false;
    std::optional<int> conserved;
    std::vector<std::string> names;
    std::map<std::string, std::vector<Scalar>> matrix_rows;
    std::map<std::string, std::pair<RelaxRule, int>> relax_rows;  // rule + line
    std::optional<bool> linear_kind;
    std::map<std::string, std::pair<JetExpr, int>> eq_rows;
    std::map<std::string, std::pair<std::vector<Scalar>, int>> eq_linear_rows;

    [[noreturn]] void fail(int line, int col, const std::string& msg) const {
        throw ParseError(path, line, col, msg);
    }

    int parse_int(const std::string& v, int line, int col, int lo, int hi,
                  const std::string& what) const {
        try {
            size_t used = 0;
            int x = std::stoi(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            if (x < lo || x > hi) fail(line, col, what + " must be between " +
                                                      std::to_string(lo) + " and " +
                                                      std::to_string(hi));
            return x;
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            fail(line, col, "expected an integer for " + what);
        }
    }

    void parse_velocities(const std::string& v, int line, int col0) {
        if (!dimension) fail(line, col0 + 1, "set dimension before velocities");
        size_t i = 0;
        auto cur_col = [&] { return col0 + (int)i + 1; };
        auto skip_ws = [&] {
            while (i < v.size() && std::isspace((unsigned char)v[i])) ++i;
        };
        skip_ws();
        while (i < v.size()) {
            int start_col = cur_col();
            if (v[i] != '(') fail(line, start_col, "expected '(' starting a velocity");
            ++i;
            std::vector<int> offs;
            while (true) {
                skip_ws();
                size_t j = i;
                if (j < v.size() && (v[j] == '-' || v[j] == '+')) ++j;
                while (j < v.size() && std::isdigit((unsigned char)v[j])) ++j;
                if (j == i) fail(line, cur_col(), "expected an integer offset");
                offs.push_back(std::stoi(v.substr(i, j - i)));
                i = j;
                skip_ws();
                if (i < v.size() && v[i] == ',') {
                    ++i;
                    continue;
                }
                break;
            }
            if (i >= v.size() || v[i] != ')')
                fail(line, cur_col(), "expected ')' closing a velocity");
            ++i;
            if ((int)offs.size() != *dimension)
                fail(line, start_col,
                     "velocity has " + std::to_string(offs.size()) + " components, expected " +
                         std::to_string(*dimension));
            spec.stencil.push_back(std::move(offs));
            skip_ws();
        }
        if (spec.stencil.empty()) fail(line, col0 + 1, "empty velocity list");
        have_velocities = true;
    }

    RelaxRule parse_relax_rule(const std::string& v, int line, int col) const {
        auto colon = v.find(':');
        if (colon == std::string::npos)
            fail(line, col, "expected 's:<rate>' or 'sigma:<name>'");
        std::string head = v.substr(0, colon), rest = v.substr(colon + 1);
        if (rest.empty()) fail(line, col + (int)colon + 1, "missing value after ':'");
        int rest_col = col + (int)colon + 1;
        if (head == "s") {
            if (std::isdigit((unsigned char)rest[0])) {
                try {
                    return RelaxRule::rate(parse_rational(rest));
                } catch (const std::exception&) {
                    fail(line, rest_col, "malformed rate '" + rest + "'");
                }
            }
            return RelaxRule::rate_param(rest);
        }
        if (head == "sigma") {
            if (std::isdigit((unsigned char)rest[0]))
                fail(line, rest_col, "sigma rules take a symbol name");
            return RelaxRule::sigma_param(rest);
        }
        fail(line, col, "unknown relaxation form '" + head + "'");
    }

    int name_index(const std::string& n) const {
        auto it = std::find(names.begin(), names.end(), n);
        return it == names.end() ? -1 : (int)(it - names.begin());
    }

    std::vector<std::string> field_names() const {
        if (!conserved) return {};
        return std::vector<std::string>(names.begin(), names.begin() + *conserved);
    }

    SchemeSpec finish() {
        auto missing = [&](const std::string& what) {
            throw ParseError(path, 0, 0, "missing " + what);
        };
        if (!dimension) missing("dimension");
        if (!have_velocities) missing("velocities");
        if (names.empty()) missing("moment names");
        if (!conserved) missing("conserved count");
        if (spec.lambda_param < 0) missing("scale symbol");
        if (!linear_kind) missing("[equilibrium] section with kind");

        spec.d = *dimension;
        spec.q = (int)spec.stencil.size();
        spec.N = *conserved;
        if ((int)names.size() != spec.q)
            throw ParseError(path, 0, 0,
                             "got " + std::to_string(names.size()) + " moment names for " +
                                 std::to_string(spec.q) + " velocities");
        if (spec.N < 1 || spec.N >= spec.q)
            throw ParseError(path, 0, 0, "conserved count out of range");
        spec.moment_names = names;

        spec.moment_matrix.assign(spec.q, {});
        for (int i = 0; i < spec.q; ++i) {
            auto it = matrix_rows.find(names[i]);
            if (it == matrix_rows.end()) missing("matrix row for '" + names[i] + "'");
            spec.moment_matrix[i] = it->second;
        }

        spec.relax.clear();
        for (int i = spec.N; i < spec.q; ++i) {
            auto it = relax_rows.find(names[i]);
            if (it == relax_rows.end()) missing("relaxation rule for '" + names[i] + "'");
            spec.relax.push_back(it->second.first);
        }
        for (const auto& [n, r] : relax_rows)
            if (name_index(n) < spec.N)
                fail(r.second, 1, "conserved moment '" + n + "' cannot relax");

        spec.linear_equilibrium = *linear_kind;
        if (spec.linear_equilibrium) {
            for (int i = spec.N; i < spec.q; ++i) {
                auto it = eq_linear_rows.find(names[i]);
                if (it == eq_linear_rows.end()) missing("equilibrium row for '" + names[i] + "'");
                if ((int)it->second.first.size() != spec.N)
                    fail(it->second.second, 1,
                         "equilibrium row for '" + names[i] + "' needs " +
                             std::to_string(spec.N) + " entries");
                spec.E.push_back(it->second.first);
            }
        } else {
            for (int i = spec.N; i < spec.q; ++i) {
                auto it = eq_rows.find(names[i]);
                if (it == eq_rows.end()) missing("equilibrium for '" + names[i] + "'");
                spec.equilibrium.push_back(it->second.first);
            }
        }
        for (const auto& [n, r] : eq_rows)
            if (name_index(n) < spec.N)
                fail(r.second, 1, "conserved moment '" + n + "' takes no equilibrium");
        for (const auto& [n, r] : eq_linear_rows)
            if (name_index(n) < spec.N)
                fail(r.second, 1, "conserved moment '" + n + "' takes no equilibrium");
        return spec;
    }
};

}  // namespace

SchemeSpec parse_scheme_text(const std::string& text, const std::string& path) {
    SchemeBuilder b;
    b.path = path;

    enum class Section { none, lattice, moments, relaxation, equilibrium };
    Section section = Section::none;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto [line, col] = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') b.fail(line_no, col, "unterminated section header");
            std::string name = line.substr(1, line.size() - 2);
            if (name == "lattice") section = Section::lattice;
            else if (name == "moments") section = Section::moments;
            else if (name == "relaxation") section = Section::relaxation;
            else if (name == "equilibrium") section = Section::equilibrium;
            else b.fail(line_no, col, "unknown section [" + name + "]");
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos) b.fail(line_no, col, "expected 'key = value'");
        auto [key, key_col] = trim(line.substr(0, eq), col - 1);
        auto [value, value_col] = trim(line.substr(eq + 1), col - 1 + (int)eq + 1);
        if (key.empty()) b.fail(line_no, col, "empty key");
        if (value.empty()) b.fail(line_no, col + (int)eq + 1, "empty value");

        switch (section) {
            case Section::none:
                b.fail(line_no, key_col, "'" + key + "' appears before any section");
            case Section::lattice:
                if (key == "name") {
                    b.spec.name = value;
                } else if (key == "dimension") {
                    b.dimension = b.parse_int(value, line_no, value_col, 1, 3, "dimension");
                } else if (key == "velocities") {
                    b.parse_velocities(value, line_no, value_col - 1);
                } else {
                    b.fail(line_no, key_col, "unknown [lattice] key '" + key + "'");
                }
                break;
            case Section::moments:
                if (key == "scale") {
                    b.spec.lambda_param = param_intern(value);
                } else if (key == "conserved") {
                    b.conserved = b.parse_int(value, line_no, value_col, 1, 255, "conserved");
                } else if (key == "names") {
                    for (auto& [tok, tcol] : split_tokens(value, value_col - 1)) {
                        (void)tcol;
                        b.names.push_back(tok);
                    }
                } else if (key.rfind("matrix ", 0) == 0) {
                    auto [mname, mcol] = trim(key.substr(7), key_col - 1 + 7);
                    if (b.name_index(mname) < 0)
                        b.fail(line_no, mcol, "unknown moment '" + mname + "'");
                    std::vector<Scalar> row;
                    for (auto& [tok, tcol] : split_tokens(value, value_col - 1))
                        row.push_back(parse_scalar_expr(tok, b.path, line_no, tcol - 1));
                    if (b.have_velocities && row.size() != b.spec.stencil.size())
                        b.fail(line_no, value_col,
                               "matrix row has " + std::to_string(row.size()) +
                                   " entries, expected " + std::to_string(b.spec.stencil.size()));
                    b.matrix_rows[mname] = std::move(row);
                } else {
                    b.fail(line_no, key_col, "unknown [moments] key '" + key + "'");
                }
                break;
            case Section::relaxation: {
                if (b.name_index(key) < 0)
                    b.fail(line_no, key_col, "unknown moment '" + key + "'");
                b.relax_rows[key] = {b.parse_relax_rule(value, line_no, value_col), line_no};
                break;
            }
            case Section::equilibrium:
                if (key == "kind") {
                    if (value == "linear") b.linear_kind = true;
                    else if (value == "nonlinear") b.linear_kind = false;
                    else b.fail(line_no, value_col, "kind must be 'linear' or 'nonlinear'");
                } else {
                    if (b.name_index(key) < 0)
                        b.fail(line_no, key_col, "unknown moment '" + key + "'");
                    if (!b.linear_kind)
                        b.fail(line_no, key_col, "set kind before equilibrium rows");
                    if (!b.conserved)
                        b.fail(line_no, key_col, "set conserved before equilibrium rows");
                    if (*b.linear_kind) {
                        std::vector<Scalar> row;
                        for (auto& [tok, tcol] : split_tokens(value, value_col - 1))
                            row.push_back(
                                parse_scalar_expr(tok, b.path, line_no, tcol - 1));
                        b.eq_linear_rows[key] = {std::move(row), line_no};
                    } else {
                        b.eq_rows[key] = {
                            parse_jet_expr(value, b.field_names(),
                                           std::max(1, b.dimension.value_or(1)), b.path,
                                           line_no, value_col - 1),
                            line_no};
                    }
                }
                break;
        }
    }
    return b.finish();
}

SchemeSpec parse_scheme_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scheme_text(buf.str(), path);
}

JetExpr parse_jet_expr(const std::string& text, const std::vector<std::string>& field_names,
                       int dim, const std::string& path, int line, int col0) {
    return ExprParser(text, field_names, dim, path, line, col0).run();
}

Scalar parse_scalar_expr(const std::string& text, const std::string& path, int line,
                         int col0) {
    static const std::vector<std::string> no_fields;
    JetExpr e = ExprParser(text, no_fields, 1, path, line, col0).run();
    return e.scalar_value();
}

}  // namespace lbeq

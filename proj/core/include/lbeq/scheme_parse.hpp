// Text format for scheme descriptions, and the small expression language its
// values use.  See docs/scheme-format.md for the grammar; errors carry the
// file, line and column they point at.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lbeq/scheme.hpp"

namespace lbeq {

struct ParseError : std::runtime_error {
    ParseError(std::string path, int line, int col, const std::string& msg);

    std::string path;
    int line = 0;  // 1-based; 0 marks a whole-file problem
    int col = 0;
};

SchemeSpec parse_scheme_text(const std::string& text,
                             const std::string& path_for_errors = "<string>");
SchemeSpec parse_scheme_file(const std::string& path);

// Expression parsing, shared with the command line.  Identifiers listed in
// `field_names` become jet fields (by position); every other identifier is a
// scalar parameter.  `line`/`col0` seed error positions when the text is a
// fragment of a larger file.
JetExpr parse_jet_expr(const std::string& text, const std::vector<std::string>& field_names,
                       int dim, const std::string& path = "<expr>", int line = 1,
                       int col0 = 0);
Scalar parse_scalar_expr(const std::string& text, const std::string& path = "<expr>",
                         int line = 1, int col0 = 0);

}  // namespace lbeq

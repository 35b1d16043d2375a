// Rendering of expansions: plain text, LaTeX fragments following the usual
// operator notation, and a structured tree that round-trips exactly through
// its parser.
#pragma once

#include <string>

#include "lbeq/expand.hpp"

namespace lbeq {

enum class ReportFormat { text, latex, tree };

std::string format_name(ReportFormat f);
ReportFormat parse_format(const std::string& name);  // throws std::invalid_argument

std::string render_report(const Expansion& e, ReportFormat f);

// Inverse of render_report(…, tree); throws std::invalid_argument on
// malformed input.
Expansion parse_tree_report(const std::string& text);

}  // namespace lbeq

// Process-wide interning tables for the two kinds of symbols that appear in
// expressions: named scalar parameters (lambda, sigma_x, ...) and jet
// variables (a conserved field together with a spatial multi-index).
//
// Ids are dense ints handed out in registration order; all symbolic types
// store ids only and resolve names through these tables when printing.
#pragma once

#include <string>
#include <vector>

namespace lbeq {

// Scalar parameters ---------------------------------------------------------

int param_intern(const std::string& name);
int param_lookup(const std::string& name);  // -1 if not registered
const std::string& param_name(int id);
int param_count();

// Jet variables --------------------------------------------------------------

// field: index of a conserved moment, 0-based.
// mu: spatial multi-index, one entry per dimension; order is the sum.
struct JetVarKey {
    int field = 0;
    std::vector<int> mu;

    int order() const {
        int s = 0;
        for (int m : mu) s += m;
        return s;
    }
    bool operator==(const JetVarKey&) const = default;
};

int jetvar_intern(int field, const std::vector<int>& mu);
const JetVarKey& jetvar_key(int id);
int jetvar_order(int id);

}  // namespace lbeq

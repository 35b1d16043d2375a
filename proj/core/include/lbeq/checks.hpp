// Runtime cross-checks of the engines against hand-derived closed forms for
// the built-in schemes: the nine-velocity moment operator table, the Euler
// flux and Navier-Stokes viscous tensor hidden in its low-order terms, the
// third-order closed forms for advection-diffusion and fluid mass transport,
// and the identities relating the three engines.  The CLI exposes these as a
// pass/fail checklist; the test suite requires every one of them to hold.
#pragma once

#include <string>
#include <vector>

namespace lbeq {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // what was compared, or what disagreed
};

std::vector<CheckResult> check_operator_tables();    // compiled operators vs tabulated entries
std::vector<CheckResult> check_equilibria();         // nine-velocity equilibria and Euler flux
std::vector<CheckResult> check_viscous_form();       // Gamma_2 vs viscous stress + cubic residuals
std::vector<CheckResult> check_third_order_forms();  // scalar and fluid third-order closed forms
std::vector<CheckResult> check_engine_identities();  // cross-engine and defect identities

// All groups above, in that order.
std::vector<CheckResult> run_reference_checks();
bool all_pass(const std::vector<CheckResult>& results);

}  // namespace lbeq

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dicert/core.hpp"

namespace dicert {

// Conditional behavior P(ab|xy) of a two-party box, indexed like CountsTable.
struct BehaviorTable {
    std::array<double, 16> p{};

    double prob(int a, int b, int x, int y) const { return p[CountsTable::index(a, b, x, y)]; }
    double& prob(int a, int b, int x, int y) { return p[CountsTable::index(a, b, x, y)]; }

    // Normalization of the four conditional blocks and both marginal
    // stability conditions, within tol.
    bool is_normalized(double tol = 1e-12) const;
    bool is_no_signalling(double tol = 1e-12) const;
};

// CHSH value sum_{xy} (-1)^{xy} E(x,y) with E = P(a=b|xy) - P(a!=b|xy).
double chsh_value(const BehaviorTable& behavior);

// Maximum of the CHSH expression over its 8 sign symmetries (relabelings of
// inputs/outputs). 2 on every local deterministic vertex, 4 on every
// nonlocal extremal box.
double chsh_family_value(const BehaviorTable& behavior);

// The 24 extremal no-signalling behaviors for 2 inputs / 2 outputs:
// 16 local deterministic points followed by 8 nonlocal (PR-type) boxes.
std::vector<BehaviorTable> enumerate_vertices();

// Maximum of P(target | its inputs) over all no-signalling behaviors whose
// CHSH-family member aligned with the target cell equals i. Solved as an LP
// over mixtures of the 24 vertices; equals 3/2 - i/4 for 2 <= i <= 4.
struct Cell {
    int a = 0, b = 0, x = 0, y = 0;
};
double ns_max_prob(double i, const Cell& target);

// Two-sided Fisher exact test: sum of hypergeometric point probabilities at
// most the observed one (with 1e-7 relative tie slack). Degenerate margins
// give 1. table[r][c] layout is irrelevant to the p-value.
double fisher_exact_two_sided(const std::array<std::array<std::uint64_t, 2>, 2>& table);

// The four marginal-stability checks: distribution of a at fixed x across y,
// and of b at fixed y across x.
struct NsCheck {
    std::string label;
    double p_value = 1.0;
};
std::vector<NsCheck> check_no_signalling(const CountsTable& counts);

} // namespace dicert

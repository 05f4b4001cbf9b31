#pragma once

#include "dicert/core.hpp"

namespace dicert {

// CHSH estimate under the input law used to weight the trials.
struct ChshEstimate {
    double i_hat = 0.0;
    std::size_t n = 0;
    SettingsDistribution distribution = SettingsDistribution::uniform();
};

// I_hat = (1/n) sum_{x,y} (-1)^{xy} [N(a=b;xy) - N(a!=b;xy)] / P(xy).
ChshEstimate chsh_from_counts(const CountsTable& counts, const SettingsDistribution& dist);

// Per-trial increment (-1)^{xy} * sigma / P(x,y), sigma = +1 if a == b else -1.
// Its mean over a log equals chsh_from_counts on the aggregate.
double trial_increment(const TrialRecord& t, const SettingsDistribution& dist);

// Mean of trial_increment with compensated (Kahan) summation; exact agreement
// with the counts formula is a tested invariant.
ChshEstimate chsh_from_log(const TrialLog& log, const SettingsDistribution& dist);

// Empirical correlator E(x,y) = P(a=b|xy) - P(a!=b|xy).
std::array<double, 4> correlators(const CountsTable& counts);

} // namespace dicert

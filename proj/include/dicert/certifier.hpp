#pragma once

#include <string>
#include <vector>

#include "dicert/core.hpp"
#include "dicert/ns_polytope.hpp"

namespace dicert {

enum class Model { Quantum, NoSignalling };

// Model-dependent maximum of the CHSH expression: 2*sqrt(2) or 4.
double model_i_max(Model model);
std::string model_name(Model model);
Model model_from_name(const std::string& name);

// Everything needed to audit a min-entropy claim.
struct Certificate {
    double i_hat = 0.0;
    std::size_t n = 0;
    double q = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    Model model = Model::Quantum;
    double f_value = 0.0;          // certified bits per trial
    double min_entropy_bits = 0.0; // n * f_value
    double i_max = 0.0;
    SettingsDistribution input_distribution = SettingsDistribution::uniform();
};

// Azuma-Hoeffding deviation allowance: with probability >= 1 - delta the true
// value exceeds i_hat - epsilon. epsilon = (1/q + i_max) sqrt(2 ln(1/delta) / n).
double azuma_epsilon(std::size_t n, double q, double delta, double i_max);

// Certified min-entropy rate per trial as a function of the CHSH value.
// Quantum devices: 1 - log2(1 + sqrt(2 - i^2/4)) on (2, 2*sqrt(2)]; values up
// to 1e-9 above the quantum maximum are clamped, anything higher errors.
double f_quantum(double i);
// Devices constrained only by no-signalling: -log2(3/2 - i/4) on (2, 4].
double f_nosignalling(double i);

// Full pipeline: estimate, deviation allowance at the model's i_max, then
// n * f(clamp(i_hat - epsilon)). Never errors on a large violation: the
// argument of f is clamped to [2, i_max].
Certificate certify(const CountsTable& counts, const SettingsDistribution& dist, double delta,
                    Model model);

// Tail bound on any local (possibly memory-equipped) strategy reaching i_hat:
// min(1, exp(-n (i_hat - 2)^2 / 72)). The constant assumes uniform settings;
// a non-uniform q is rejected.
double local_pvalue(double i_hat, std::size_t n, double q = 0.25);

// Certificate JSON with fixed key order and >= 15 significant digits on every
// number; ns_checks appended when provided.
std::string certificate_to_json(const Certificate& cert, const std::vector<NsCheck>& ns_checks = {});

} // namespace dicert

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dicert/core.hpp"
#include "dicert/ns_polytope.hpp"

namespace dicert {

enum class DeviceKind { HonestQuantum, LocalDeterministic, MemoryLHV, PRBox };

// Behavioral description of a simulated pair of boxes.
//  - HonestQuantum: singlet-type correlations E(x,y) = -v cos(phi_a(x) +
//    phi_b(y) + chi) with uniform marginals; v in [0,1] is the only noise knob.
//  - LocalDeterministic: fixed output tables a(x), b(y).
//  - MemoryLHV: both sides replay the deterministic strategy that best fits
//    the completed rounds so far (cumulative CHSH increment, ties to the
//    lowest strategy index); within a round each side sees only its own input.
//  - PRBox: a uniform, a XOR b = xy.
struct DeviceModel {
    DeviceKind kind = DeviceKind::HonestQuantum;
    double visibility = 1.0;
    double chi = 1.5707963267948966; // radians
    std::array<double, 2> phi_a{0.0, 1.5707963267948966};
    std::array<double, 2> phi_b{0.7853981633974483, 2.356194490192345};
    std::array<int, 2> det_a{0, 0};
    std::array<int, 2> det_b{0, 0};
};

struct RunConfig {
    std::size_t n = 0;
    SettingsDistribution dist = SettingsDistribution::uniform();
    std::uint64_t rng_seed = 1;
    DeviceModel device;
};

// Single-trial behavior of the honest device; always normalized,
// no-signalling, with uniform single-party marginals.
BehaviorTable honest_behavior(double v, double chi, const std::array<double, 2>& phi_a,
                              const std::array<double, 2>& phi_b);

// n i.i.d. draws from the input law; deterministic for a fixed seed. Uses the
// settings stream derived from the seed (see rng.hpp).
std::vector<std::pair<int, int>> gen_settings(std::size_t n, const SettingsDistribution& dist,
                                              std::uint64_t rng_seed);

// Full run: draw settings, then outputs per the device model. Device-side
// randomness comes from the side-A/side-B streams, independent of the
// settings stream.
TrialLog run(const RunConfig& config);

// Same device dynamics on a caller-supplied settings sequence (the expansion
// protocol feeds seed-derived settings). dist is what MemoryLHV uses to weigh
// past rounds; it should match how the settings were drawn.
TrialLog run_with_settings(const DeviceModel& device, const std::vector<std::pair<int, int>>& settings,
                           const SettingsDistribution& dist, std::uint64_t rng_seed);

// Plain-text key=value config. Keys: device, n, visibility, chi_deg,
// phi_a0_deg, phi_a1_deg, phi_b0_deg, phi_b1_deg, input_dist, q, alpha,
// rng_seed. Angles are degrees in the file, radians in DeviceModel.
RunConfig parse_run_config(const std::string& path);
void write_run_config(const std::string& path, const RunConfig& config);

std::string device_kind_name(DeviceKind kind);
DeviceKind device_kind_from_name(const std::string& name);

} // namespace dicert

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dicert/bits.hpp"
#include "dicert/certifier.hpp"
#include "dicert/core.hpp"
#include "dicert/simulator.hpp"

namespace dicert {

// Sequential reader over a seed bit string; counts every bit handed out.
class BitSource {
public:
    explicit BitSource(BitString bits) : bits_(std::move(bits)) {}
    bool next();
    std::size_t consumed() const { return pos_; }
    std::size_t remaining() const { return bits_.size() - pos_; }
    // Hand out `count` bits as a block (for the extractor seed).
    BitString take(std::size_t count);

private:
    BitString bits_;
    std::size_t pos_ = 0;
};

// Exact sampler for the input law driven by an arithmetic decoder over the
// seed stream. Bits are read lazily: a bit is consumed only when the symbol
// is still ambiguous, so the uniform law costs exactly 2 bits per pair and a
// biased law stays within 0.01 of its Shannon entropy per pair, amortized.
class SettingsSampler {
public:
    explicit SettingsSampler(const SettingsDistribution& dist);
    std::pair<int, int> next(BitSource& src);

private:
    std::array<std::uint64_t, 5> cum_{}; // 32-bit fixed-point cumulative boundaries
    std::uint64_t low_ = 0, high_ = 1ULL << 32; // coder interval
    std::uint64_t a_ = 0, w_ = 1ULL << 32;      // value window [a, a+w)
};

// n draws plus the exact number of seed bits consumed.
std::pair<std::vector<std::pair<int, int>>, std::size_t>
sample_settings_accounted(std::size_t n, const SettingsDistribution& dist, BitSource& src);

// Shannon entropy of the input law, bits per trial.
double settings_entropy(const SettingsDistribution& dist);

// n * f_model(i_target - epsilon) - n * H(dist): certified output minus the
// settings-entropy cost. Positive means the run grows net randomness.
double net_entropy(std::size_t n, double i_target, const SettingsDistribution& dist, double delta,
                   Model model);

// Settings cost at q = 11/sqrt(n): t1 = n*H and its ratio to sqrt(n)*log2(sqrt(n)).
struct SeedScaling {
    double t1_bits = 0.0;
    double ratio = 0.0;
};
SeedScaling seed_scaling_check(std::size_t n);

struct SeedBudget {
    std::uint64_t t1_bits = 0;     // consumed generating settings
    std::uint64_t t2_bits = 0;     // extractor seed
    std::uint64_t output_bits = 0; // extracted length
    std::int64_t net_bits = 0;     // output_bits - t1_bits (t2 reusable)
};

enum class ExpansionStatus { Completed, CertificationFailed };

struct ExpansionReport {
    ExpansionStatus status = ExpansionStatus::CertificationFailed;
    Certificate certificate;
    SeedBudget budget;
    BitString extracted;
    double delta = 0.0;
    double eps_ext = 0.0;
    TrialLog log; // kept even on failure so the run can be audited
};

// The four protocol steps: settings from the seed (accounted), device run,
// certification, extraction sized by output_length. A certificate of zero
// bits is a structured CertificationFailed report, not an exception; a seed
// that runs dry is a SeedExhausted error.
ExpansionReport run_expansion(const DeviceModel& device, std::uint64_t device_seed, std::size_t n,
                              const SettingsDistribution& dist, double delta, double eps_ext,
                              BitSource& seed, Model model = Model::Quantum);

// Report JSON embedding the certificate; paths are recorded when given.
std::string expansion_report_to_json(const ExpansionReport& report,
                                     const std::string& extracted_path = "",
                                     const std::string& log_path = "");

} // namespace dicert

#include "dicert/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dicert/error.hpp"
#include "dicert/extractor.hpp"
#include "dicert/ns_polytope.hpp"

namespace dicert {

bool BitSource::next() {
    if (pos_ >= bits_.size()) fail(ErrorCode::SeedExhausted, "seed stream exhausted");
    return bits_.get(pos_++);
}

BitString BitSource::take(std::size_t count) {
    if (remaining() < count)
        fail(ErrorCode::SeedExhausted, "seed stream exhausted (need " + std::to_string(count) +
                                           " bits, have " + std::to_string(remaining()) + ")");
    BitString out(count);
    for (std::size_t i = 0; i < count; ++i)
        if (bits_.get(pos_++)) out.set(i, true);
    return out;
}

namespace {

constexpr std::uint64_t kOne = 1ULL << 32;
constexpr std::uint64_t kHalf = 1ULL << 31;
constexpr std::uint64_t kQuarter = 1ULL << 30;
// Nonzero probabilities below ~2^-28 would quantize to segments too narrow
// for the 32-bit coder to resolve reliably.
constexpr std::uint64_t kMinSegment = 16;

} // namespace

SettingsSampler::SettingsSampler(const SettingsDistribution& dist) {
    const auto& p = dist.probs();
    double acc = 0.0;
    cum_[0] = 0;
    for (int k = 0; k < 4; ++k) {
        acc += p[k];
        cum_[k + 1] = (k == 3) ? kOne : static_cast<std::uint64_t>(std::llround(acc * static_cast<double>(kOne)));
    }
    for (int k = 0; k < 4; ++k) {
        std::uint64_t width = cum_[k + 1] - cum_[k];
        if (cum_[k + 1] < cum_[k] || (p[k] > 0.0 && width < kMinSegment))
            fail(ErrorCode::DomainError,
                 "input-law probability too small for the 32-bit sampler (need >= 2^-28)");
        if (p[k] == 0.0 && width != 0)
            fail(ErrorCode::DomainError, "zero-probability input pair must quantize to an empty segment");
    }
}

std::pair<int, int> SettingsSampler::next(BitSource& src) {
    for (;;) {
        const std::uint64_t range = high_ - low_;
        // Segment k is [seg[k], seg[k+1]); cum_[4] = 2^32 would overflow the
        // product, so the top boundary is pinned to high_ directly.
        std::uint64_t seg[5];
        seg[0] = low_;
        for (int k = 1; k < 4; ++k)
            seg[k] = (cum_[k] == kOne) ? high_ : low_ + ((range * cum_[k]) >> 32);
        seg[4] = high_;
        int hit = -1;
        for (int k = 0; k < 4; ++k) {
            if (seg[k] <= a_ && a_ + w_ <= seg[k + 1]) {
                hit = k;
                break;
            }
        }
        if (hit < 0) {
            // Ambiguous: narrow the value window by one seed bit.
            w_ >>= 1;
            if (src.next()) a_ += w_;
            continue;
        }
        low_ = seg[hit];
        high_ = seg[hit + 1];
        // Renormalize: zoom into the half (or straddled quarter) the interval
        // has committed to. The value window follows the same affine maps.
        for (;;) {
            if (high_ <= kHalf) {
                // nothing to subtract
            } else if (low_ >= kHalf) {
                low_ -= kHalf;
                high_ -= kHalf;
                a_ -= kHalf;
            } else if (low_ >= kQuarter && high_ <= 3 * kQuarter) {
                low_ -= kQuarter;
                high_ -= kQuarter;
                a_ -= kQuarter;
            } else {
                break;
            }
            low_ <<= 1;
            high_ <<= 1;
            a_ <<= 1;
            w_ <<= 1;
        }
        return {hit >> 1, hit & 1};
    }
}

std::pair<std::vector<std::pair<int, int>>, std::size_t>
sample_settings_accounted(std::size_t n, const SettingsDistribution& dist, BitSource& src) {
    SettingsSampler sampler(dist);
    std::vector<std::pair<int, int>> out;
    out.reserve(n);
    std::size_t before = src.consumed();
    for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.next(src));
    return {std::move(out), src.consumed() - before};
}

double settings_entropy(const SettingsDistribution& dist) {
    double h = 0.0;
    for (double p : dist.probs())
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double net_entropy(std::size_t n, double i_target, const SettingsDistribution& dist, double delta,
                   Model model) {
    double i_max = model_i_max(model);
    if (!(i_target > 2.0) || !(i_target <= i_max + 1e-9))
        fail(ErrorCode::DomainError, "net_entropy expects a CHSH value in (2, i_max]");
    double eps = azuma_epsilon(n, dist.q(), delta, i_max);
    double arg = std::clamp(i_target - eps, 2.0, i_max);
    double f = (model == Model::Quantum) ? f_quantum(arg) : f_nosignalling(arg);
    return static_cast<double>(n) * f - static_cast<double>(n) * settings_entropy(dist);
}

SeedScaling seed_scaling_check(std::size_t n) {
    if (n < 10000) fail(ErrorCode::DomainError, "seed_scaling_check expects n >= 10^4");
    double sq = std::sqrt(static_cast<double>(n));
    auto dist = SettingsDistribution::biased_00(11.0 / sq);
    SeedScaling s;
    s.t1_bits = static_cast<double>(n) * settings_entropy(dist);
    s.ratio = s.t1_bits / (sq * std::log2(sq));
    return s;
}

ExpansionReport run_expansion(const DeviceModel& device, std::uint64_t device_seed, std::size_t n,
                              const SettingsDistribution& dist, double delta, double eps_ext,
                              BitSource& seed, Model model) {
    if (n < 1) fail(ErrorCode::DomainError, "expansion needs n >= 1");
    ExpansionReport report;
    report.delta = delta;
    report.eps_ext = eps_ext;

    auto [settings, t1] = sample_settings_accounted(n, dist, seed);
    report.budget.t1_bits = t1;

    report.log = run_with_settings(device, settings, dist, device_seed);
    report.certificate = certify(aggregate(report.log), dist, delta, model);

    if (report.certificate.min_entropy_bits <= 0.0) {
        report.status = ExpansionStatus::CertificationFailed;
        report.budget.net_bits = -static_cast<std::int64_t>(t1);
        return report;
    }

    ExtractorParams params;
    params.n_in = 2 * n;
    params.m_out = output_length(report.certificate.min_entropy_bits, eps_ext);
    params.eps_ext = eps_ext;
    params.seed = seed.take(params.n_in + params.m_out - 1);
    report.budget.t2_bits = params.seed.size();
    report.extracted = toeplitz_extract(raw_output_bits(report.log), params);
    report.budget.output_bits = report.extracted.size();
    report.budget.net_bits = static_cast<std::int64_t>(report.budget.output_bits) -
                             static_cast<std::int64_t>(report.budget.t1_bits);
    report.status = ExpansionStatus::Completed;
    return report;
}

namespace {

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.17g", v);
    return buf;
}

std::string indent_lines(const std::string& s, const std::string& pad) {
    std::string out;
    for (char c : s) {
        out += c;
        if (c == '\n') out += pad;
    }
    // drop trailing pad after the final newline
    if (out.size() >= pad.size() && out.compare(out.size() - pad.size(), pad.size(), pad) == 0)
        out.erase(out.size() - pad.size());
    return out;
}

} // namespace

std::string expansion_report_to_json(const ExpansionReport& report, const std::string& extracted_path,
                                     const std::string& log_path) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"status\": \""
        << (report.status == ExpansionStatus::Completed ? "completed" : "certification_failed")
        << "\",\n";
    out << "  \"delta\": " << num17(report.delta) << ",\n";
    out << "  \"eps_ext\": " << num17(report.eps_ext) << ",\n";
    std::string cert = certificate_to_json(report.certificate, check_no_signalling(aggregate(report.log)));
    if (!cert.empty() && cert.back() == '\n') cert.pop_back();
    out << "  \"certificate\": " << indent_lines(cert, "  ") << ",\n";
    out << "  \"budget\": {\"t1_bits\": " << report.budget.t1_bits
        << ", \"t2_bits\": " << report.budget.t2_bits << ", \"output_bits\": " << report.budget.output_bits
        << ", \"net_bits\": " << report.budget.net_bits << "},\n";
    out << "  \"extracted_bits\": " << report.extracted.size();
    if (!extracted_path.empty()) out << ",\n  \"extracted_path\": \"" << extracted_path << "\"";
    if (!log_path.empty()) out << ",\n  \"log_path\": \"" << log_path << "\"";
    out << "\n}\n";
    return out.str();
}

} // namespace dicert

#include "dicert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dicert/error.hpp"
#include "dicert/estimator.hpp"

namespace dicert {

namespace {

constexpr double kTsirelson = 2.8284271247461903; // 2*sqrt(2)
constexpr double kClampSlack = 1e-9;

// Fixed-point decimal with 17 significant digits; '#' keeps trailing zeros so
// at least 15 significant digits always appear literally.
std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.17g", v);
    return buf;
}

} // namespace

double model_i_max(Model model) {
    return model == Model::Quantum ? kTsirelson : 4.0;
}

std::string model_name(Model model) {
    return model == Model::Quantum ? "quantum" : "nosignalling";
}

Model model_from_name(const std::string& name) {
    if (name == "quantum") return Model::Quantum;
    if (name == "nosignalling") return Model::NoSignalling;
    fail(ErrorCode::DomainError, "unknown model '" + name + "' (quantum|nosignalling)");
}

double azuma_epsilon(std::size_t n, double q, double delta, double i_max) {
    if (n < 1) fail(ErrorCode::DomainError, "n must be >= 1");
    if (!(q > 0.0) || q > 0.25) fail(ErrorCode::DomainError, "q must satisfy 0 < q <= 1/4");
    if (!(delta > 0.0) || !(delta < 1.0)) fail(ErrorCode::DomainError, "delta must be in (0,1)");
    if (std::fabs(i_max - kTsirelson) > 1e-12 && std::fabs(i_max - 4.0) > 1e-12)
        fail(ErrorCode::DomainError, "i_max must be 2*sqrt(2) or 4");
    return (1.0 / q + i_max) * std::sqrt(2.0 * std::log(1.0 / delta) / static_cast<double>(n));
}

double f_quantum(double i) {
    if (!std::isfinite(i)) fail(ErrorCode::DomainError, "f_quantum requires finite input");
    if (i <= 2.0) return 0.0;
    if (i > kTsirelson + kClampSlack)
        fail(ErrorCode::AboveTsirelson, "CHSH value above the quantum maximum");
    i = std::min(i, kTsirelson);
    // At the quantum maximum the radicand is 0 up to rounding; keep it there.
    return 1.0 - std::log2(1.0 + std::sqrt(std::max(0.0, 2.0 - i * i / 4.0)));
}

double f_nosignalling(double i) {
    if (!std::isfinite(i)) fail(ErrorCode::DomainError, "f_nosignalling requires finite input");
    if (i <= 2.0) return 0.0;
    if (i > 4.0 + kClampSlack)
        fail(ErrorCode::DomainError, "CHSH value above the algebraic maximum");
    i = std::min(i, 4.0);
    return -std::log2(1.5 - i / 4.0);
}

Certificate certify(const CountsTable& counts, const SettingsDistribution& dist, double delta,
                    Model model) {
    ChshEstimate est = chsh_from_counts(counts, dist);
    double i_max = model_i_max(model);
    double eps = azuma_epsilon(est.n, dist.q(), delta, i_max);
    double arg = std::clamp(est.i_hat - eps, 2.0, i_max);
    double f = (model == Model::Quantum) ? f_quantum(arg) : f_nosignalling(arg);
    Certificate cert;
    cert.i_hat = est.i_hat;
    cert.n = est.n;
    cert.q = dist.q();
    cert.delta = delta;
    cert.epsilon = eps;
    cert.model = model;
    cert.f_value = f;
    cert.min_entropy_bits = static_cast<double>(est.n) * f;
    cert.i_max = i_max;
    cert.input_distribution = dist;
    return cert;
}

double local_pvalue(double i_hat, std::size_t n, double q) {
    if (n < 1) fail(ErrorCode::DomainError, "n must be >= 1");
    if (std::fabs(q - 0.25) > 1e-12)
        fail(ErrorCode::NonUniformSettings, "the local tail bound assumes uniform settings (q = 1/4)");
    double d = i_hat - 2.0;
    if (d <= 0.0) return 1.0;
    return std::min(1.0, std::exp(-static_cast<double>(n) * d * d / 72.0));
}

std::string certificate_to_json(const Certificate& cert, const std::vector<NsCheck>& ns_checks) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"i_hat\": " << num17(cert.i_hat) << ",\n";
    out << "  \"n\": " << cert.n << ",\n";
    out << "  \"q\": " << num17(cert.q) << ",\n";
    out << "  \"delta\": " << num17(cert.delta) << ",\n";
    out << "  \"epsilon\": " << num17(cert.epsilon) << ",\n";
    out << "  \"model\": \"" << model_name(cert.model) << "\",\n";
    out << "  \"f_value\": " << num17(cert.f_value) << ",\n";
    out << "  \"min_entropy_bits\": " << num17(cert.min_entropy_bits) << ",\n";
    out << "  \"i_max\": " << num17(cert.i_max) << ",\n";
    out << "  \"input_distribution\": {";
    const char* keys[4] = {"\"p00\"", "\"p01\"", "\"p10\"", "\"p11\""};
    for (int k = 0; k < 4; ++k) {
        out << (k ? ", " : "") << keys[k] << ": " << num17(cert.input_distribution.probs()[k]);
    }
    out << ", \"q\": " << num17(cert.input_distribution.q()) << "}";
    if (!ns_checks.empty()) {
        out << ",\n  \"ns_checks\": [";
        for (std::size_t k = 0; k < ns_checks.size(); ++k) {
            out << (k ? ", " : "") << "{\"condition\": \"" << ns_checks[k].label
                << "\", \"p_value\": " << num17(ns_checks[k].p_value) << "}";
        }
        out << "]";
    }
    out << "\n}\n";
    return out.str();
}

} // namespace dicert

// dicert: certify and quantify the randomness of a two-party Bell experiment
// from its trial log, simulate device models, extract, and run the full
// expansion pipeline.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "dicert/bits.hpp"
#include "dicert/certifier.hpp"
#include "dicert/core.hpp"
#include "dicert/error.hpp"
#include "dicert/estimator.hpp"
#include "dicert/expansion.hpp"
#include "dicert/extractor.hpp"
#include "dicert/ns_polytope.hpp"
#include "dicert/rng.hpp"
#include "dicert/simulator.hpp"
#include "dicert/stat_tests.hpp"

namespace {

using namespace dicert;

// Reference experimental dataset bundled for the reproduce-paper command:
// 16 counts N(a,b;x,y) from 3016 trials at uniform settings.
CountsTable reference_counts() {
    CountsTable t;
    auto put = [&](int x, int y, std::uint64_t n00, std::uint64_t n01, std::uint64_t n10, std::uint64_t n11) {
        t.count(0, 0, x, y) = n00;
        t.count(0, 1, x, y) = n01;
        t.count(1, 0, x, y) = n10;
        t.count(1, 1, x, y) = n11;
    };
    put(0, 0, 293, 94, 70, 295);
    put(0, 1, 298, 70, 74, 309);
    put(1, 0, 283, 69, 64, 291);
    put(1, 1, 68, 340, 309, 89);
    return t;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct DeviceFlags {
    std::string device = "honest";
    double visibility = 1.0;
    double chi_deg = 90.0, a0_deg = 0.0, a1_deg = 90.0, b0_deg = 45.0, b1_deg = 135.0;
    std::string inputs = "uniform";
    double q = 0.0, alpha = 0.0;
    std::uint64_t seed = 1;
    std::uint64_t n = 0;
    std::string config_path;
};

void add_device_flags(CLI::App* cmd, DeviceFlags& o) {
    cmd->add_option("--device", o.device, "honest|deterministic|memory|prbox")->capture_default_str();
    cmd->add_option("--n", o.n, "number of trials");
    cmd->add_option("--visibility", o.visibility, "honest-device visibility in [0,1]")->capture_default_str();
    cmd->add_option("--chi-deg", o.chi_deg, "honest-device state phase, degrees")->capture_default_str();
    cmd->add_option("--phi-a0-deg", o.a0_deg, "side-A phase for x=0, degrees")->capture_default_str();
    cmd->add_option("--phi-a1-deg", o.a1_deg, "side-A phase for x=1, degrees")->capture_default_str();
    cmd->add_option("--phi-b0-deg", o.b0_deg, "side-B phase for y=0, degrees")->capture_default_str();
    cmd->add_option("--phi-b1-deg", o.b1_deg, "side-B phase for y=1, degrees")->capture_default_str();
    cmd->add_option("--inputs", o.inputs, "input law: uniform|biased|product")->capture_default_str();
    cmd->add_option("--q", o.q, "bias parameter for biased/product input laws");
    cmd->add_option("--alpha", o.alpha, "bias as q = alpha/sqrt(n) (biased law)");
    cmd->add_option("--seed", o.seed, "device/settings RNG seed")->capture_default_str();
    cmd->add_option("--config", o.config_path, "key=value run-config file (flags override)");
}

RunConfig build_run_config(CLI::App* cmd, const DeviceFlags& o) {
    constexpr double kDegToRad = 0.017453292519943295;
    RunConfig cfg;
    if (!o.config_path.empty()) cfg = parse_run_config(o.config_path);
    auto given = [&](const char* name) { return cmd->count(name) > 0; };
    if (o.config_path.empty() || given("--n")) {
        if (o.n == 0) fail(ErrorCode::DomainError, "--n is required (or supply it via --config)");
        cfg.n = o.n;
    }
    if (o.config_path.empty() || given("--device")) cfg.device.kind = device_kind_from_name(o.device);
    if (o.config_path.empty() || given("--visibility")) cfg.device.visibility = o.visibility;
    if (o.config_path.empty() || given("--chi-deg")) cfg.device.chi = kDegToRad * o.chi_deg;
    if (o.config_path.empty() || given("--phi-a0-deg")) cfg.device.phi_a[0] = kDegToRad * o.a0_deg;
    if (o.config_path.empty() || given("--phi-a1-deg")) cfg.device.phi_a[1] = kDegToRad * o.a1_deg;
    if (o.config_path.empty() || given("--phi-b0-deg")) cfg.device.phi_b[0] = kDegToRad * o.b0_deg;
    if (o.config_path.empty() || given("--phi-b1-deg")) cfg.device.phi_b[1] = kDegToRad * o.b1_deg;
    if (o.config_path.empty() || given("--seed")) cfg.rng_seed = o.seed;
    if (o.config_path.empty() || given("--inputs") || given("--q") || given("--alpha")) {
        if (o.inputs == "uniform") {
            cfg.dist = SettingsDistribution::uniform();
        } else {
            double q = o.q;
            if (q == 0.0 && o.alpha > 0.0) q = o.alpha / std::sqrt(static_cast<double>(cfg.n));
            if (q == 0.0) fail(ErrorCode::DomainError, "--inputs " + o.inputs + " requires --q or --alpha");
            cfg.dist = (o.inputs == "biased") ? SettingsDistribution::biased_00(q)
                       : (o.inputs == "product")
                           ? SettingsDistribution::product_biased(q)
                           : throw Error(ErrorCode::DomainError, "unknown input law: " + o.inputs);
        }
    }
    return cfg;
}

// Shared input plumbing for commands that accept a trial CSV or a counts JSON.
struct CountsInput {
    std::string csv_path;
    std::string counts_path;
};

void add_counts_input(CLI::App* cmd, CountsInput& in) {
    auto* a = cmd->add_option("--input", in.csv_path, "trial CSV (round,x,y,a,b)");
    auto* b = cmd->add_option("--counts", in.counts_path, "counts JSON");
    a->excludes(b);
}

CountsTable load_counts(const CountsInput& in) {
    if (!in.csv_path.empty()) return aggregate(read_trial_csv(in.csv_path));
    if (!in.counts_path.empty()) return read_counts_json(in.counts_path);
    fail(ErrorCode::DomainError, "supply --input or --counts");
}

SettingsDistribution dist_from_flags(const std::string& inputs, double q) {
    if (inputs == "uniform") return SettingsDistribution::uniform();
    if (q == 0.0) fail(ErrorCode::DomainError, "--inputs " + inputs + " requires --q");
    if (inputs == "biased") return SettingsDistribution::biased_00(q);
    if (inputs == "product") return SettingsDistribution::product_biased(q);
    fail(ErrorCode::DomainError, "unknown input law: " + inputs);
}

int cmd_simulate(CLI::App* cmd, const DeviceFlags& flags, const std::string& out_path, bool json) {
    RunConfig cfg = build_run_config(cmd, flags);
    TrialLog log = run(cfg);
    write_trial_csv(out_path, log);
    ChshEstimate est = chsh_from_log(log, cfg.dist);
    if (json) {
        std::printf("{\"n\": %zu, \"i_hat\": %.17g, \"output\": \"%s\"}\n", est.n, est.i_hat,
                    out_path.c_str());
    } else {
        std::printf("wrote %zu trials to %s\n", est.n, out_path.c_str());
        std::printf("i_hat = %.6f\n", est.i_hat);
    }
    return 0;
}

int cmd_certify(const CountsInput& in, double delta, const std::string& model_str,
                const std::string& inputs, double q, const std::string& out_path, bool json) {
    CountsTable counts = load_counts(in);
    SettingsDistribution dist = dist_from_flags(inputs, q);
    Model model = model_from_name(model_str);
    Certificate cert = certify(counts, dist, delta, model);
    auto ns = check_no_signalling(counts);
    std::string doc = certificate_to_json(cert, ns);
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) fail(ErrorCode::IoError, "cannot open for writing: " + out_path);
        f << doc;
    }
    if (json) {
        std::fputs(doc.c_str(), stdout);
    } else {
        std::printf("i_hat    = %.6f\n", cert.i_hat);
        std::printf("epsilon  = %.6f  (delta=%g, model=%s)\n", cert.epsilon, cert.delta,
                    model_name(cert.model).c_str());
        std::printf("certified min-entropy = %.4f bits (%.6f bits/trial)\n", cert.min_entropy_bits,
                    cert.f_value);
    }
    return cert.min_entropy_bits > 0.0 ? 0 : 2;
}

int cmd_localtest(const CountsInput& in, bool json) {
    CountsTable counts = load_counts(in);
    ChshEstimate est = chsh_from_counts(counts, SettingsDistribution::uniform());
    double p = local_pvalue(est.i_hat, est.n);
    if (json)
        std::printf("{\"i_hat\": %.17g, \"n\": %zu, \"p_value\": %.17g}\n", est.i_hat, est.n, p);
    else
        std::printf("i_hat = %.6f, n = %zu: local-model p-value <= %.6g\n", est.i_hat, est.n, p);
    return 0;
}

int cmd_nstest(const CountsInput& in, bool json) {
    CountsTable counts = load_counts(in);
    auto checks = check_no_signalling(counts);
    if (json) {
        std::printf("[");
        for (std::size_t i = 0; i < checks.size(); ++i)
            std::printf("%s{\"condition\": \"%s\", \"p_value\": %.17g}", i ? ", " : "",
                        checks[i].label.c_str(), checks[i].p_value);
        std::printf("]\n");
    } else {
        for (const auto& c : checks)
            std::printf("marginal stability %-8s p = %.4f\n", c.label.c_str(), c.p_value);
    }
    return 0;
}

int cmd_stats(const std::string& bits_path, const CountsInput& in, const std::string& which,
              double alpha, bool json) {
    BitString bits;
    if (!bits_path.empty()) {
        bits = read_bits_file(bits_path);
    } else if (!in.csv_path.empty()) {
        TrialLog log = read_trial_csv(in.csv_path);
        if (which == "a" || which == "b")
            bits = side_bits(log, which[0]);
        else if (which == "interleaved")
            bits = raw_output_bits(log);
        else
            fail(ErrorCode::DomainError, "--which must be a, b, or interleaved");
    } else {
        fail(ErrorCode::DomainError, "supply --bits or --input");
    }
    auto results = run_battery(bits, alpha);
    std::fputs(json ? battery_to_json(results).c_str() : battery_to_text(results).c_str(), stdout);
    return 0;
}

int cmd_extract(const std::string& raw_path, const std::string& seed_path, const std::string& out_path,
                long long m_out, double min_entropy, double eps_ext, bool json) {
    BitString raw = read_bits_file(raw_path);
    ExtractorParams params;
    params.n_in = raw.size();
    params.eps_ext = eps_ext;
    if (m_out >= 0)
        params.m_out = static_cast<std::size_t>(m_out);
    else if (min_entropy >= 0.0)
        params.m_out = output_length(min_entropy, eps_ext);
    else
        fail(ErrorCode::DomainError, "supply --m-out or --min-entropy");
    params.seed = read_bits_file(seed_path);
    BitString out = toeplitz_extract(raw, params);
    write_bits_file(out_path, out);
    if (json)
        std::printf("{\"n_in\": %zu, \"m_out\": %zu, \"output\": \"%s\"}\n", params.n_in, params.m_out,
                    out_path.c_str());
    else
        std::printf("extracted %zu bits from %zu into %s\n", params.m_out, params.n_in, out_path.c_str());
    return 0;
}

int cmd_expand(CLI::App* cmd, const DeviceFlags& flags, double delta, double eps_ext,
               const std::string& seed_file, const std::string& report_path,
               const std::string& extracted_path, const std::string& log_path, bool json) {
    RunConfig cfg = build_run_config(cmd, flags);
    BitString seed_bits;
    if (!seed_file.empty()) {
        seed_bits = read_bits_file(seed_file);
    } else {
        // No seed supplied: synthesize a demo seed (not private randomness).
        // 6n + 64 bits covers settings (<= 2 bits/trial amortized) plus the
        // extractor seed (2n + m - 1 <= 3n).
        seed_bits = random_bits(cfg.rng_seed ^ 0x5eed5eed5eed5eedULL, 6 * cfg.n + 64);
    }
    BitSource src(std::move(seed_bits));
    ExpansionReport report =
        run_expansion(cfg.device, cfg.rng_seed, cfg.n, cfg.dist, delta, eps_ext, src);
    // The trial log is persisted even when certification fails, so failed
    // runs can be audited.
    if (!log_path.empty()) write_trial_csv(log_path, report.log);
    if (!extracted_path.empty()) write_bits_file(extracted_path, report.extracted);
    std::string doc = expansion_report_to_json(report, extracted_path, log_path);
    if (!report_path.empty()) {
        std::ofstream f(report_path, std::ios::binary);
        if (!f) fail(ErrorCode::IoError, "cannot open for writing: " + report_path);
        f << doc;
    }
    if (json) {
        std::fputs(doc.c_str(), stdout);
    } else if (report.status == ExpansionStatus::Completed) {
        std::printf("certified %.4f bits; extracted %llu bits (t1=%llu, t2=%llu, net=%lld)\n",
                    report.certificate.min_entropy_bits,
                    static_cast<unsigned long long>(report.budget.output_bits),
                    static_cast<unsigned long long>(report.budget.t1_bits),
                    static_cast<unsigned long long>(report.budget.t2_bits),
                    static_cast<long long>(report.budget.net_bits));
    } else {
        std::printf("certification failed: i_hat - epsilon = %.6f does not clear the local bound 2\n",
                    report.certificate.i_hat - report.certificate.epsilon);
    }
    return report.status == ExpansionStatus::Completed ? 0 : 2;
}

int cmd_reproduce(bool json) {
    CountsTable counts = reference_counts();
    auto dist = SettingsDistribution::uniform();
    ChshEstimate est = chsh_from_counts(counts, dist);
    Certificate cert = certify(counts, dist, 0.01, Model::Quantum);
    double local_p = local_pvalue(est.i_hat, est.n);
    auto ns = check_no_signalling(counts);

    bool ok = std::fabs(est.i_hat - 2.414) <= 0.001;
    ok = ok && std::fabs(cert.epsilon - 0.3774) <= 0.0005;
    ok = ok && cert.min_entropy_bits >= 40.0 && cert.min_entropy_bits <= 42.0;
    ok = ok && local_p <= 0.00077;
    for (const auto& c : ns) ok = ok && c.p_value > 0.05;

    if (json) {
        std::string doc = certificate_to_json(cert, ns);
        doc.erase(doc.find_last_of('}'));
        std::printf("%s,\n  \"local_pvalue\": %.17g,\n  \"all_thresholds_met\": %s\n}\n", doc.c_str(),
                    local_p, ok ? "true" : "false");
    } else {
        std::printf("reference run: n = %zu trials, uniform settings\n", est.n);
        std::printf("  i_hat                 = %.4f\n", est.i_hat);
        std::printf("  epsilon (delta=0.01)  = %.4f\n", cert.epsilon);
        std::printf("  certified min-entropy = %.2f bits (99%% confidence, device-independent)\n",
                    cert.min_entropy_bits);
        std::printf("  local-model p-value  <= %.6f\n", local_p);
        for (const auto& c : ns)
            std::printf("  marginal stability %-7s p = %.4f\n", c.label.c_str(), c.p_value);
        std::printf("%s\n", ok ? "all thresholds met" : "THRESHOLDS NOT MET");
    }
    return ok ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"device-independent randomness certification toolkit"};
    app.require_subcommand(1);

    bool json = false;
    app.add_flag("--json", json, "machine-readable output");

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate a trial log from a device model");
    DeviceFlags sim_flags;
    add_device_flags(sim, sim_flags);
    std::string sim_out;
    sim->add_option("-o,--output", sim_out, "trial CSV path")->required();

    // certify
    auto* cer = app.add_subcommand("certify", "min-entropy certificate from a trial log or counts");
    CountsInput cer_in;
    add_counts_input(cer, cer_in);
    double cer_delta = 0.01, cer_q = 0.0;
    std::string cer_model = "quantum", cer_inputs = "uniform", cer_out;
    cer->add_option("--delta", cer_delta, "confidence parameter in (0,1)")->capture_default_str();
    cer->add_option("--model", cer_model, "quantum|nosignalling")->capture_default_str();
    cer->add_option("--inputs", cer_inputs, "input law: uniform|biased|product")->capture_default_str();
    cer->add_option("--q", cer_q, "bias parameter for biased/product input laws");
    cer->add_option("-o,--output", cer_out, "certificate JSON path");

    // localtest
    auto* loc = app.add_subcommand("localtest", "p-value that a local model reached the observed value");
    CountsInput loc_in;
    add_counts_input(loc, loc_in);

    // nstest
    auto* nst = app.add_subcommand("nstest", "marginal-stability (signalling) checks");
    CountsInput nst_in;
    add_counts_input(nst, nst_in);

    // stats
    auto* sta = app.add_subcommand("stats", "statistical test battery on a bit string");
    std::string sta_bits, sta_which = "a";
    CountsInput sta_in;
    double sta_alpha = 0.001;
    sta->add_option("--bits", sta_bits, "bit file (8-byte LE bit count header)");
    sta->add_option("--input", sta_in.csv_path, "trial CSV to draw bits from");
    sta->add_option("--which", sta_which, "a|b|interleaved when using --input")->capture_default_str();
    sta->add_option("--alpha", sta_alpha, "significance level")->capture_default_str();

    // extract
    auto* ext = app.add_subcommand("extract", "Toeplitz-extract a bit file");
    std::string ext_raw, ext_seed, ext_out;
    long long ext_m = -1;
    double ext_h = -1.0, ext_eps = 0x1.0p-32;
    ext->add_option("--raw", ext_raw, "raw input bit file")->required();
    ext->add_option("--seed", ext_seed, "seed bit file (n_in + m_out - 1 bits)")->required();
    ext->add_option("-o,--output", ext_out, "output bit file")->required();
    ext->add_option("--m-out", ext_m, "output length in bits");
    ext->add_option("--min-entropy", ext_h, "certified min-entropy (sets m_out via the hash margin)");
    ext->add_option("--eps-ext", ext_eps, "extractor error")->capture_default_str();

    // expand
    auto* exp = app.add_subcommand("expand", "full expansion run: settings, device, certificate, extraction");
    DeviceFlags exp_flags;
    add_device_flags(exp, exp_flags);
    double exp_delta = 0.01, exp_eps = 0x1.0p-32;
    std::string exp_seed_file, exp_report, exp_extracted, exp_log;
    exp->add_option("--delta", exp_delta, "confidence parameter")->capture_default_str();
    exp->add_option("--eps-ext", exp_eps, "extractor error")->capture_default_str();
    exp->add_option("--seed-file", exp_seed_file, "private seed bit file (synthesized if omitted)");
    exp->add_option("-o,--report", exp_report, "expansion report JSON path");
    exp->add_option("--extracted-out", exp_extracted, "extracted bit file path");
    exp->add_option("--log-out", exp_log, "trial CSV path (written even on failure)");

    // reproduce-paper
    app.add_subcommand("reproduce-paper", "recompute the bundled reference experiment's headline numbers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim, sim_flags, sim_out, json);
        if (cer->parsed()) return cmd_certify(cer_in, cer_delta, cer_model, cer_inputs, cer_q, cer_out, json);
        if (loc->parsed()) return cmd_localtest(loc_in, json);
        if (nst->parsed()) return cmd_nstest(nst_in, json);
        if (sta->parsed()) return cmd_stats(sta_bits, sta_in, sta_which, sta_alpha, json);
        if (ext->parsed()) return cmd_extract(ext_raw, ext_seed, ext_out, ext_m, ext_h, ext_eps, json);
        if (exp->parsed())
            return cmd_expand(exp, exp_flags, exp_delta, exp_eps, exp_seed_file, exp_report,
                              exp_extracted, exp_log, json);
        return cmd_reproduce(json);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == ErrorCode::CertificationFailed ? 2 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

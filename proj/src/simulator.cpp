#include "dicert/simulator.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "dicert/error.hpp"
#include "dicert/rng.hpp"

namespace dicert {

BehaviorTable honest_behavior(double v, double chi, const std::array<double, 2>& phi_a,
                              const std::array<double, 2>& phi_b) {
    if (!(v >= 0.0) || !(v <= 1.0)) fail(ErrorCode::DomainError, "visibility must be in [0,1]");
    BehaviorTable t;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            double e = -v * std::cos(phi_a[x] + phi_b[y] + chi);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    t.prob(a, b, x, y) = 0.25 * (1.0 + ((a == b) ? 1.0 : -1.0) * e);
        }
    }
    return t;
}

std::vector<std::pair<int, int>> gen_settings(std::size_t n, const SettingsDistribution& dist,
                                              std::uint64_t rng_seed) {
    SplitMix64 rng = derive_stream(rng_seed, kStreamSettings);
    std::vector<std::pair<int, int>> out;
    out.reserve(n);
    const auto& p = dist.probs();
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.next_double();
        double acc = 0.0;
        int pick = 3;
        for (int k = 0; k < 4; ++k) {
            acc += p[k];
            if (u < acc) {
                pick = k;
                break;
            }
        }
        out.emplace_back(pick >> 1, pick & 1);
    }
    return out;
}

namespace {

struct DetStrategy {
    int al, be, ga, de;
    int out_a(int x) const { return (al & x) ^ be; }
    int out_b(int y) const { return (ga & y) ^ de; }
};

std::array<DetStrategy, 16> det_strategies() {
    std::array<DetStrategy, 16> s{};
    int k = 0;
    for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be)
            for (int ga = 0; ga < 2; ++ga)
                for (int de = 0; de < 2; ++de) s[k++] = {al, be, ga, de};
    return s;
}

} // namespace

TrialLog run_with_settings(const DeviceModel& dev, const std::vector<std::pair<int, int>>& settings,
                           const SettingsDistribution& dist, std::uint64_t rng_seed) {
    if (settings.empty()) fail(ErrorCode::DomainError, "run needs n >= 1");
    SplitMix64 rng_a = derive_stream(rng_seed, kStreamSideA);
    SplitMix64 rng_b = derive_stream(rng_seed, kStreamSideB);
    const std::size_t n = settings.size();

    TrialLog log;
    log.trials.reserve(n);

    if (dev.kind == DeviceKind::HonestQuantum) {
        BehaviorTable beh = honest_behavior(dev.visibility, dev.chi, dev.phi_a, dev.phi_b);
        for (std::size_t i = 0; i < n; ++i) {
            auto [x, y] = settings[i];
            int a = rng_a.next_bit() ? 1 : 0; // P(a|x) = 1/2
            double p_same = 2.0 * beh.prob(a, a, x, y); // P(b=a | a,x,y)
            int b = (rng_b.next_double() < p_same) ? a : 1 - a;
            log.trials.push_back({i + 1, x, y, a, b});
        }
    } else if (dev.kind == DeviceKind::PRBox) {
        for (std::size_t i = 0; i < n; ++i) {
            auto [x, y] = settings[i];
            int a = rng_a.next_bit() ? 1 : 0;
            int b = a ^ (x & y);
            log.trials.push_back({i + 1, x, y, a, b});
        }
    } else if (dev.kind == DeviceKind::LocalDeterministic) {
        for (int v : {dev.det_a[0], dev.det_a[1], dev.det_b[0], dev.det_b[1]})
            if (v != 0 && v != 1) fail(ErrorCode::DomainError, "deterministic tables must be 0/1");
        for (std::size_t i = 0; i < n; ++i) {
            auto [x, y] = settings[i];
            log.trials.push_back({i + 1, x, y, dev.det_a[x], dev.det_b[y]});
        }
    } else { // MemoryLHV: chase the deterministic strategy that fits the past best
        auto strat = det_strategies();
        std::array<double, 16> score{};
        for (std::size_t i = 0; i < n; ++i) {
            auto [x, y] = settings[i];
            std::size_t best = 0;
            for (std::size_t k = 1; k < 16; ++k)
                if (score[k] > score[best]) best = k;
            int a = strat[best].out_a(x);
            int b = strat[best].out_b(y);
            log.trials.push_back({i + 1, x, y, a, b});
            // Completed round joins the shared history: each strategy is
            // credited with the increment it would have produced.
            double w = ((x & y) ? -1.0 : 1.0) / dist.prob(x, y);
            for (std::size_t k = 0; k < 16; ++k) {
                int same = strat[k].out_a(x) == strat[k].out_b(y);
                score[k] += same ? w : -w;
            }
        }
    }
    return log;
}

TrialLog run(const RunConfig& config) {
    if (config.n < 1) fail(ErrorCode::DomainError, "run needs n >= 1");
    auto settings = gen_settings(config.n, config.dist, config.rng_seed);
    return run_with_settings(config.device, settings, config.dist, config.rng_seed);
}

std::string device_kind_name(DeviceKind kind) {
    switch (kind) {
        case DeviceKind::HonestQuantum: return "honest";
        case DeviceKind::LocalDeterministic: return "deterministic";
        case DeviceKind::MemoryLHV: return "memory";
        case DeviceKind::PRBox: return "prbox";
    }
    fail(ErrorCode::DomainError, "unreachable device kind");
}

DeviceKind device_kind_from_name(const std::string& name) {
    if (name == "honest") return DeviceKind::HonestQuantum;
    if (name == "deterministic") return DeviceKind::LocalDeterministic;
    if (name == "memory") return DeviceKind::MemoryLHV;
    if (name == "prbox") return DeviceKind::PRBox;
    fail(ErrorCode::DomainError, "unknown device '" + name + "' (honest|deterministic|memory|prbox)");
}

namespace {

constexpr double kDegToRad = 0.017453292519943295;

double to_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        fail(ErrorCode::MalformedRow, "bad numeric value for " + key + ": '" + value + "'");
    }
    if (pos != value.size()) fail(ErrorCode::MalformedRow, "bad numeric value for " + key + ": '" + value + "'");
    return v;
}

} // namespace

RunConfig parse_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorCode::IoError, "cannot open for reading: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::MalformedRow, "expected key=value at line " + std::to_string(lineno));
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    static const char* known[] = {"device", "n", "visibility", "chi_deg", "phi_a0_deg", "phi_a1_deg",
                                  "phi_b0_deg", "phi_b1_deg", "input_dist", "q", "alpha", "rng_seed"};
    for (const auto& [k, v] : kv) {
        bool ok = false;
        for (const char* name : known) ok = ok || k == name;
        if (!ok) fail(ErrorCode::DomainError, "unknown config key: " + k);
    }
    if (!kv.count("n")) fail(ErrorCode::DomainError, "config requires n");

    RunConfig cfg;
    cfg.n = static_cast<std::size_t>(to_double("n", kv["n"]));
    if (kv.count("device")) cfg.device.kind = device_kind_from_name(kv["device"]);
    if (kv.count("visibility")) cfg.device.visibility = to_double("visibility", kv["visibility"]);
    if (kv.count("chi_deg")) cfg.device.chi = kDegToRad * to_double("chi_deg", kv["chi_deg"]);
    if (kv.count("phi_a0_deg")) cfg.device.phi_a[0] = kDegToRad * to_double("phi_a0_deg", kv["phi_a0_deg"]);
    if (kv.count("phi_a1_deg")) cfg.device.phi_a[1] = kDegToRad * to_double("phi_a1_deg", kv["phi_a1_deg"]);
    if (kv.count("phi_b0_deg")) cfg.device.phi_b[0] = kDegToRad * to_double("phi_b0_deg", kv["phi_b0_deg"]);
    if (kv.count("phi_b1_deg")) cfg.device.phi_b[1] = kDegToRad * to_double("phi_b1_deg", kv["phi_b1_deg"]);
    if (kv.count("rng_seed")) cfg.rng_seed = static_cast<std::uint64_t>(std::stoull(kv["rng_seed"]));

    std::string dist_name = kv.count("input_dist") ? kv["input_dist"] : "uniform";
    if (dist_name == "uniform") {
        cfg.dist = SettingsDistribution::uniform();
    } else if (dist_name == "biased" || dist_name == "product") {
        double q = 0.0;
        if (kv.count("q"))
            q = to_double("q", kv["q"]);
        else if (kv.count("alpha"))
            q = to_double("alpha", kv["alpha"]) / std::sqrt(static_cast<double>(cfg.n));
        else
            fail(ErrorCode::DomainError, "input_dist=" + dist_name + " requires q or alpha");
        cfg.dist = (dist_name == "biased") ? SettingsDistribution::biased_00(q)
                                           : SettingsDistribution::product_biased(q);
    } else {
        fail(ErrorCode::DomainError, "unknown input_dist '" + dist_name + "' (uniform|biased|product)");
    }
    return cfg;
}

void write_run_config(const std::string& path, const RunConfig& config) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::IoError, "cannot open for writing: " + path);
    f << std::setprecision(17);
    const double rad_to_deg = 1.0 / kDegToRad;
    f << "device=" << device_kind_name(config.device.kind) << '\n';
    f << "n=" << config.n << '\n';
    f << "visibility=" << config.device.visibility << '\n';
    f << "chi_deg=" << config.device.chi * rad_to_deg << '\n';
    f << "phi_a0_deg=" << config.device.phi_a[0] * rad_to_deg << '\n';
    f << "phi_a1_deg=" << config.device.phi_a[1] * rad_to_deg << '\n';
    f << "phi_b0_deg=" << config.device.phi_b[0] * rad_to_deg << '\n';
    f << "phi_b1_deg=" << config.device.phi_b[1] * rad_to_deg << '\n';
    const auto& p = config.dist.probs();
    double qb = p[1];                      // biased_00 shape: {1-3q, q, q, q}
    double qp = p[2] + p[3];               // product shape: P(x=1)
    if (config.dist.is_uniform()) {
        f << "input_dist=uniform\n";
    } else if (std::fabs(p[0] - (1.0 - 3.0 * qb)) < 1e-12 && std::fabs(p[2] - qb) < 1e-12 &&
               std::fabs(p[3] - qb) < 1e-12) {
        f << "input_dist=biased\n";
        f << "q=" << qb << '\n';
    } else if (std::fabs(p[0] - (1.0 - qp) * (1.0 - qp)) < 1e-12 &&
               std::fabs(p[1] - (1.0 - qp) * qp) < 1e-12 && std::fabs(p[2] - qp * (1.0 - qp)) < 1e-12) {
        f << "input_dist=product\n";
        f << "q=" << qp << '\n';
    } else {
        fail(ErrorCode::DomainError, "config files express only uniform, biased, or product input laws");
    }
    f << "rng_seed=" << config.rng_seed << '\n';
    if (!f) fail(ErrorCode::IoError, "write failed: " + path);
}

} // namespace dicert

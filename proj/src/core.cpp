#include "dicert/core.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dicert/error.hpp"

namespace dicert {

SettingsDistribution::SettingsDistribution(const std::array<double, 4>& p) : p_(p) {
    double sum = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0) || !std::isfinite(v))
            fail(ErrorCode::DomainError, "input-law probabilities must be finite and non-negative");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        fail(ErrorCode::DomainError, "input-law probabilities must sum to 1");
}

SettingsDistribution SettingsDistribution::uniform() {
    return SettingsDistribution({0.25, 0.25, 0.25, 0.25});
}

SettingsDistribution SettingsDistribution::biased_00(double q) {
    if (!(q > 0.0) || q > 0.25)
        fail(ErrorCode::DomainError, "biased_00 requires 0 < q <= 1/4");
    return SettingsDistribution({1.0 - 3.0 * q, q, q, q});
}

SettingsDistribution SettingsDistribution::product_biased(double q) {
    if (!(q > 0.0) || !(q < 1.0))
        fail(ErrorCode::DomainError, "product_biased requires 0 < q < 1");
    double r = 1.0 - q;
    return SettingsDistribution({r * r, r * q, q * r, q * q});
}

SettingsDistribution SettingsDistribution::custom(const std::array<double, 4>& probs) {
    return SettingsDistribution(probs);
}

double SettingsDistribution::q() const {
    double m = p_[0];
    for (double v : p_) m = std::min(m, v);
    return m;
}

bool SettingsDistribution::is_uniform(double tol) const {
    for (double v : p_) {
        if (std::fabs(v - 0.25) > tol) return false;
    }
    return true;
}

std::uint64_t CountsTable::n_xy(int x, int y) const {
    std::uint64_t s = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) s += count(a, b, x, y);
    return s;
}

std::uint64_t CountsTable::total() const {
    std::uint64_t s = 0;
    for (std::uint64_t c : counts) s += c;
    return s;
}

TrialLog ingest_log(const std::vector<std::array<long long, 5>>& rows) {
    if (rows.empty()) fail(ErrorCode::EmptyLog, "trial log is empty");
    TrialLog log;
    log.trials.reserve(rows.size());
    std::uint64_t expect = 1;
    for (const auto& r : rows) {
        if (r[0] != static_cast<long long>(expect))
            fail(ErrorCode::DomainError, "round indices must be 1,2,... in order (got " +
                                             std::to_string(r[0]) + " at position " + std::to_string(expect) + ")");
        for (int k = 1; k < 5; ++k) {
            if (r[k] != 0 && r[k] != 1)
                fail(ErrorCode::DomainError, "x,y,a,b must each be 0 or 1 (round " + std::to_string(r[0]) + ")");
        }
        log.trials.push_back({expect, static_cast<int>(r[1]), static_cast<int>(r[2]),
                              static_cast<int>(r[3]), static_cast<int>(r[4])});
        ++expect;
    }
    return log;
}

CountsTable aggregate(const TrialLog& log) {
    CountsTable t;
    for (const auto& tr : log.trials) ++t.count(tr.a, tr.b, tr.x, tr.y);
    return t;
}

std::array<double, 16> conditional_probs(const CountsTable& counts) {
    std::array<double, 16> p{};
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            std::uint64_t nxy = counts.n_xy(x, y);
            if (nxy == 0)
                fail(ErrorCode::MissingInput, "no events recorded for input pair (" + std::to_string(x) + "," +
                                                  std::to_string(y) + ")");
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    p[CountsTable::index(a, b, x, y)] =
                        static_cast<double>(counts.count(a, b, x, y)) / static_cast<double>(nxy);
        }
    }
    return p;
}

void write_trial_csv(const std::string& path, const TrialLog& log) {
    std::ofstream f(path, std::ios::binary); // binary: keep LF endings everywhere
    if (!f) fail(ErrorCode::IoError, "cannot open for writing: " + path);
    f << "round,x,y,a,b\n";
    for (const auto& t : log.trials)
        f << t.round << ',' << t.x << ',' << t.y << ',' << t.a << ',' << t.b << '\n';
    if (!f) fail(ErrorCode::IoError, "write failed: " + path);
}

namespace {

long long parse_int_field(const std::string& s) {
    if (s.empty()) fail(ErrorCode::MalformedRow, "empty field");
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        fail(ErrorCode::MalformedRow, "non-integer field: '" + s + "'");
    }
    if (pos != s.size()) fail(ErrorCode::MalformedRow, "trailing garbage in field: '" + s + "'");
    return v;
}

} // namespace

TrialLog read_trial_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::IoError, "cannot open for reading: " + path);
    std::string line;
    if (!std::getline(f, line)) fail(ErrorCode::EmptyLog, "empty trial file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "round,x,y,a,b")
        fail(ErrorCode::MalformedRow, "bad header (expected 'round,x,y,a,b'): " + line);
    std::vector<std::array<long long, 5>> rows;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<long long, 5> row{};
        std::size_t start = 0;
        for (int field = 0; field < 5; ++field) {
            std::size_t comma = line.find(',', start);
            bool last = field == 4;
            if (last != (comma == std::string::npos))
                fail(ErrorCode::MalformedRow, "expected 5 comma-separated fields: " + line);
            row[field] = parse_int_field(last ? line.substr(start) : line.substr(start, comma - start));
            if (!last) start = comma + 1;
        }
        rows.push_back(row);
    }
    return ingest_log(rows);
}

std::string counts_to_json(const CountsTable& counts) {
    std::ostringstream out;
    out << "{\"n\": " << counts.total() << ", \"counts\": {";
    bool first = true;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    if (!first) out << ", ";
                    first = false;
                    out << '"' << a << ',' << b << ',' << x << ',' << y << "\": " << counts.count(a, b, x, y);
                }
    out << "}}";
    return out.str();
}

CountsTable counts_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorCode::MalformedRow, std::string("counts JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("counts") || !j["counts"].is_object())
        fail(ErrorCode::MalformedRow, "counts JSON must be {\"n\": ..., \"counts\": {...}}");
    const auto& c = j["counts"];
    if (c.size() != 16) fail(ErrorCode::MalformedRow, "counts object must have exactly 16 entries");
    CountsTable t;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    std::string key = std::to_string(a) + "," + std::to_string(b) + "," +
                                      std::to_string(x) + "," + std::to_string(y);
                    if (!c.contains(key)) fail(ErrorCode::MalformedRow, "missing counts key: " + key);
                    const auto& v = c[key];
                    if (!v.is_number_unsigned())
                        fail(ErrorCode::MalformedRow, "count must be a non-negative integer: " + key);
                    t.count(a, b, x, y) = v.get<std::uint64_t>();
                }
    std::uint64_t n = 0;
    if (j["n"].is_number_unsigned())
        n = j["n"].get<std::uint64_t>();
    else
        fail(ErrorCode::MalformedRow, "\"n\" must be a non-negative integer");
    if (n != t.total()) fail(ErrorCode::MalformedRow, "\"n\" does not match the sum of counts");
    return t;
}

void write_counts_json(const std::string& path, const CountsTable& counts) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::IoError, "cannot open for writing: " + path);
    f << counts_to_json(counts) << '\n';
    if (!f) fail(ErrorCode::IoError, "write failed: " + path);
}

CountsTable read_counts_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::IoError, "cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return counts_from_json(ss.str());
}

} // namespace dicert

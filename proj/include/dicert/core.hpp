#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace dicert {

// One round of a two-party binary-input/binary-output experiment.
struct TrialRecord {
    std::uint64_t round = 0; // 1-based, contiguous within a log
    int x = 0, y = 0;        // inputs, each in {0,1}
    int a = 0, b = 0;        // outputs, each in {0,1}
};

struct TrialLog {
    std::vector<TrialRecord> trials;
    std::size_t n() const { return trials.size(); }
};

// Input law P(x,y) over the four setting pairs, plus its minimum q.
class SettingsDistribution {
public:
    static SettingsDistribution uniform();
    // P(0,0) = 1 - 3q, the three remaining pairs q each.
    static SettingsDistribution biased_00(double q);
    // Independent per-side bias: P(x=1) = P(y=1) = q.
    static SettingsDistribution product_biased(double q);
    static SettingsDistribution custom(const std::array<double, 4>& probs);

    double prob(int x, int y) const { return p_[(x << 1) | y]; }
    const std::array<double, 4>& probs() const { return p_; }
    double q() const;
    bool is_uniform(double tol = 1e-12) const;

private:
    explicit SettingsDistribution(const std::array<double, 4>& p);
    std::array<double, 4> p_;
};

// The 16 counts N(a,b;x,y); the sufficient statistic for the CHSH estimate.
struct CountsTable {
    std::array<std::uint64_t, 16> counts{};

    static std::size_t index(int a, int b, int x, int y) {
        return static_cast<std::size_t>((((a << 1) | b) << 2) | ((x << 1) | y));
    }
    std::uint64_t count(int a, int b, int x, int y) const { return counts[index(a, b, x, y)]; }
    std::uint64_t& count(int a, int b, int x, int y) { return counts[index(a, b, x, y)]; }

    std::uint64_t n_xy(int x, int y) const;
    std::uint64_t total() const;
};

// Validate raw rows (round, x, y, a, b) into a TrialLog. Rejects values
// outside {0,1} and round indices that are not 1,2,...,n in order.
TrialLog ingest_log(const std::vector<std::array<long long, 5>>& rows);

CountsTable aggregate(const TrialLog& log);

// P(ab|xy) for all 16 cells, indexed by CountsTable::index.
std::array<double, 16> conditional_probs(const CountsTable& counts);

// Trial CSV: header "round,x,y,a,b", one record per line, LF endings.
void write_trial_csv(const std::string& path, const TrialLog& log);
TrialLog read_trial_csv(const std::string& path);

// Counts JSON: {"n": N, "counts": {"a,b,x,y": N_abxy, ...}} with exactly 16 entries.
std::string counts_to_json(const CountsTable& counts);
CountsTable counts_from_json(const std::string& text);
void write_counts_json(const std::string& path, const CountsTable& counts);
CountsTable read_counts_json(const std::string& path);

} // namespace dicert

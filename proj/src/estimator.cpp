#include "dicert/estimator.hpp"

#include "dicert/error.hpp"

namespace dicert {

ChshEstimate chsh_from_counts(const CountsTable& counts, const SettingsDistribution& dist) {
    std::uint64_t n = counts.total();
    if (n == 0) fail(ErrorCode::EmptyLog, "counts table holds no events");
    double sum = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            double pxy = dist.prob(x, y);
            std::uint64_t same = counts.count(0, 0, x, y) + counts.count(1, 1, x, y);
            std::uint64_t diff = counts.count(0, 1, x, y) + counts.count(1, 0, x, y);
            if (pxy == 0.0) {
                if (same + diff > 0)
                    fail(ErrorCode::ZeroProbabilityInput,
                         "events recorded for an input pair with probability 0");
                continue;
            }
            double sign = (x & y) ? -1.0 : 1.0;
            sum += sign * (static_cast<double>(same) - static_cast<double>(diff)) / pxy;
        }
    }
    return {sum / static_cast<double>(n), static_cast<std::size_t>(n), dist};
}

double trial_increment(const TrialRecord& t, const SettingsDistribution& dist) {
    double pxy = dist.prob(t.x, t.y);
    if (pxy == 0.0)
        fail(ErrorCode::ZeroProbabilityInput, "trial recorded for an input pair with probability 0");
    double sigma = (t.a == t.b) ? 1.0 : -1.0;
    double sign = (t.x & t.y) ? -1.0 : 1.0;
    return sign * sigma / pxy;
}

ChshEstimate chsh_from_log(const TrialLog& log, const SettingsDistribution& dist) {
    if (log.n() == 0) fail(ErrorCode::EmptyLog, "trial log is empty");
    double sum = 0.0, comp = 0.0;
    for (const auto& t : log.trials) {
        double term = trial_increment(t, dist) - comp;
        double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return {sum / static_cast<double>(log.n()), log.n(), dist};
}

std::array<double, 4> correlators(const CountsTable& counts) {
    std::array<double, 4> e{};
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            std::uint64_t nxy = counts.n_xy(x, y);
            if (nxy == 0)
                fail(ErrorCode::MissingInput, "no events recorded for input pair (" + std::to_string(x) + "," +
                                                  std::to_string(y) + ")");
            std::uint64_t same = counts.count(0, 0, x, y) + counts.count(1, 1, x, y);
            std::uint64_t diff = counts.count(0, 1, x, y) + counts.count(1, 0, x, y);
            e[(x << 1) | y] = (static_cast<double>(same) - static_cast<double>(diff)) / static_cast<double>(nxy);
        }
    }
    return e;
}

} // namespace dicert

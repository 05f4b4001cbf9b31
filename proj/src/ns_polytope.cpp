#include "dicert/ns_polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dicert/error.hpp"

namespace dicert {

bool BehaviorTable::is_normalized(double tol) const {
    for (double v : p) {
        if (!(v >= -tol) || !std::isfinite(v)) return false;
    }
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            double s = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) s += prob(a, b, x, y);
            if (std::fabs(s - 1.0) > tol) return false;
        }
    }
    return true;
}

bool BehaviorTable::is_no_signalling(double tol) const {
    for (int a = 0; a < 2; ++a) {
        for (int x = 0; x < 2; ++x) {
            double m0 = prob(a, 0, x, 0) + prob(a, 1, x, 0);
            double m1 = prob(a, 0, x, 1) + prob(a, 1, x, 1);
            if (std::fabs(m0 - m1) > tol) return false;
        }
    }
    for (int b = 0; b < 2; ++b) {
        for (int y = 0; y < 2; ++y) {
            double m0 = prob(0, b, 0, y) + prob(1, b, 0, y);
            double m1 = prob(0, b, 1, y) + prob(1, b, 1, y);
            if (std::fabs(m0 - m1) > tol) return false;
        }
    }
    return true;
}

double chsh_value(const BehaviorTable& behavior) {
    double total = 0.0;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            double e = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    e += ((a == b) ? 1.0 : -1.0) * behavior.prob(a, b, x, y);
            total += ((x & y) ? -1.0 : 1.0) * e;
        }
    }
    return total;
}

double chsh_family_value(const BehaviorTable& behavior) {
    std::array<double, 4> e{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    e[(x << 1) | y] += ((a == b) ? 1.0 : -1.0) * behavior.prob(a, b, x, y);
    double best = -std::numeric_limits<double>::infinity();
    for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be)
            for (int ga = 0; ga < 2; ++ga) {
                double v = 0.0;
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y) {
                        int flip = (x & y) ^ (al & x) ^ (be & y) ^ ga;
                        v += (flip ? -1.0 : 1.0) * e[(x << 1) | y];
                    }
                best = std::max(best, v);
            }
    return best;
}

std::vector<BehaviorTable> enumerate_vertices() {
    std::vector<BehaviorTable> verts;
    verts.reserve(24);
    // Local deterministic: a = alpha*x XOR beta, b = gamma*y XOR delta.
    for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be)
            for (int ga = 0; ga < 2; ++ga)
                for (int de = 0; de < 2; ++de) {
                    BehaviorTable t;
                    for (int x = 0; x < 2; ++x)
                        for (int y = 0; y < 2; ++y) t.prob((al & x) ^ be, (ga & y) ^ de, x, y) = 1.0;
                    verts.push_back(t);
                }
    // Nonlocal extremal boxes: a XOR b = xy XOR alpha*x XOR beta*y XOR gamma,
    // uniform marginals.
    for (int al = 0; al < 2; ++al)
        for (int be = 0; be < 2; ++be)
            for (int ga = 0; ga < 2; ++ga) {
                BehaviorTable t;
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y)
                        for (int a = 0; a < 2; ++a)
                            for (int b = 0; b < 2; ++b)
                                if ((a ^ b) == ((x & y) ^ (al & x) ^ (be & y) ^ ga))
                                    t.prob(a, b, x, y) = 0.5;
                verts.push_back(t);
            }
    return verts;
}

double ns_max_prob(double i, const Cell& target) {
    if (!(i >= -4.0 - 1e-9) || !(i <= 4.0 + 1e-9))
        fail(ErrorCode::Infeasible, "CHSH value outside [-4, 4]");
    if (!(i >= 2.0) || !(i <= 4.0 + 1e-9))
        fail(ErrorCode::DomainError, "ns_max_prob expects 2 <= i <= 4");
    for (int v : {target.a, target.b, target.x, target.y})
        if (v != 0 && v != 1) fail(ErrorCode::DomainError, "cell indices must be 0 or 1");

    // Align the CHSH-family member with the target cell: when a XOR b differs
    // from xy, the cell sits on the negative branch, so constrain -I instead.
    double sign = ((target.a ^ target.b) == (target.x & target.y)) ? 1.0 : -1.0;

    auto verts = enumerate_vertices();
    const std::size_t m = verts.size();
    std::vector<double> obj(m), con(m);
    for (std::size_t k = 0; k < m; ++k) {
        obj[k] = verts[k].prob(target.a, target.b, target.x, target.y);
        con[k] = sign * chsh_value(verts[k]);
    }

    // LP: max obj.w subject to sum w = 1, con.w = i, w >= 0. With two equality
    // constraints every optimal basic solution has at most two nonzero
    // weights, so enumerate singleton and pair supports exactly.
    double best = -1.0;
    constexpr double tol = 1e-9;
    for (std::size_t k = 0; k < m; ++k) {
        if (std::fabs(con[k] - i) <= tol) best = std::max(best, obj[k]);
    }
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = k + 1; l < m; ++l) {
            double d = con[k] - con[l];
            if (std::fabs(d) <= tol) continue;
            double wk = (i - con[l]) / d; // solves wk*con[k] + (1-wk)*con[l] = i
            if (wk < -tol || wk > 1.0 + tol) continue;
            wk = std::clamp(wk, 0.0, 1.0);
            best = std::max(best, wk * obj[k] + (1.0 - wk) * obj[l]);
        }
    }
    if (best < 0.0) fail(ErrorCode::Infeasible, "no no-signalling behavior attains the requested CHSH value");
    return best;
}

double fisher_exact_two_sided(const std::array<std::array<std::uint64_t, 2>, 2>& table) {
    const std::uint64_t r0 = table[0][0] + table[0][1];
    const std::uint64_t r1 = table[1][0] + table[1][1];
    const std::uint64_t c0 = table[0][0] + table[1][0];
    const std::uint64_t n = r0 + r1;
    if (n == 0 || r0 == 0 || r1 == 0 || c0 == 0 || c0 == n) return 1.0;

    auto lchoose = [](std::uint64_t nn, std::uint64_t kk) {
        return std::lgamma(static_cast<double>(nn) + 1.0) - std::lgamma(static_cast<double>(kk) + 1.0) -
               std::lgamma(static_cast<double>(nn - kk) + 1.0);
    };
    const double denom = lchoose(n, c0);
    auto log_point = [&](std::uint64_t k) {
        return lchoose(r0, k) + lchoose(r1, c0 - k) - denom;
    };

    const std::uint64_t kmin = (c0 > r1) ? c0 - r1 : 0;
    const std::uint64_t kmax = std::min(r0, c0);
    const double lp_obs = log_point(table[0][0]);
    // Tie slack: include tables whose probability is within a 1e-7 relative
    // factor of the observed one.
    const double cutoff = lp_obs + std::log(1.0 + 1e-7);
    double p = 0.0;
    for (std::uint64_t k = kmin; k <= kmax; ++k) {
        double lp = log_point(k);
        if (lp <= cutoff) p += std::exp(lp);
    }
    return std::min(p, 1.0);
}

std::vector<NsCheck> check_no_signalling(const CountsTable& counts) {
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            if (counts.n_xy(x, y) == 0)
                fail(ErrorCode::MissingInput, "no events recorded for input pair (" + std::to_string(x) + "," +
                                                  std::to_string(y) + ")");
    auto a_marginal = [&](int a, int x, int y) {
        return counts.count(a, 0, x, y) + counts.count(a, 1, x, y);
    };
    auto b_marginal = [&](int b, int x, int y) {
        return counts.count(0, b, x, y) + counts.count(1, b, x, y);
    };
    std::vector<NsCheck> out;
    for (int x = 0; x < 2; ++x) {
        std::array<std::array<std::uint64_t, 2>, 2> t{};
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a) t[y][a] = a_marginal(a, x, y);
        out.push_back({"a|x=" + std::to_string(x), fisher_exact_two_sided(t)});
    }
    for (int y = 0; y < 2; ++y) {
        std::array<std::array<std::uint64_t, 2>, 2> t{};
        for (int x = 0; x < 2; ++x)
            for (int b = 0; b < 2; ++b) t[x][b] = b_marginal(b, x, y);
        out.push_back({"b|y=" + std::to_string(y), fisher_exact_two_sided(t)});
    }
    return out;
}

} // namespace dicert

#include "dicert/extractor.hpp"

#include <bit>
#include <cmath>

#include "dicert/error.hpp"

namespace dicert {

std::size_t output_length(double min_entropy_bits, double eps_ext) {
    if (!(min_entropy_bits >= 0.0)) fail(ErrorCode::DomainError, "min-entropy must be >= 0");
    if (!(eps_ext > 0.0) || !(eps_ext < 1.0)) fail(ErrorCode::DomainError, "eps_ext must be in (0,1)");
    double m = std::floor(min_entropy_bits - 2.0 * std::log2(1.0 / eps_ext));
    if (m <= 0.0) return 0;
    return static_cast<std::size_t>(m);
}

namespace {

BitString reverse_bits(const BitString& s) {
    BitString r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.get(i)) r.set(s.size() - 1 - i, true);
    return r;
}

void check_params(const ExtractorParams& p) {
    std::size_t want = p.n_in + p.m_out;
    if (want == 0) fail(ErrorCode::LengthMismatch, "empty extractor");
    want -= 1;
    if (p.seed.size() != want)
        fail(ErrorCode::LengthMismatch, "seed must have n_in + m_out - 1 = " + std::to_string(want) +
                                            " bits, got " + std::to_string(p.seed.size()));
}

// Parity of the AND of `len` bits of `a` starting at a_off with bits of `b`
// starting at b_off. Parity is additive over XOR, so fold words with XOR and
// take one popcount at the end.
bool window_dot(const BitString& a, std::size_t a_off, const BitString& b, std::size_t b_off,
                std::size_t len) {
    std::uint64_t acc = 0;
    std::size_t done = 0;
    while (done < len) {
        std::uint64_t wa = a.word_at(a_off + done);
        std::uint64_t wb = b.word_at(b_off + done);
        std::size_t take = len - done;
        if (take < 64) wa &= (1ULL << take) - 1ULL;
        acc ^= wa & wb;
        done += 64;
    }
    return std::popcount(acc) & 1u;
}

} // namespace

BitString toeplitz_extract(const BitString& raw, const ExtractorParams& params) {
    check_params(params);
    if (raw.size() != params.n_in)
        fail(ErrorCode::LengthMismatch, "raw input must have n_in = " + std::to_string(params.n_in) +
                                            " bits, got " + std::to_string(raw.size()));
    // With rev = reverse(seed), row i of T is rev[(m_out-1-i) .. +n_in-1].
    BitString rev = reverse_bits(params.seed);
    BitString out(params.m_out);
    for (std::size_t i = 0; i < params.m_out; ++i) {
        if (window_dot(raw, 0, rev, params.m_out - 1 - i, params.n_in)) out.set(i, true);
    }
    return out;
}

ToeplitzStreamer::ToeplitzStreamer(const ExtractorParams& params)
    : params_(params), rev_(reverse_bits(params.seed)), acc_(params.m_out) {
    check_params(params_);
}

void ToeplitzStreamer::absorb(const BitString& block) {
    if (fed_ + block.size() > params_.n_in)
        fail(ErrorCode::LengthMismatch, "absorbed more than n_in bits");
    for (std::size_t i = 0; i < params_.m_out; ++i) {
        if (window_dot(block, 0, rev_, params_.m_out - 1 - i + fed_, block.size()))
            acc_.set(i, !acc_.get(i));
    }
    fed_ += block.size();
}

BitString ToeplitzStreamer::finish() {
    if (fed_ != params_.n_in)
        fail(ErrorCode::LengthMismatch, "absorbed " + std::to_string(fed_) + " of " +
                                            std::to_string(params_.n_in) + " bits");
    return acc_;
}

BitString raw_output_bits(const TrialLog& log) {
    BitString s(2 * log.n());
    for (std::size_t i = 0; i < log.n(); ++i) {
        if (log.trials[i].a) s.set(2 * i, true);
        if (log.trials[i].b) s.set(2 * i + 1, true);
    }
    return s;
}

BitString side_bits(const TrialLog& log, char side) {
    if (side != 'a' && side != 'b') fail(ErrorCode::DomainError, "side must be 'a' or 'b'");
    BitString s(log.n());
    for (std::size_t i = 0; i < log.n(); ++i) {
        int v = (side == 'a') ? log.trials[i].a : log.trials[i].b;
        if (v) s.set(i, true);
    }
    return s;
}

} // namespace dicert

#pragma once

#include <cstddef>

#include "dicert/bits.hpp"
#include "dicert/core.hpp"

namespace dicert {

// Parameters of the binary Toeplitz extractor T[i][j] = seed[i - j + n_in - 1]
// (0-based), a 2-universal family; the output length follows the leftover
// hash lemma margin 2*log2(1/eps_ext).
struct ExtractorParams {
    std::size_t n_in = 0;
    std::size_t m_out = 0;
    double eps_ext = 0x1.0p-32;
    BitString seed; // exactly n_in + m_out - 1 bits
};

// floor(min_entropy_bits - 2*log2(1/eps_ext)), clamped at 0.
std::size_t output_length(double min_entropy_bits, double eps_ext);

// out[i] = XOR_j T[i][j] raw[j] over GF(2); deterministic and bit-exact.
BitString toeplitz_extract(const BitString& raw, const ExtractorParams& params);

// Block-wise evaluation; absorbing the raw string in any block sizes yields
// exactly the whole-string result.
class ToeplitzStreamer {
public:
    explicit ToeplitzStreamer(const ExtractorParams& params);
    void absorb(const BitString& block);
    BitString finish(); // errors unless exactly n_in bits were absorbed

private:
    ExtractorParams params_;
    BitString rev_;       // seed reversed, so each row is a contiguous window
    BitString acc_;       // per-row parity accumulator
    std::size_t fed_ = 0;
};

// Raw device output in extraction order: a1, b1, a2, b2, ...
BitString raw_output_bits(const TrialLog& log);
// One side's outputs only ('a' or 'b').
BitString side_bits(const TrialLog& log, char side);

} // namespace dicert

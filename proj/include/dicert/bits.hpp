#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dicert {

// Packed bit string. Semantic bit i is stored in words_[i/64] at bit (i%64)
// counting from the LSB; the on-disk and hex representations are byte streams
// with the most significant bit of each byte first (bit 8k of the string is
// bit 7 of byte k).
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool get(std::size_t i) const;
    void set(std::size_t i, bool v);
    void append(bool v);

    // 64 bits starting at semantic position `bit_offset` (LSB-first packing;
    // positions past the end read as 0).
    std::uint64_t word_at(std::size_t bit_offset) const;

    // XOR with another string of identical length.
    BitString& operator^=(const BitString& other);

    bool operator==(const BitString& other) const;

    // Hex encoding of the MSB-first byte stream; size() must be a multiple of 4.
    static BitString from_hex(const std::string& hex);
    std::string to_hex() const;

    // MSB-first byte stream (last byte zero-padded).
    std::vector<std::uint8_t> to_bytes() const;
    static BitString from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t nbits);

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

// Binary bit file: 8-byte little-endian bit count, then the MSB-first bytes.
void write_bits_file(const std::string& path, const BitString& bits);
BitString read_bits_file(const std::string& path);

// n pseudo-random bits from a SplitMix64 stream seeded with `seed`.
BitString random_bits(std::uint64_t seed, std::size_t n);

} // namespace dicert

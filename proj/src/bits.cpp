#include "dicert/bits.hpp"

#include <fstream>

#include "dicert/error.hpp"
#include "dicert/rng.hpp"

namespace dicert {

bool BitString::get(std::size_t i) const {
    if (i >= nbits_) fail(ErrorCode::DomainError, "bit index out of range");
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
}

void BitString::set(std::size_t i, bool v) {
    if (i >= nbits_) fail(ErrorCode::DomainError, "bit index out of range");
    std::uint64_t mask = 1ULL << (i & 63);
    if (v)
        words_[i >> 6] |= mask;
    else
        words_[i >> 6] &= ~mask;
}

void BitString::append(bool v) {
    if ((nbits_ & 63) == 0) words_.push_back(0);
    ++nbits_;
    if (v) set(nbits_ - 1, true);
}

std::uint64_t BitString::word_at(std::size_t bit_offset) const {
    std::size_t w = bit_offset >> 6;
    unsigned s = static_cast<unsigned>(bit_offset & 63);
    std::uint64_t lo = w < words_.size() ? words_[w] : 0;
    if (s == 0) return lo;
    std::uint64_t hi = (w + 1) < words_.size() ? words_[w + 1] : 0;
    return (lo >> s) | (hi << (64 - s));
}

BitString& BitString::operator^=(const BitString& other) {
    if (nbits_ != other.nbits_) fail(ErrorCode::LengthMismatch, "xor of unequal-length bit strings");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

bool BitString::operator==(const BitString& other) const {
    return nbits_ == other.nbits_ && words_ == other.words_;
}

std::vector<std::uint8_t> BitString::to_bytes() const {
    std::vector<std::uint8_t> out((nbits_ + 7) / 8, 0);
    for (std::size_t i = 0; i < nbits_; ++i) {
        if (get(i)) out[i >> 3] |= static_cast<std::uint8_t>(1u << (7 - (i & 7)));
    }
    return out;
}

BitString BitString::from_bytes(const std::vector<std::uint8_t>& bytes, std::size_t nbits) {
    if (bytes.size() < (nbits + 7) / 8) fail(ErrorCode::LengthMismatch, "byte buffer shorter than bit count");
    BitString s(nbits);
    for (std::size_t i = 0; i < nbits; ++i) {
        if ((bytes[i >> 3] >> (7 - (i & 7))) & 1u) s.set(i, true);
    }
    return s;
}

static int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

BitString BitString::from_hex(const std::string& hex) {
    BitString s(hex.size() * 4);
    for (std::size_t k = 0; k < hex.size(); ++k) {
        int d = hex_digit(hex[k]);
        if (d < 0) fail(ErrorCode::MalformedRow, "invalid hex digit");
        for (int j = 0; j < 4; ++j) {
            if ((d >> (3 - j)) & 1) s.set(k * 4 + j, true);
        }
    }
    return s;
}

std::string BitString::to_hex() const {
    if (nbits_ % 4 != 0) fail(ErrorCode::DomainError, "hex encoding needs a multiple of 4 bits");
    static const char* digits = "0123456789abcdef";
    std::string out(nbits_ / 4, '0');
    for (std::size_t k = 0; k < out.size(); ++k) {
        int d = 0;
        for (int j = 0; j < 4; ++j) d = (d << 1) | (get(k * 4 + j) ? 1 : 0);
        out[k] = digits[d];
    }
    return out;
}

void write_bits_file(const std::string& path, const BitString& bits) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::IoError, "cannot open for writing: " + path);
    std::uint64_t n = bits.size();
    std::uint8_t header[8];
    for (int i = 0; i < 8; ++i) header[i] = static_cast<std::uint8_t>((n >> (8 * i)) & 0xFF);
    f.write(reinterpret_cast<const char*>(header), 8);
    auto bytes = bits.to_bytes();
    if (!bytes.empty()) f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) fail(ErrorCode::IoError, "write failed: " + path);
}

BitString read_bits_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorCode::IoError, "cannot open for reading: " + path);
    std::uint8_t header[8];
    f.read(reinterpret_cast<char*>(header), 8);
    if (f.gcount() != 8) fail(ErrorCode::IoError, "truncated bit file header: " + path);
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(header[i]) << (8 * i);
    std::vector<std::uint8_t> bytes((n + 7) / 8);
    if (!bytes.empty()) {
        f.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (static_cast<std::size_t>(f.gcount()) != bytes.size())
            fail(ErrorCode::IoError, "truncated bit file body: " + path);
    }
    return BitString::from_bytes(bytes, n);
}

BitString random_bits(std::uint64_t seed, std::size_t n) {
    SplitMix64 rng(seed);
    BitString s(n);
    for (std::size_t i = 0; i < n; i += 64) {
        std::uint64_t w = rng.next();
        for (std::size_t j = i; j < n && j < i + 64; ++j) {
            if ((w >> (j - i)) & 1ULL) s.set(j, true);
        }
    }
    return s;
}

} // namespace dicert

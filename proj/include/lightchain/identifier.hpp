// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <openssl/sha.h>

namespace lightchain {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An s-bit identifier in big-endian canonical form. All identifiers
/// compared within one system share the same width.
class Identifier {
public:
    static constexpr unsigned kMaxBits = 256;

    Identifier() = default;

    Identifier(unsigned width_s, BytesView canonical) : width_(width_s) {
        check_width(width_s);
        if (canonical.size() != nbytes())
            throw InvalidParameter("identifier byte length does not match width");
        std::copy(canonical.begin(), canonical.end(), bytes_.begin());
    }

    static Identifier zero(unsigned width_s) {
        check_width(width_s);
        Identifier id;
        id.width_ = width_s;
        return id;
    }

    static Identifier from_u64(unsigned width_s, std::uint64_t v) {
        check_width(width_s);
        Identifier id;
        id.width_ = width_s;
        for (std::size_t i = 0; i < id.nbytes() && v != 0; ++i) {
            id.bytes_[id.nbytes() - 1 - i] = static_cast<std::uint8_t>(v & 0xff);
            v >>= 8;
        }
        return id;
    }

    unsigned width() const { return width_; }
    std::size_t nbytes() const { return (width_ + 7) / 8; }

    BytesView bytes() const { return {bytes_.data(), nbytes()}; }

    /// First `count` bits of the identifier as an integer (count <= 64).
    std::uint64_t top_bits(unsigned count) const {
        if (count == 0) return 0;
        std::uint64_t acc = 0;
        for (unsigned i = 0; i < 8 && i < nbytes(); ++i)
            acc = (acc << 8) | bytes_[i];
        unsigned have = static_cast<unsigned>(std::min<std::size_t>(nbytes(), 8) * 8);
        if (count >= have) return count == have ? acc : acc << std::min(63u, count - have);
        return acc >> (have - count);
    }

    bool is_zero() const {
        return std::all_of(bytes_.begin(), bytes_.begin() + nbytes(),
                           [](std::uint8_t b) { return b == 0; });
    }

    std::strong_ordering operator<=>(const Identifier& other) const {
        int c = std::memcmp(bytes_.data(), other.bytes_.data(),
                            std::max(nbytes(), other.nbytes()));
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    bool operator==(const Identifier& other) const {
        return (*this <=> other) == std::strong_ordering::equal;
    }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out;
        out.reserve(nbytes() * 2);
        for (std::size_t i = 0; i < nbytes(); ++i) {
            out.push_back(digits[bytes_[i] >> 4]);
            out.push_back(digits[bytes_[i] & 0xf]);
        }
        return out;
    }

    static Identifier from_hex(unsigned width_s, const std::string& hex) {
        check_width(width_s);
        Identifier id;
        id.width_ = width_s;
        if (hex.size() != id.nbytes() * 2)
            throw InvalidParameter("hex length does not match identifier width");
        auto nib = [](char c) -> unsigned {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            throw InvalidParameter("bad hex digit");
        };
        for (std::size_t i = 0; i < id.nbytes(); ++i)
            id.bytes_[i] = static_cast<std::uint8_t>((nib(hex[2 * i]) << 4) | nib(hex[2 * i + 1]));
        return id;
    }

private:
    static void check_width(unsigned width_s) {
        if (width_s == 0 || width_s > kMaxBits)
            throw InvalidParameter("identifier width must be in [1, 256]");
    }

    unsigned width_ = 0;
    std::array<std::uint8_t, 32> bytes_{};
};

/// All-ones identifier: the largest value of the given width.
inline Identifier max_identifier(unsigned width_s) {
    std::size_t nbytes = (width_s + 7) / 8;
    Bytes b(nbytes, 0xff);
    unsigned spare = static_cast<unsigned>(nbytes * 8 - width_s);
    if (spare != 0) b[0] = static_cast<std::uint8_t>(0xff >> spare);
    return Identifier(width_s, b);
}

inline std::array<std::uint8_t, 32> sha256(BytesView payload) {
    std::array<std::uint8_t, 32> digest{};
    SHA256(payload.data(), payload.size(), digest.data());
    return digest;
}

/// First width_s bits of SHA-256(payload), big-endian. The random oracle
/// H : {0,1}* -> {0,1}^s every other module builds on.
inline Identifier hash_to_id(BytesView payload, unsigned width_s) {
    if (width_s == 0 || width_s > Identifier::kMaxBits)
        throw InvalidParameter("hash_to_id: width must be in [1, 256]");
    auto digest = sha256(payload);
    std::size_t nbytes = (width_s + 7) / 8;
    Bytes trunc(digest.begin(), digest.begin() + nbytes);
    // A non-byte-aligned width keeps the leading bits: shift the prefix right
    // so the value is a width_s-bit big-endian integer.
    unsigned spare = static_cast<unsigned>(nbytes * 8 - width_s);
    if (spare != 0) {
        std::uint8_t carry = 0;
        for (std::size_t i = 0; i < trunc.size(); ++i) {
            std::uint8_t next = static_cast<std::uint8_t>(trunc[i] << (8 - spare));
            trunc[i] = static_cast<std::uint8_t>((trunc[i] >> spare) | carry);
            carry = next;
        }
    }
    return Identifier(width_s, trunc);
}

}  // namespace lightchain

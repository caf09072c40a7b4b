// Copyright 2026 LightChain Simulator Authors. Licensed under the Apache
// License, Version 2.0. http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <string>

#include "lightchain/identifier.hpp"

namespace lightchain {

// Canonical wire form for everything that gets hashed or signed: a sequence
// of length-prefixed fields (4-byte big-endian length, then the bytes).
// The layout is normative and bit-exact; every hash in the protocol is
// computed over this encoding.
class Encoder {
public:
    Encoder& field(BytesView data) {
        put_u32(static_cast<std::uint32_t>(data.size()));
        buf_.insert(buf_.end(), data.begin(), data.end());
        return *this;
    }

    Encoder& field(const Identifier& id) { return field(id.bytes()); }

    Encoder& field(const std::string& s) {
        return field(BytesView{reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
    }

    Encoder& field_u32(std::uint32_t v) {
        std::uint8_t raw[4] = {
            static_cast<std::uint8_t>(v >> 24), static_cast<std::uint8_t>(v >> 16),
            static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v)};
        return field(BytesView{raw, 4});
    }

    Encoder& field_u64(std::uint64_t v) {
        std::uint8_t raw[8];
        for (int i = 0; i < 8; ++i)
            raw[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
        return field(BytesView{raw, 8});
    }

    const Bytes& bytes() const { return buf_; }

    Identifier hash(unsigned width_s) const { return hash_to_id(buf_, width_s); }

private:
    void put_u32(std::uint32_t v) {
        buf_.push_back(static_cast<std::uint8_t>(v >> 24));
        buf_.push_back(static_cast<std::uint8_t>(v >> 16));
        buf_.push_back(static_cast<std::uint8_t>(v >> 8));
        buf_.push_back(static_cast<std::uint8_t>(v));
    }

    Bytes buf_;
};

}  // namespace lightchain

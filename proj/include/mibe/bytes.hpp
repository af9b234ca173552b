#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mibe {

using Bytes = std::vector<uint8_t>;

std::string to_hex(const Bytes& data);
Bytes from_hex(const std::string& hex);

inline Bytes str_bytes(const std::string& s) {
    return Bytes(s.begin(), s.end());
}

inline void append_bytes(Bytes& out, const Bytes& in) {
    out.insert(out.end(), in.begin(), in.end());
}

void append_u16_be(Bytes& out, uint16_t v);
void append_u32_be(Bytes& out, uint32_t v);
void append_u64_le(Bytes& out, uint64_t v);
uint64_t read_u64_le(const uint8_t* p);

// XOR of two equal-length strings.
Bytes xor_bytes(const Bytes& a, const Bytes& b);

}  // namespace mibe

#pragma once

#include "mibe/bytes.hpp"

namespace mibe {

// SHAKE256 with arbitrary output length. Single primitive behind every hash
// in the library.
Bytes xof(const Bytes& input, size_t out_len);

// SHA-256, used for file integrity checksums.
Bytes sha256(const Bytes& input);

}  // namespace mibe

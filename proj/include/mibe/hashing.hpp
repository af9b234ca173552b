#pragma once

#include <array>
#include <string>

#include "mibe/backend.hpp"
#include "mibe/bytes.hpp"

namespace mibe {

// The five protocol hashes are all instantiated from one XOF with
// per-function tags plus the backend id, so outputs never collide across
// roles or backends.
struct HashConfig {
    std::array<std::string, 5> tags = {"MIBE-H1", "MIBE-H2", "MIBE-H3",
                                       "MIBE-H4", "MIBE-H5"};
    uint16_t n_bits = 256;  // message block length (key-committing scheme)
    uint16_t l_bits = 256;  // mask length (basic scheme payload)

    bool operator==(const HashConfig&) const = default;
};

// Throws on duplicate tags or bit lengths that are not byte multiples.
void validate_hash_config(const HashConfig& config);

// identity string -> G1, binding both authority public keys. Never the
// identity element. Throws Errc::empty_identity.
G1Element h1_identity_to_point(const Backend& backend,
                               const HashConfig& config,
                               const std::string& identity,
                               const MirroredPoint& pkg_pub,
                               const MirroredPoint& pkpo_pub);

// GT -> mask of out_bits bits. On the toy backend the mask is the
// element's exponent, little-endian, zero-padded: toy ciphertexts stay
// checkable by hand.
Bytes h2_gt_mask(const Backend& backend, const HashConfig& config,
                 const GTElement& g, uint16_t out_bits);

inline Bytes h2_gt_mask(const Backend& backend, const HashConfig& config,
                        const GTElement& g) {
    return h2_gt_mask(backend, config, g, config.l_bits);
}

// (nonce, message) -> nonzero scalar; inputs must both be n bits.
Scalar h3_fo_randomness(const Backend& backend, const HashConfig& config,
                        const Bytes& z, const Bytes& m);

// nonce -> n-bit mask.
Bytes h4_payload_mask(const Backend& backend, const HashConfig& config,
                      const Bytes& z);

// GT -> nonzero scalar (the issuing protocol divides by it). On the toy
// backend this is the exponent itself with 0 remapped to 1.
Scalar h5_blind_scalar(const Backend& backend, const HashConfig& config,
                       const GTElement& g);

}  // namespace mibe

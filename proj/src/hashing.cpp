#include "mibe/hashing.hpp"

#include "mibe/errors.hpp"
#include "mibe/xof.hpp"

namespace mibe {

void validate_hash_config(const HashConfig& config) {
    for (size_t i = 0; i < config.tags.size(); ++i) {
        if (config.tags[i].empty()) {
            raise(Errc::length_mismatch, "empty hash tag");
        }
        for (size_t j = i + 1; j < config.tags.size(); ++j) {
            if (config.tags[i] == config.tags[j]) {
                raise(Errc::length_mismatch, "hash tags must be distinct");
            }
        }
    }
    if (config.n_bits == 0 || config.n_bits % 8 != 0 || config.l_bits == 0 ||
        config.l_bits % 8 != 0) {
        raise(Errc::length_mismatch, "block lengths must be byte multiples");
    }
}

namespace {

// tag || 0x00 || backend id || (u32 length || part)*
Bytes frame(const Backend& backend, const std::string& tag,
            std::initializer_list<const Bytes*> parts) {
    Bytes out(tag.begin(), tag.end());
    out.push_back(0x00);
    out.push_back(static_cast<uint8_t>(backend.descriptor().id));
    for (const Bytes* part : parts) {
        append_u32_be(out, static_cast<uint32_t>(part->size()));
        append_bytes(out, *part);
    }
    return out;
}

Scalar nonzero_scalar_from(const Backend& backend, const Bytes& framed) {
    size_t wide = backend.descriptor().scalar_size + 16;
    for (uint32_t ctr = 0;; ++ctr) {
        Bytes input = framed;
        append_u32_be(input, ctr);
        Scalar s = backend.scalar_from_wide_bytes(xof(input, wide));
        if (!backend.scalar_is_zero(s)) return s;
    }
}

}  // namespace

G1Element h1_identity_to_point(const Backend& backend,
                               const HashConfig& config,
                               const std::string& identity,
                               const MirroredPoint& pkg_pub,
                               const MirroredPoint& pkpo_pub) {
    if (identity.empty()) raise(Errc::empty_identity, "empty identity");
    Bytes id = str_bytes(identity);
    return backend.hash_to_g1(frame(backend, config.tags[0],
                                    {&id, &pkg_pub.g1.bytes, &pkg_pub.g2.bytes,
                                     &pkpo_pub.g1.bytes, &pkpo_pub.g2.bytes}));
}

Bytes h2_gt_mask(const Backend& backend, const HashConfig& config,
                 const GTElement& g, uint16_t out_bits) {
    if (out_bits == 0 || out_bits % 8 != 0) {
        raise(Errc::length_mismatch, "mask length must be a byte multiple");
    }
    GTElement checked = backend.parse_gt(g.bytes);
    if (backend.descriptor().id == BackendId::toy) {
        Bytes mask = checked.bytes;  // already little-endian exponent
        mask.resize(out_bits / 8, 0);
        return mask;
    }
    return xof(frame(backend, config.tags[1], {&checked.bytes}), out_bits / 8);
}

Scalar h3_fo_randomness(const Backend& backend, const HashConfig& config,
                        const Bytes& z, const Bytes& m) {
    size_t block = config.n_bits / 8;
    if (z.size() != block || m.size() != block) {
        raise(Errc::length_mismatch, "inputs must be n bits");
    }
    return nonzero_scalar_from(backend, frame(backend, config.tags[2], {&z, &m}));
}

Bytes h4_payload_mask(const Backend& backend, const HashConfig& config,
                      const Bytes& z) {
    if (z.size() != config.n_bits / 8u) {
        raise(Errc::length_mismatch, "input must be n bits");
    }
    return xof(frame(backend, config.tags[3], {&z}), config.n_bits / 8);
}

Scalar h5_blind_scalar(const Backend& backend, const HashConfig& config,
                       const GTElement& g) {
    GTElement checked = backend.parse_gt(g.bytes);
    if (backend.descriptor().id == BackendId::toy) {
        Scalar s{checked.bytes};
        if (backend.scalar_is_zero(s)) return backend.scalar_from_u64(1);
        return s;
    }
    return nonzero_scalar_from(backend,
                               frame(backend, config.tags[4], {&checked.bytes}));
}

}  // namespace mibe

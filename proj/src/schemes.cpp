#include "mibe/schemes.hpp"

#include "mibe/dates.hpp"
#include "mibe/errors.hpp"

namespace mibe {

namespace {

void check_block(const Bytes& m, uint16_t bits, const char* what) {
    if (m.size() != bits / 8u) {
        raise(Errc::length_mismatch, std::string(what) + ": wrong block size");
    }
}

void check_not_expired(const std::string& identity) {
    std::optional<std::string> expiry = identity_expiry(identity);
    if (expiry && date_is_past(*expiry)) {
        raise(Errc::expired_identity, "identity expired on " + *expiry);
    }
}

// The full scheme, parameterized over the pairing partner of Q_ID so the
// single-authority baseline shares the exact code path.
FullCiphertext full_encrypt_core(const Backend& backend,
                                 const HashConfig& hash,
                                 const MirroredPoint& generator,
                                 const G1Element& q_id,
                                 const G2Element& mask_pub, const Bytes& m,
                                 Rng& rng) {
    check_block(m, hash.n_bits, "plaintext");
    Bytes z = rng.bytes(hash.n_bits / 8);
    Scalar r = h3_fo_randomness(backend, hash, z, m);
    G2Element u = backend.mul_g2(r, generator.g2);
    GTElement g = backend.pair(q_id, mask_pub);
    Bytes v = xor_bytes(z, h2_gt_mask(backend, hash, backend.gt_pow(g, r),
                                      hash.n_bits));
    Bytes w = xor_bytes(m, h4_payload_mask(backend, hash, z));
    return FullCiphertext{std::move(u), std::move(v), std::move(w)};
}

std::optional<Bytes> full_decrypt_core(const Backend& backend,
                                       const HashConfig& hash,
                                       const MirroredPoint& generator,
                                       const G1Element& d_id,
                                       const FullCiphertext& c) {
    try {
        if (c.v.size() != hash.n_bits / 8u || c.w.size() != hash.n_bits / 8u) {
            return std::nullopt;
        }
        G2Element u = backend.parse_g2(c.u.bytes);
        if (backend.is_identity(u)) return std::nullopt;
        GTElement shared = backend.pair(d_id, u);
        Bytes z = xor_bytes(c.v, h2_gt_mask(backend, hash, shared, hash.n_bits));
        Bytes m = xor_bytes(c.w, h4_payload_mask(backend, hash, z));
        Scalar r = h3_fo_randomness(backend, hash, z, m);
        if (backend.mul_g2(r, generator.g2) != u) return std::nullopt;
        return m;
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

BasicCiphertext encrypt_basic(const Backend& backend,
                              const SystemParams& params,
                              const std::string& recipient_id, const Bytes& m,
                              Rng& rng) {
    check_block(m, params.hash.l_bits, "plaintext");
    check_not_expired(recipient_id);
    G1Element q_id = identity_point(backend, params, recipient_id);
    Scalar r = backend.random_nonzero_scalar(rng);
    G2Element u = backend.mul_g2(r, params.generator.g2);
    GTElement g = backend.pair(q_id, params.pkpo_pub.g2);
    Bytes v = xor_bytes(m, h2_gt_mask(backend, params.hash,
                                      backend.gt_pow(g, r), params.hash.l_bits));
    return BasicCiphertext{std::move(u), std::move(v)};
}

Bytes decrypt_basic(const Backend& backend, const SystemParams& params,
                    const ExtractedPrivateKey& key, const BasicCiphertext& c) {
    if (c.v.size() != params.hash.l_bits / 8u) {
        raise(Errc::length_mismatch, "ciphertext mask has wrong length");
    }
    G2Element u = backend.parse_g2(c.u.bytes);
    GTElement shared = backend.pair(key.d_id, u);
    return xor_bytes(c.v, h2_gt_mask(backend, params.hash, shared,
                                     params.hash.l_bits));
}

FullCiphertext encrypt_full(const Backend& backend, const SystemParams& params,
                            const std::string& recipient_id, const Bytes& m,
                            Rng& rng) {
    check_not_expired(recipient_id);
    G1Element q_id = identity_point(backend, params, recipient_id);
    return full_encrypt_core(backend, params.hash, params.generator, q_id,
                             params.pkpo_pub.g2, m, rng);
}

std::optional<Bytes> decrypt_full(const Backend& backend,
                                  const SystemParams& params,
                                  const ExtractedPrivateKey& key,
                                  const FullCiphertext& c) {
    return full_decrypt_core(backend, params.hash, params.generator, key.d_id,
                             c);
}

// ---- single-authority baseline ---------------------------------------------

BfSetupResult bf_setup(const Backend& backend, Rng& rng,
                       const HashConfig& hash) {
    validate_hash_config(hash);
    Scalar master = backend.random_nonzero_scalar(rng);
    BfParams params;
    params.backend_id = backend.descriptor().id;
    params.generator =
        MirroredPoint{backend.generator_g1(), backend.generator_g2()};
    params.master_pub = backend.mirrored_base_mul(master);
    params.hash = hash;
    return BfSetupResult{std::move(params), BfMasterSecret{master}};
}

static G1Element bf_identity_point(const Backend& backend,
                                   const BfParams& params,
                                   const std::string& identity) {
    return h1_identity_to_point(backend, params.hash, identity,
                                params.master_pub, params.master_pub);
}

ExtractedPrivateKey bf_extract(const Backend& backend,
                               const BfMasterSecret& secret,
                               const BfParams& params,
                               const std::string& identity) {
    G1Element q_id = bf_identity_point(backend, params, identity);
    return ExtractedPrivateKey{identity, backend.mul_g1(secret.master, q_id),
                               identity_expiry(identity)};
}

FullCiphertext bf_encrypt(const Backend& backend, const BfParams& params,
                          const std::string& recipient_id, const Bytes& m,
                          Rng& rng) {
    check_not_expired(recipient_id);
    G1Element q_id = bf_identity_point(backend, params, recipient_id);
    return full_encrypt_core(backend, params.hash, params.generator, q_id,
                             params.master_pub.g2, m, rng);
}

std::optional<Bytes> bf_decrypt(const Backend& backend, const BfParams& params,
                                const ExtractedPrivateKey& key,
                                const FullCiphertext& c) {
    return full_decrypt_core(backend, params.hash, params.generator, key.d_id,
                             c);
}

// ---- wire format ------------------------------------------------------------

static const char kMagic[4] = {'M', 'I', 'B', 'E'};
constexpr uint8_t kCiphertextVersion = 1;

Bytes encode_ciphertext(const Backend& backend, SchemeId scheme,
                        const AnyCiphertext& c) {
    Bytes out(kMagic, kMagic + 4);
    out.push_back(kCiphertextVersion);
    out.push_back(static_cast<uint8_t>(backend.descriptor().id));
    out.push_back(static_cast<uint8_t>(scheme));
    if (const auto* basic = std::get_if<BasicCiphertext>(&c)) {
        append_u16_be(out, static_cast<uint16_t>(basic->v.size() * 8));
        append_bytes(out, basic->u.bytes);
        append_bytes(out, basic->v);
    } else {
        const auto& full = std::get<FullCiphertext>(c);
        append_u16_be(out, static_cast<uint16_t>(full.v.size() * 8));
        append_bytes(out, full.u.bytes);
        append_bytes(out, full.v);
        append_bytes(out, full.w);
    }
    return out;
}

DecodedCiphertext parse_ciphertext(const Backend& backend,
                                   const Bytes& bytes) {
    if (bytes.size() < 9 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
        raise(Errc::invalid_element, "not a ciphertext");
    }
    if (bytes[4] != kCiphertextVersion) {
        raise(Errc::invalid_element, "unsupported ciphertext version");
    }
    if (bytes[5] != static_cast<uint8_t>(backend.descriptor().id)) {
        raise(Errc::invalid_element, "ciphertext is for a different backend");
    }
    uint8_t scheme_byte = bytes[6];
    if (scheme_byte < 1 || scheme_byte > 3) {
        raise(Errc::invalid_element, "unknown scheme id");
    }
    SchemeId scheme = static_cast<SchemeId>(scheme_byte);
    uint16_t block_bits = static_cast<uint16_t>(bytes[7]) << 8 | bytes[8];
    if (block_bits == 0 || block_bits % 8 != 0) {
        raise(Errc::invalid_element, "bad block length");
    }
    size_t block = block_bits / 8;
    size_t u_size = backend.descriptor().g2_size;
    size_t body = 9;
    size_t expect =
        body + u_size + block * (scheme == SchemeId::basic ? 1 : 2);
    if (bytes.size() != expect) {
        raise(Errc::invalid_element, "ciphertext length mismatch");
    }
    G2Element u =
        backend.parse_g2(Bytes(bytes.begin() + body, bytes.begin() + body + u_size));
    if (backend.is_identity(u)) {
        raise(Errc::invalid_element, "ciphertext U must not be the identity");
    }
    Bytes v(bytes.begin() + body + u_size,
            bytes.begin() + body + u_size + block);
    if (scheme == SchemeId::basic) {
        return DecodedCiphertext{scheme, block_bits,
                                 BasicCiphertext{std::move(u), std::move(v)}};
    }
    Bytes w(bytes.begin() + body + u_size + block, bytes.end());
    return DecodedCiphertext{
        scheme, block_bits,
        FullCiphertext{std::move(u), std::move(v), std::move(w)}};
}

}  // namespace mibe

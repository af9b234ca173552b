#include "mibe/hybrid.hpp"

#include <sodium.h>

#include "mibe/errors.hpp"
#include "mibe/xof.hpp"

namespace mibe {

namespace {

constexpr size_t kNonceBytes = crypto_aead_xchacha20poly1305_ietf_NPUBBYTES;
constexpr size_t kTagBytes = crypto_aead_xchacha20poly1305_ietf_ABYTES;

Bytes derive_dem_key(const Bytes& encapsulated_block) {
    Bytes input = str_bytes("MIBE-DEM");
    input.push_back(0x00);
    append_bytes(input, encapsulated_block);
    return xof(input, crypto_aead_xchacha20poly1305_ietf_KEYBYTES);
}

}  // namespace

Bytes hybrid_encrypt(const Backend& backend, const SystemParams& params,
                     const std::string& recipient_id, const Bytes& plaintext,
                     Rng& rng) {
    if (sodium_init() < 0) raise(Errc::io_error, "sodium_init failed");
    Bytes session_block = rng.bytes(params.hash.n_bits / 8);
    FullCiphertext kem =
        encrypt_full(backend, params, recipient_id, session_block, rng);
    Bytes envelope =
        encode_ciphertext(backend, SchemeId::full, AnyCiphertext{kem});

    Bytes key = derive_dem_key(session_block);
    Bytes nonce = rng.bytes(kNonceBytes);
    Bytes sealed(plaintext.size() + kTagBytes);
    unsigned long long sealed_len = 0;
    crypto_aead_xchacha20poly1305_ietf_encrypt(
        sealed.data(), &sealed_len, plaintext.data(), plaintext.size(),
        nullptr, 0, nullptr, nonce.data(), key.data());
    sealed.resize(sealed_len);

    append_bytes(envelope, nonce);
    append_bytes(envelope, sealed);
    return envelope;
}

std::optional<Bytes> hybrid_decrypt(const Backend& backend,
                                    const SystemParams& params,
                                    const ExtractedPrivateKey& key,
                                    const Bytes& envelope) {
    if (sodium_init() < 0) raise(Errc::io_error, "sodium_init failed");
    size_t kem_size = 9 + backend.descriptor().g2_size +
                      2 * (params.hash.n_bits / 8);
    if (envelope.size() < kem_size + kNonceBytes + kTagBytes) {
        return std::nullopt;
    }
    Bytes kem_bytes(envelope.begin(), envelope.begin() + kem_size);
    std::optional<Bytes> session_block;
    try {
        DecodedCiphertext decoded = parse_ciphertext(backend, kem_bytes);
        const auto* full = std::get_if<FullCiphertext>(&decoded.body);
        if (full == nullptr || decoded.scheme != SchemeId::full) {
            return std::nullopt;
        }
        session_block = decrypt_full(backend, params, key, *full);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (!session_block) return std::nullopt;

    Bytes dem_key = derive_dem_key(*session_block);
    Bytes nonce(envelope.begin() + kem_size,
                envelope.begin() + kem_size + kNonceBytes);
    const uint8_t* sealed = envelope.data() + kem_size + kNonceBytes;
    size_t sealed_len = envelope.size() - kem_size - kNonceBytes;
    Bytes plain(sealed_len);
    unsigned long long plain_len = 0;
    if (crypto_aead_xchacha20poly1305_ietf_decrypt(
            plain.data(), &plain_len, nullptr, sealed, sealed_len, nullptr, 0,
            nonce.data(), dem_key.data()) != 0) {
        return std::nullopt;
    }
    plain.resize(plain_len);
    return plain;
}

}  // namespace mibe

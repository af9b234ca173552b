#pragma once

#include <optional>
#include <string>
#include <variant>

#include "mibe/ceremony.hpp"

namespace mibe {

enum class SchemeId : uint8_t {
    basic = 1,  // <U, V>: one-time-pad mask from the pairing
    full = 2,   // <U, V, W>: committed nonce, decrypt-side validity check
    bf = 3,     // single-authority baseline, same shape as full
};

struct BasicCiphertext {
    G2Element u;  // r * P
    Bytes v;      // m xor H2(g^r), l bits
    bool operator==(const BasicCiphertext&) const = default;
};

struct FullCiphertext {
    G2Element u;  // r * P with r = H3(z, m)
    Bytes v;      // z xor H2(g^r), n bits
    Bytes w;      // m xor H4(z), n bits
    bool operator==(const FullCiphertext&) const = default;
};

BasicCiphertext encrypt_basic(const Backend& backend,
                              const SystemParams& params,
                              const std::string& recipient_id, const Bytes& m,
                              Rng& rng);

Bytes decrypt_basic(const Backend& backend, const SystemParams& params,
                    const ExtractedPrivateKey& key, const BasicCiphertext& c);

FullCiphertext encrypt_full(const Backend& backend, const SystemParams& params,
                            const std::string& recipient_id, const Bytes& m,
                            Rng& rng);

// nullopt is the rejection outcome: tampering and wrong keys are
// indistinguishable by design, and rejection is a value, not an exception.
std::optional<Bytes> decrypt_full(const Backend& backend,
                                  const SystemParams& params,
                                  const ExtractedPrivateKey& key,
                                  const FullCiphertext& c);

// Single-authority baseline sharing the backend: private keys are
// master * Q_ID and the mask pairs against the lone master public key.
// Same ciphertext shape and operation profile as the full scheme.
struct BfMasterSecret {
    Scalar master;
};

struct BfParams {
    BackendId backend_id = BackendId::production;
    uint64_t toy_order = 0;
    MirroredPoint generator;
    MirroredPoint master_pub;
    HashConfig hash;
};

struct BfSetupResult {
    BfParams params;
    BfMasterSecret secret;
};

BfSetupResult bf_setup(const Backend& backend, Rng& rng,
                       const HashConfig& hash = HashConfig{});

ExtractedPrivateKey bf_extract(const Backend& backend,
                               const BfMasterSecret& secret,
                               const BfParams& params,
                               const std::string& identity);

FullCiphertext bf_encrypt(const Backend& backend, const BfParams& params,
                          const std::string& recipient_id, const Bytes& m,
                          Rng& rng);

std::optional<Bytes> bf_decrypt(const Backend& backend, const BfParams& params,
                                const ExtractedPrivateKey& key,
                                const FullCiphertext& c);

// Shared binary layout: "MIBE" | version | backend | scheme |
// block bits (u16, big-endian) | U | V (| W).
using AnyCiphertext = std::variant<BasicCiphertext, FullCiphertext>;

Bytes encode_ciphertext(const Backend& backend, SchemeId scheme,
                        const AnyCiphertext& c);

struct DecodedCiphertext {
    SchemeId scheme;
    uint16_t block_bits;
    AnyCiphertext body;
};

DecodedCiphertext parse_ciphertext(const Backend& backend, const Bytes& bytes);

}  // namespace mibe

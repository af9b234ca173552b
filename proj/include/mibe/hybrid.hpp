#pragma once

#include <optional>

#include "mibe/schemes.hpp"

namespace mibe {

// Files of arbitrary size: a fresh n-bit block is encapsulated with the
// key-committing scheme, an AEAD key is derived from it, and the body is
// sealed under XChaCha20-Poly1305. The envelope opens only when both the
// encapsulation's validity check and the AEAD tag pass.

Bytes hybrid_encrypt(const Backend& backend, const SystemParams& params,
                     const std::string& recipient_id, const Bytes& plaintext,
                     Rng& rng);

std::optional<Bytes> hybrid_decrypt(const Backend& backend,
                                    const SystemParams& params,
                                    const ExtractedPrivateKey& key,
                                    const Bytes& envelope);

}  // namespace mibe

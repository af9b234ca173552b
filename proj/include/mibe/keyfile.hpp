#pragma once

#include <string>

#include "mibe/backend.hpp"
#include "mibe/bytes.hpp"

namespace mibe {

// Checksummed container for everything the CLI persists. Layout:
// "MIBK" | version | backend id | role | u32 payload length | payload |
// SHA-256 over all preceding bytes.

enum class KeyRole : uint8_t {
    pkg_secret = 1,
    pkpo_secret = 2,
    user_keypair = 3,
    private_key = 4,
    params = 5,
    params_partial = 6,
};

const char* key_role_name(KeyRole role);

struct KeyFile {
    uint8_t version = 1;
    BackendId backend_id = BackendId::production;
    KeyRole role = KeyRole::params;
    Bytes payload;
};

Bytes encode_key_file(const KeyFile& file);
// Throws Errc::bad_key_file on bad magic, length, or checksum.
KeyFile decode_key_file(const Bytes& bytes);

void write_key_file(const std::string& path, const KeyFile& file);
// Role mismatch is a refusal: a secret cannot be passed where a public
// artifact is expected, and vice versa.
KeyFile read_key_file(const std::string& path, KeyRole expected_role);

Bytes read_binary_file(const std::string& path);
void write_binary_file(const std::string& path, const Bytes& data);

}  // namespace mibe

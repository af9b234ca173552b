#include "mibe/keyfile.hpp"

#include <fstream>

#include "mibe/errors.hpp"
#include "mibe/xof.hpp"

namespace mibe {

static const char kMagic[4] = {'M', 'I', 'B', 'K'};

const char* key_role_name(KeyRole role) {
    switch (role) {
        case KeyRole::pkg_secret: return "pkg-secret";
        case KeyRole::pkpo_secret: return "pkpo-secret";
        case KeyRole::user_keypair: return "user-keypair";
        case KeyRole::private_key: return "private-key";
        case KeyRole::params: return "params";
        case KeyRole::params_partial: return "params-partial";
    }
    return "unknown";
}

Bytes encode_key_file(const KeyFile& file) {
    Bytes out(kMagic, kMagic + 4);
    out.push_back(file.version);
    out.push_back(static_cast<uint8_t>(file.backend_id));
    out.push_back(static_cast<uint8_t>(file.role));
    append_u32_be(out, static_cast<uint32_t>(file.payload.size()));
    append_bytes(out, file.payload);
    append_bytes(out, sha256(out));
    return out;
}

KeyFile decode_key_file(const Bytes& bytes) {
    if (bytes.size() < 11 + 32 || !std::equal(kMagic, kMagic + 4, bytes.begin())) {
        raise(Errc::bad_key_file, "not a key file");
    }
    KeyFile file;
    file.version = bytes[4];
    if (file.version != 1) raise(Errc::bad_key_file, "unsupported version");
    if (bytes[5] != 1 && bytes[5] != 2) {
        raise(Errc::bad_key_file, "unknown backend id");
    }
    file.backend_id = static_cast<BackendId>(bytes[5]);
    if (bytes[6] < 1 || bytes[6] > 6) raise(Errc::bad_key_file, "unknown role");
    file.role = static_cast<KeyRole>(bytes[6]);
    uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = len << 8 | bytes[7 + i];
    if (bytes.size() != 11u + len + 32u) {
        raise(Errc::bad_key_file, "length mismatch");
    }
    Bytes body(bytes.begin(), bytes.begin() + 11 + len);
    Bytes checksum(bytes.begin() + 11 + len, bytes.end());
    if (sha256(body) != checksum) {
        raise(Errc::bad_key_file, "checksum mismatch");
    }
    file.payload.assign(bytes.begin() + 11, bytes.begin() + 11 + len);
    return file;
}

Bytes read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::io_error, "cannot open " + path);
    Bytes data((std::istreambuf_iterator<char>(in)),
               std::istreambuf_iterator<char>());
    if (in.bad()) raise(Errc::io_error, "read failed: " + path);
    return data;
}

void write_binary_file(const std::string& path, const Bytes& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::io_error, "cannot create " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) raise(Errc::io_error, "write failed: " + path);
}

void write_key_file(const std::string& path, const KeyFile& file) {
    write_binary_file(path, encode_key_file(file));
}

KeyFile read_key_file(const std::string& path, KeyRole expected_role) {
    KeyFile file = decode_key_file(read_binary_file(path));
    if (file.role != expected_role) {
        raise(Errc::bad_key_file, path + " holds a " +
                                      key_role_name(file.role) + ", expected " +
                                      key_role_name(expected_role));
    }
    return file;
}

}  // namespace mibe

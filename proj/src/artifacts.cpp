#include "mibe/artifacts.hpp"

#include "mibe/dates.hpp"
#include "mibe/errors.hpp"
#include "mibe/netproto.hpp"

namespace mibe {

namespace {

Bytes with_identity(const std::string& identity, const Bytes& rest) {
    Bytes out;
    append_u32_be(out, static_cast<uint32_t>(identity.size()));
    append_bytes(out, str_bytes(identity));
    append_bytes(out, rest);
    return out;
}

std::string take_identity(const Bytes& payload, size_t& pos) {
    if (payload.size() < pos + 4) raise(Errc::bad_key_file, "short payload");
    uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = len << 8 | payload[pos + i];
    pos += 4;
    if (len == 0 || len > kMaxIdentityBytes || payload.size() < pos + len) {
        raise(Errc::bad_key_file, "bad identity length");
    }
    std::string id(payload.begin() + pos, payload.begin() + pos + len);
    pos += len;
    return id;
}

Bytes take(const Bytes& payload, size_t& pos, size_t n) {
    if (payload.size() < pos + n) raise(Errc::bad_key_file, "short payload");
    Bytes out(payload.begin() + pos, payload.begin() + pos + n);
    pos += n;
    return out;
}

void done(const Bytes& payload, size_t pos) {
    if (pos != payload.size()) raise(Errc::bad_key_file, "trailing bytes");
}

KeyFile make_file(const Backend& backend, KeyRole role, Bytes payload) {
    return KeyFile{1, backend.descriptor().id, role, std::move(payload)};
}

void check_backend(const Backend& backend, const KeyFile& file) {
    if (file.backend_id != backend.descriptor().id) {
        raise(Errc::bad_key_file, "file was made with a different backend");
    }
}

}  // namespace

KeyFile pkg_secret_to_file(const Backend& backend, const PkgSecret& pkg) {
    return make_file(backend, KeyRole::pkg_secret, pkg.pkg_pr.bytes);
}

PkgSecret pkg_secret_from_file(const Backend& backend, const KeyFile& file) {
    check_backend(backend, file);
    return PkgSecret{backend.parse_scalar(file.payload)};
}

KeyFile pkpo_secret_to_file(const Backend& backend, const PkpoSecret& pkpo) {
    return make_file(backend, KeyRole::pkpo_secret, pkpo.pkpo_pr.bytes);
}

PkpoSecret pkpo_secret_from_file(const Backend& backend, const KeyFile& file) {
    check_backend(backend, file);
    return PkpoSecret{backend.parse_scalar(file.payload)};
}

KeyFile user_keypair_to_file(const Backend& backend, const UserKeypair& user) {
    Bytes rest = user.usk_pr.bytes;
    append_bytes(rest, user.usk_pub.g1.bytes);
    append_bytes(rest, user.usk_pub.g2.bytes);
    return make_file(backend, KeyRole::user_keypair,
                     with_identity(user.identity, rest));
}

UserKeypair user_keypair_from_file(const Backend& backend,
                                   const KeyFile& file) {
    check_backend(backend, file);
    size_t pos = 0;
    UserKeypair user;
    user.identity = take_identity(file.payload, pos);
    user.usk_pr = backend.parse_scalar(
        take(file.payload, pos, backend.descriptor().scalar_size));
    user.usk_pub.g1 = backend.parse_g1(
        take(file.payload, pos, backend.descriptor().g1_size));
    user.usk_pub.g2 = backend.parse_g2(
        take(file.payload, pos, backend.descriptor().g2_size));
    done(file.payload, pos);
    return user;
}

KeyFile private_key_to_file(const Backend& backend,
                            const ExtractedPrivateKey& key) {
    return make_file(backend, KeyRole::private_key,
                     with_identity(key.identity, key.d_id.bytes));
}

ExtractedPrivateKey private_key_from_file(const Backend& backend,
                                          const KeyFile& file) {
    check_backend(backend, file);
    size_t pos = 0;
    std::string identity = take_identity(file.payload, pos);
    G1Element d_id = backend.parse_g1(
        take(file.payload, pos, backend.descriptor().g1_size));
    done(file.payload, pos);
    return ExtractedPrivateKey{identity, std::move(d_id),
                               identity_expiry(identity)};
}

KeyFile params_to_file(const SystemParams& params) {
    return KeyFile{1, params.backend_id, KeyRole::params,
                   params_to_bytes(params)};
}

SystemParams params_from_file(const KeyFile& file) {
    SystemParams params = params_from_bytes(file.payload);
    if (params.backend_id != file.backend_id) {
        raise(Errc::bad_key_file, "backend id disagrees with payload");
    }
    return params;
}

KeyFile partial_params_to_file(const PartialParams& partial) {
    return KeyFile{1, partial.backend_id, KeyRole::params_partial,
                   partial_params_to_bytes(partial)};
}

PartialParams partial_params_from_file(const KeyFile& file) {
    PartialParams partial = partial_params_from_bytes(file.payload);
    if (partial.backend_id != file.backend_id) {
        raise(Errc::bad_key_file, "backend id disagrees with payload");
    }
    return partial;
}

}  // namespace mibe

#pragma once

#include <string>

#include "mibe/ceremony.hpp"
#include "mibe/keyfile.hpp"

namespace mibe {

// Key-file payload codecs for the persisted artifact kinds.

KeyFile pkg_secret_to_file(const Backend& backend, const PkgSecret& pkg);
PkgSecret pkg_secret_from_file(const Backend& backend, const KeyFile& file);

KeyFile pkpo_secret_to_file(const Backend& backend, const PkpoSecret& pkpo);
PkpoSecret pkpo_secret_from_file(const Backend& backend, const KeyFile& file);

KeyFile user_keypair_to_file(const Backend& backend, const UserKeypair& user);
UserKeypair user_keypair_from_file(const Backend& backend,
                                   const KeyFile& file);

KeyFile private_key_to_file(const Backend& backend,
                            const ExtractedPrivateKey& key);
ExtractedPrivateKey private_key_from_file(const Backend& backend,
                                          const KeyFile& file);

KeyFile params_to_file(const SystemParams& params);
SystemParams params_from_file(const KeyFile& file);

KeyFile partial_params_to_file(const PartialParams& partial);
PartialParams partial_params_from_file(const KeyFile& file);

}  // namespace mibe

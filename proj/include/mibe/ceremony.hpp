#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mibe/backend.hpp"
#include "mibe/hashing.hpp"

namespace mibe {

// Two-authority key issuing. The key-issuing authority (PKG) and the key
// privacy authority (PKPO) each contribute one master scalar; the user's
// private key for identity ID is pkg_pr * pkpo_pr * Q_ID, but neither
// authority ever sees it: each side divides its contribution by a blind
// scalar that only the holder of the user's transport secret can cancel.

struct PkgSecret {
    Scalar pkg_pr;
};

struct PkpoSecret {
    Scalar pkpo_pr;
};

struct SystemParams {
    BackendId backend_id = BackendId::production;
    uint64_t toy_order = 0;  // only meaningful for the toy backend
    MirroredPoint generator;
    MirroredPoint pkg_pub;   // pkg_pr * P
    MirroredPoint pkpo_pub;  // pkpo_pr * pkg_pub
    HashConfig hash;
    std::string xof_name = "SHAKE256";

    bool operator==(const SystemParams&) const = default;
};

// Authority-side half of setup, published so the privacy authority can
// finish parameter generation without ever seeing pkg_pr.
struct PartialParams {
    BackendId backend_id = BackendId::production;
    uint64_t toy_order = 0;
    MirroredPoint generator;
    MirroredPoint pkg_pub;
    HashConfig hash;
    std::string xof_name = "SHAKE256";

    bool operator==(const PartialParams&) const = default;
};

struct UserKeypair {
    std::string identity;
    Scalar usk_pr;
    MirroredPoint usk_pub;  // usk_pr * P
};

struct PartialKeyReply {
    G1Element q_pkg;  // pkg_pr * Q_ID, divided by the PKG-side blind
    G1Element t_pkg;  // pkg_pr * q_pkg
    bool operator==(const PartialKeyReply&) const = default;
};

struct SecuredKeyReply {
    G1Element q_pkpo;  // pkpo_pr * q_pkg, divided by the PKPO-side blind
    G1Element t_pkpo;  // pkpo_pr * q_pkpo
    bool operator==(const SecuredKeyReply&) const = default;
};

struct ExtractedPrivateKey {
    std::string identity;
    G1Element d_id;  // pkg_pr * pkpo_pr * Q_ID
    std::optional<std::string> expiry;  // parsed from the identity suffix
};

struct CeremonyTranscript {
    enum class Outcome { pending, completed, failed };

    std::string identity;
    MirroredPoint usk_pub;
    std::optional<PartialKeyReply> partial;
    std::optional<SecuredKeyReply> secured;
    Outcome outcome = Outcome::pending;
    std::string failure_reason;

    // Line-delimited hex records with stage tags, for append-only logs.
    std::vector<std::string> to_lines() const;
    static CeremonyTranscript from_lines(const std::vector<std::string>& lines);
};

// Identity vetting hook; the library default accepts everything.
using VetHook = std::function<bool(const std::string& identity)>;
VetHook accept_all_identities();

struct SetupResult {
    SystemParams params;
    PkgSecret pkg;
    PkpoSecret pkpo;
};

SetupResult setup(const Backend& backend, Rng& rng,
                  const HashConfig& hash = HashConfig{});

// Split setup for separately administered authorities.
struct PkgSetupResult {
    PartialParams partial;
    PkgSecret pkg;
};
PkgSetupResult pkg_setup(const Backend& backend, Rng& rng,
                         const HashConfig& hash = HashConfig{});

struct PkpoSetupResult {
    SystemParams params;
    PkpoSecret pkpo;
};
PkpoSetupResult pkpo_setup(const Backend& backend, Rng& rng,
                           const PartialParams& partial);

UserKeypair user_keygen(const Backend& backend, const SystemParams& params,
                        Rng& rng, const std::string& identity);

G1Element identity_point(const Backend& backend, const SystemParams& params,
                         const std::string& identity);

PartialKeyReply partial_key_supply(const Backend& backend,
                                   const PkgSecret& pkg,
                                   const SystemParams& params,
                                   const std::string& identity,
                                   const MirroredPoint& usk_pub,
                                   const VetHook& vet);

// Checks pair(t_pkg, P) == pair(q_pkg, pkg_pub).
bool verify_partial(const Backend& backend, const SystemParams& params,
                    const PartialKeyReply& reply);

SecuredKeyReply key_securing(const Backend& backend, const PkpoSecret& pkpo,
                             const SystemParams& params,
                             const std::string& identity,
                             const MirroredPoint& usk_pub,
                             const PartialKeyReply& reply);

// Checks pair(t_pkpo, pkg_pub) == pair(q_pkpo, pkpo_pub).
bool verify_secured(const Backend& backend, const SystemParams& params,
                    const SecuredKeyReply& reply);

// Unblinds the secured reply and validates the result; throws
// Errc::validation_failed when the unblinded key does not verify (wrong
// transport secret, tampered reply).
ExtractedPrivateKey key_fetching(const Backend& backend,
                                 const UserKeypair& user,
                                 const SystemParams& params,
                                 const SecuredKeyReply& secured);

// True iff pair(Q_ID, pkpo_pub) == pair(d_id, P).
bool validate_private_key(const Backend& backend, const SystemParams& params,
                          const std::string& identity,
                          const ExtractedPrivateKey& key);

// Judicial recovery: requires both master secrets by construction.
ExtractedPrivateKey court_recover(const Backend& backend, const PkgSecret& pkg,
                                  const PkpoSecret& pkpo,
                                  const SystemParams& params,
                                  const std::string& identity);

struct CeremonyRun {
    ExtractedPrivateKey key;
    CeremonyTranscript transcript;
};

// All three stages in-process, with the user-side checks between stages.
CeremonyRun run_local_ceremony(const Backend& backend, const PkgSecret& pkg,
                               const PkpoSecret& pkpo,
                               const SystemParams& params,
                               const UserKeypair& user,
                               const VetHook& vet = accept_all_identities());

}  // namespace mibe

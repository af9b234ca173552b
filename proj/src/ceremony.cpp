#include "mibe/ceremony.hpp"

#include <sstream>

#include "mibe/dates.hpp"
#include "mibe/errors.hpp"

namespace mibe {

VetHook accept_all_identities() {
    return [](const std::string&) { return true; };
}

SetupResult setup(const Backend& backend, Rng& rng, const HashConfig& hash) {
    PkgSetupResult pkg = pkg_setup(backend, rng, hash);
    PkpoSetupResult pkpo = pkpo_setup(backend, rng, pkg.partial);
    return SetupResult{pkpo.params, pkg.pkg, pkpo.pkpo};
}

PkgSetupResult pkg_setup(const Backend& backend, Rng& rng,
                         const HashConfig& hash) {
    validate_hash_config(hash);
    Scalar pkg_pr = backend.random_nonzero_scalar(rng);
    PartialParams partial;
    partial.backend_id = backend.descriptor().id;
    if (partial.backend_id == BackendId::toy) {
        uint64_t order = 0;
        for (uint8_t b : backend.descriptor().order) order = order << 8 | b;
        partial.toy_order = order;
    }
    partial.generator =
        MirroredPoint{backend.generator_g1(), backend.generator_g2()};
    partial.pkg_pub = backend.mirrored_base_mul(pkg_pr);
    partial.hash = hash;
    return PkgSetupResult{std::move(partial), PkgSecret{pkg_pr}};
}

PkpoSetupResult pkpo_setup(const Backend& backend, Rng& rng,
                           const PartialParams& partial) {
    Scalar pkpo_pr = backend.random_nonzero_scalar(rng);
    SystemParams params;
    params.backend_id = partial.backend_id;
    params.toy_order = partial.toy_order;
    params.generator = partial.generator;
    params.pkg_pub = partial.pkg_pub;
    params.pkpo_pub =
        MirroredPoint{backend.mul_g1(pkpo_pr, partial.pkg_pub.g1),
                      backend.mul_g2(pkpo_pr, partial.pkg_pub.g2)};
    params.hash = partial.hash;
    params.xof_name = partial.xof_name;
    return PkpoSetupResult{std::move(params), PkpoSecret{pkpo_pr}};
}

UserKeypair user_keygen(const Backend& backend, const SystemParams& params,
                        Rng& rng, const std::string& identity) {
    if (identity.empty()) raise(Errc::empty_identity, "empty identity");
    (void)params;
    Scalar usk_pr = backend.random_nonzero_scalar(rng);
    return UserKeypair{identity, usk_pr, backend.mirrored_base_mul(usk_pr)};
}

G1Element identity_point(const Backend& backend, const SystemParams& params,
                         const std::string& identity) {
    return h1_identity_to_point(backend, params.hash, identity,
                                params.pkg_pub, params.pkpo_pub);
}

PartialKeyReply partial_key_supply(const Backend& backend,
                                   const PkgSecret& pkg,
                                   const SystemParams& params,
                                   const std::string& identity,
                                   const MirroredPoint& usk_pub,
                                   const VetHook& vet) {
    if (!vet(identity)) {
        raise(Errc::identity_rejected, "identity rejected: " + identity);
    }
    if (!backend.mirror_consistent(usk_pub)) {
        raise(Errc::invalid_element, "usk_pub halves disagree");
    }
    G1Element q_id = identity_point(backend, params, identity);
    // blind = H5(e(pkg_pr * usk_pub, pkg_pub)); the user later cancels it
    // as H5(e(pkg_pub, pkg_pub)^usk_pr)
    GTElement blind_seed =
        backend.pair(backend.mul_g1(pkg.pkg_pr, usk_pub.g1), params.pkg_pub.g2);
    Scalar blind = h5_blind_scalar(backend, params.hash, blind_seed);
    Scalar factor =
        backend.mul_scalars(pkg.pkg_pr, backend.invert_scalar(blind));
    G1Element q_pkg = backend.mul_g1(factor, q_id);
    G1Element t_pkg = backend.mul_g1(pkg.pkg_pr, q_pkg);
    return PartialKeyReply{q_pkg, t_pkg};
}

bool verify_partial(const Backend& backend, const SystemParams& params,
                    const PartialKeyReply& reply) {
    try {
        return backend.pair(reply.t_pkg, params.generator.g2) ==
               backend.pair(reply.q_pkg, params.pkg_pub.g2);
    } catch (const Error&) {
        return false;
    }
}

SecuredKeyReply key_securing(const Backend& backend, const PkpoSecret& pkpo,
                             const SystemParams& params,
                             const std::string& identity,
                             const MirroredPoint& usk_pub,
                             const PartialKeyReply& reply) {
    (void)identity;
    if (!verify_partial(backend, params, reply)) {
        raise(Errc::verification_failed, "partial key fails the pairing check");
    }
    if (!backend.mirror_consistent(usk_pub)) {
        raise(Errc::invalid_element, "usk_pub halves disagree");
    }
    GTElement blind_seed =
        backend.pair(backend.mul_g1(pkpo.pkpo_pr, usk_pub.g1),
                     params.pkg_pub.g2);
    Scalar blind = h5_blind_scalar(backend, params.hash, blind_seed);
    Scalar factor =
        backend.mul_scalars(pkpo.pkpo_pr, backend.invert_scalar(blind));
    G1Element q_pkpo = backend.mul_g1(factor, reply.q_pkg);
    G1Element t_pkpo = backend.mul_g1(pkpo.pkpo_pr, q_pkpo);
    return SecuredKeyReply{q_pkpo, t_pkpo};
}

bool verify_secured(const Backend& backend, const SystemParams& params,
                    const SecuredKeyReply& reply) {
    try {
        return backend.pair(reply.t_pkpo, params.pkg_pub.g2) ==
               backend.pair(reply.q_pkpo, params.pkpo_pub.g2);
    } catch (const Error&) {
        return false;
    }
}

static ExtractedPrivateKey make_key(const std::string& identity,
                                    G1Element d_id) {
    return ExtractedPrivateKey{identity, std::move(d_id),
                               identity_expiry(identity)};
}

ExtractedPrivateKey key_fetching(const Backend& backend,
                                 const UserKeypair& user,
                                 const SystemParams& params,
                                 const SecuredKeyReply& secured) {
    if (!verify_secured(backend, params, secured)) {
        raise(Errc::validation_failed, "secured reply fails the pairing check");
    }
    // The two unblind factors reproduce the authorities' blinds from the
    // user's side: H5(e(pkg_pub, pkg_pub)^usk_pr) equals the issuing
    // blind, and H5(e(pkpo_pub, P)^usk_pr) equals the securing blind.
    GTElement seed1 = backend.gt_pow(
        backend.pair(params.pkg_pub.g1, params.pkg_pub.g2), user.usk_pr);
    GTElement seed2 = backend.gt_pow(
        backend.pair(params.pkpo_pub.g1, params.generator.g2), user.usk_pr);
    Scalar u1 = h5_blind_scalar(backend, params.hash, seed1);
    Scalar u2 = h5_blind_scalar(backend, params.hash, seed2);
    G1Element d_id =
        backend.mul_g1(backend.mul_scalars(u1, u2), secured.q_pkpo);
    ExtractedPrivateKey key = make_key(user.identity, std::move(d_id));
    if (!validate_private_key(backend, params, user.identity, key)) {
        raise(Errc::validation_failed, "unblinded key fails validation");
    }
    return key;
}

bool validate_private_key(const Backend& backend, const SystemParams& params,
                          const std::string& identity,
                          const ExtractedPrivateKey& key) {
    try {
        G1Element q_id = identity_point(backend, params, identity);
        return backend.pair(q_id, params.pkpo_pub.g2) ==
               backend.pair(key.d_id, params.generator.g2);
    } catch (const Error&) {
        return false;
    }
}

ExtractedPrivateKey court_recover(const Backend& backend, const PkgSecret& pkg,
                                  const PkpoSecret& pkpo,
                                  const SystemParams& params,
                                  const std::string& identity) {
    G1Element q_id = identity_point(backend, params, identity);
    Scalar product = backend.mul_scalars(pkg.pkg_pr, pkpo.pkpo_pr);
    return make_key(identity, backend.mul_g1(product, q_id));
}

CeremonyRun run_local_ceremony(const Backend& backend, const PkgSecret& pkg,
                               const PkpoSecret& pkpo,
                               const SystemParams& params,
                               const UserKeypair& user, const VetHook& vet) {
    CeremonyTranscript transcript;
    transcript.identity = user.identity;
    transcript.usk_pub = user.usk_pub;
    try {
        PartialKeyReply partial = partial_key_supply(
            backend, pkg, params, user.identity, user.usk_pub, vet);
        transcript.partial = partial;
        if (!verify_partial(backend, params, partial)) {
            raise(Errc::verification_failed, "partial key check failed");
        }
        SecuredKeyReply secured = key_securing(backend, pkpo, params,
                                               user.identity, user.usk_pub,
                                               partial);
        transcript.secured = secured;
        ExtractedPrivateKey key = key_fetching(backend, user, params, secured);
        transcript.outcome = CeremonyTranscript::Outcome::completed;
        return CeremonyRun{std::move(key), std::move(transcript)};
    } catch (const Error& err) {
        transcript.outcome = CeremonyTranscript::Outcome::failed;
        transcript.failure_reason = errc_name(err.code());
        throw;
    }
}

// ---- transcript text form -------------------------------------------------

std::vector<std::string> CeremonyTranscript::to_lines() const {
    std::vector<std::string> lines;
    lines.push_back("identity " + to_hex(str_bytes(identity)));
    lines.push_back("usk-pub " + to_hex(usk_pub.g1.bytes) + " " +
                    to_hex(usk_pub.g2.bytes));
    if (partial) {
        lines.push_back("partial " + to_hex(partial->q_pkg.bytes) + " " +
                        to_hex(partial->t_pkg.bytes));
    }
    if (secured) {
        lines.push_back("secured " + to_hex(secured->q_pkpo.bytes) + " " +
                        to_hex(secured->t_pkpo.bytes));
    }
    switch (outcome) {
        case Outcome::pending: lines.push_back("outcome pending"); break;
        case Outcome::completed: lines.push_back("outcome completed"); break;
        case Outcome::failed:
            lines.push_back("outcome failed " + failure_reason);
            break;
    }
    return lines;
}

CeremonyTranscript CeremonyTranscript::from_lines(
    const std::vector<std::string>& lines) {
    CeremonyTranscript t;
    for (const std::string& line : lines) {
        std::istringstream in(line);
        std::string tag;
        in >> tag;
        if (tag == "identity") {
            std::string hex;
            in >> hex;
            Bytes raw = from_hex(hex);
            t.identity.assign(raw.begin(), raw.end());
        } else if (tag == "usk-pub") {
            std::string a, b;
            in >> a >> b;
            t.usk_pub = MirroredPoint{{from_hex(a)}, {from_hex(b)}};
        } else if (tag == "partial") {
            std::string a, b;
            in >> a >> b;
            t.partial = PartialKeyReply{{from_hex(a)}, {from_hex(b)}};
        } else if (tag == "secured") {
            std::string a, b;
            in >> a >> b;
            t.secured = SecuredKeyReply{{from_hex(a)}, {from_hex(b)}};
        } else if (tag == "outcome") {
            std::string state;
            in >> state;
            if (state == "completed") {
                t.outcome = Outcome::completed;
            } else if (state == "failed") {
                t.outcome = Outcome::failed;
                in >> t.failure_reason;
            } else {
                t.outcome = Outcome::pending;
            }
        } else {
            raise(Errc::io_error, "unknown transcript tag: " + tag);
        }
    }
    return t;
}

}  // namespace mibe

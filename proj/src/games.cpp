#include "mibe/games.hpp"

#include <cmath>

#include "mibe/errors.hpp"

namespace mibe {

namespace {
// Unwinds a trial on a rule breach; caught by run_game and scored a loss.
struct TrialForfeit {};
}  // namespace

const char* oracle_op_name(OracleOp op) {
    switch (op) {
        case OracleOp::extract: return "extract";
        case OracleOp::partial_extract: return "partial-extract";
        case OracleOp::request_pk: return "request-pk";
        case OracleOp::replace_pk: return "replace-pk";
        case OracleOp::decrypt_query: return "decrypt";
        case OracleOp::out_of_band_grant: return "oob-grant";
    }
    return "unknown";
}

size_t OracleLedger::count(OracleOp op) const {
    size_t n = 0;
    for (const LedgerEntry& e : entries) {
        if (e.op == op) ++n;
    }
    return n;
}

bool OracleLedger::has_violation() const {
    for (const LedgerEntry& e : entries) {
        if (!e.allowed) return true;
    }
    return false;
}

GameOutcome estimate_outcome(uint64_t trials, uint64_t wins,
                             uint64_t forfeits) {
    GameOutcome out;
    out.trials = trials;
    out.wins = wins;
    out.forfeits = forfeits;
    if (trials == 0) return out;
    double p = static_cast<double>(wins) / static_cast<double>(trials);
    out.advantage = 2.0 * (p - 0.5);
    out.ci_half_width =
        2.0 * 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return out;
}

// ---- TrialOracles -----------------------------------------------------------

TrialOracles::TrialOracles(const Backend& backend, const GameConfig& config,
                           const SetupResult& system, Rng& challenger_rng,
                           Rng& adversary_rng)
    : backend_(backend),
      config_(config),
      system_(system),
      challenger_rng_(challenger_rng),
      adversary_rng_(adversary_rng) {
    if (config_.rules.master_key_provided) {
        oob_.pkg_pr = system_.pkg.pkg_pr;
        grant("master-key");
    }
    if (config_.grants.pkpo_secret) {
        oob_.pkpo_pr = system_.pkpo.pkpo_pr;
        grant("pkpo-secret");
    }
}

size_t TrialOracles::block_bytes() const {
    return (config_.scheme == SchemeId::basic ? params().hash.l_bits
                                              : params().hash.n_bits) /
           8;
}

void TrialOracles::log(OracleOp op, const std::string& identity, bool allowed,
                       const std::string& note) {
    ledger_.entries.push_back(LedgerEntry{op, identity, phase_, allowed, note});
}

void TrialOracles::forfeit(OracleOp op, const std::string& identity,
                           const std::string& why) {
    log(op, identity, false, why);
    throw TrialForfeit{};
}

void TrialOracles::grant(const std::string& what) {
    log(OracleOp::out_of_band_grant, "", true, what);
}

const MirroredPoint& TrialOracles::directory_pk(const std::string& identity) {
    auto it = directory_.find(identity);
    if (it != directory_.end()) return it->second;
    UserKeypair user =
        user_keygen(backend_, system_.params, challenger_rng_, identity);
    directory_[identity] = user.usk_pub;
    honest_users_.emplace(identity, std::move(user));
    return directory_[identity];
}

ExtractedPrivateKey TrialOracles::extract(const std::string& identity) {
    if (config_.rules.type == AdversaryType::type_i && !replaced_.empty()) {
        forfeit(OracleOp::extract, identity,
                "no private-key extraction once any public key was replaced");
    }
    if (challenge_id_ && identity == *challenge_id_) {
        forfeit(OracleOp::extract, identity,
                "extraction of the challenge identity");
    }
    log(OracleOp::extract, identity, true, "");
    return court_recover(backend_, system_.pkg, system_.pkpo, system_.params,
                         identity);
}

PartialKeyReply TrialOracles::partial_extract(const std::string& identity) {
    log(OracleOp::partial_extract, identity, true, "");
    return partial_key_supply(backend_, system_.pkg, system_.params, identity,
                              directory_pk(identity), accept_all_identities());
}

MirroredPoint TrialOracles::request_pk(const std::string& identity) {
    log(OracleOp::request_pk, identity, true, "");
    return directory_pk(identity);
}

void TrialOracles::replace_pk(const std::string& identity,
                              const MirroredPoint& pk) {
    if (config_.rules.type == AdversaryType::type_ii) {
        forfeit(OracleOp::replace_pk, identity,
                "public-key replacement is not allowed with the master key");
    }
    log(OracleOp::replace_pk, identity, true, "");
    directory_pk(identity);  // ensure the entry exists
    directory_[identity] = pk;
    replaced_.insert(identity);
}

std::optional<Bytes> TrialOracles::decrypt_query(const std::string& identity,
                                                 const Bytes& encoded_ct) {
    if (config_.kind == GameKind::ind_cpa) {
        forfeit(OracleOp::decrypt_query, identity,
                "no decryption oracle in the chosen-plaintext game");
    }
    if (phase_ == 2 && challenge_ct_ && encoded_ct == *challenge_ct_ &&
        challenge_id_ && identity == *challenge_id_) {
        forfeit(OracleOp::decrypt_query, identity,
                "decryption of the challenge ciphertext");
    }
    log(OracleOp::decrypt_query, identity, true, "");
    ExtractedPrivateKey key = court_recover(backend_, system_.pkg,
                                            system_.pkpo, system_.params,
                                            identity);
    try {
        DecodedCiphertext decoded = parse_ciphertext(backend_, encoded_ct);
        if (const auto* basic = std::get_if<BasicCiphertext>(&decoded.body)) {
            return decrypt_basic(backend_, system_.params, key, *basic);
        }
        return decrypt_full(backend_, system_.params, key,
                            std::get<FullCiphertext>(decoded.body));
    } catch (const Error&) {
        return std::nullopt;
    }
}

void TrialOracles::fix_challenge(const Challenge& challenge) {
    size_t block = block_bytes();
    if (challenge.m0.size() != block || challenge.m1.size() != block ||
        challenge.identity.empty()) {
        forfeit(OracleOp::extract, challenge.identity,
                "malformed challenge choice");
    }
    // retroactive phase-1 rules against the chosen identity
    for (const LedgerEntry& e : ledger_.entries) {
        if (e.identity != challenge.identity || !e.allowed) continue;
        if (e.op == OracleOp::extract) {
            forfeit(OracleOp::extract, challenge.identity,
                    "challenge identity was extracted in phase 1");
        }
        if (config_.rules.type == AdversaryType::type_i &&
            (e.op == OracleOp::partial_extract ||
             e.op == OracleOp::replace_pk)) {
            forfeit(e.op, challenge.identity,
                    "challenge identity was touched before the challenge");
        }
    }
    challenge_id_ = challenge.identity;
}

// ---- run_game ---------------------------------------------------------------

GameOutcome run_game(const Backend& backend, const GameConfig& config,
                     const AdversaryFactory& factory, uint64_t trials,
                     uint64_t seed, const TrialObserver& observer) {
    if (backend.descriptor().id == BackendId::toy) {
        raise(Errc::backend_refused,
              "advantage estimation on the toy backend is meaningless");
    }
    if (trials == 0) raise(Errc::rule_violation, "trials must be >= 1");
    if (config.scheme == SchemeId::bf) {
        raise(Errc::rule_violation, "games cover the two-authority schemes");
    }
    uint64_t wins = 0;
    uint64_t forfeits = 0;
    for (uint64_t trial = 0; trial < trials; ++trial) {
        SeededRng challenger_rng(seed, 2 * trial);
        SeededRng adversary_rng(seed, 2 * trial + 1);
        SetupResult system = setup(backend, challenger_rng);
        TrialOracles ctx(backend, config, system, challenger_rng,
                         adversary_rng);
        std::unique_ptr<Adversary> adversary = factory();
        bool won = false;
        bool forfeited = false;
        try {
            adversary->phase1(ctx);
            Challenge challenge = adversary->choose_challenge(ctx);
            ctx.fix_challenge(challenge);
            int b = static_cast<int>(challenger_rng.next_u64() & 1);
            const Bytes& mb = (b == 0) ? challenge.m0 : challenge.m1;
            Bytes encoded;
            try {
                if (config.scheme == SchemeId::basic) {
                    encoded = encode_ciphertext(
                        backend, SchemeId::basic,
                        encrypt_basic(backend, system.params,
                                      challenge.identity, mb, challenger_rng));
                } else {
                    encoded = encode_ciphertext(
                        backend, SchemeId::full,
                        encrypt_full(backend, system.params,
                                     challenge.identity, mb, challenger_rng));
                }
            } catch (const Error&) {
                throw TrialForfeit{};  // unencryptable challenge choice
            }
            ctx.challenge_ct_ = encoded;
            if (config.grants.target_key) {
                ctx.oob_.target_key =
                    court_recover(backend, system.pkg, system.pkpo,
                                  system.params, challenge.identity);
                ctx.grant("target-key");
            }
            ctx.phase_ = 2;
            adversary->phase2(ctx, encoded);
            int guess = adversary->guess(ctx);
            won = (guess == b);
        } catch (const TrialForfeit&) {
            forfeited = true;
            ++forfeits;
        }
        if (won) ++wins;
        if (observer) observer(trial, ctx.ledger(), forfeited, won);
    }
    return estimate_outcome(trials, wins, forfeits);
}

// ---- built-in strategies ------------------------------------------------------

namespace {

Bytes block_of(TrialOracles& ctx, uint8_t fill) {
    return Bytes(ctx.block_bytes(), fill);
}

Challenge default_challenge(TrialOracles& ctx) {
    return Challenge{block_of(ctx, 0x00), block_of(ctx, 0xff),
                     "target@example.com"};
}

std::optional<Bytes> local_decrypt(TrialOracles& ctx, const G1Element& d_id,
                                   const Bytes& encoded) {
    ExtractedPrivateKey key{"", d_id, std::nullopt};
    try {
        DecodedCiphertext decoded = parse_ciphertext(ctx.backend(), encoded);
        if (const auto* basic = std::get_if<BasicCiphertext>(&decoded.body)) {
            return decrypt_basic(ctx.backend(), ctx.params(), key, *basic);
        }
        return decrypt_full(ctx.backend(), ctx.params(), key,
                            std::get<FullCiphertext>(decoded.body));
    } catch (const Error&) {
        return std::nullopt;
    }
}

int guess_from_plaintext(TrialOracles& ctx, const std::optional<Bytes>& m,
                         const Challenge& challenge) {
    if (m && *m == challenge.m0) return 0;
    if (m && *m == challenge.m1) return 1;
    return static_cast<int>(ctx.rng().next_u64() & 1);
}

// Baseline: no oracle use, uniform guess.
class RandomGuesser final : public Adversary {
   public:
    Challenge choose_challenge(TrialOracles& ctx) override {
        challenge_ = default_challenge(ctx);
        return challenge_;
    }
    int guess(TrialOracles& ctx) override {
        return static_cast<int>(ctx.rng().next_u64() & 1);
    }

   private:
    Challenge challenge_;
};

// Perfect distinguisher: decrypts the challenge with the stolen key.
class KeyThief final : public Adversary {
   public:
    Challenge choose_challenge(TrialOracles& ctx) override {
        challenge_ = default_challenge(ctx);
        return challenge_;
    }
    int guess(TrialOracles& ctx) override {
        std::optional<Bytes> m = local_decrypt(
            ctx, ctx.oob().target_key->d_id, *ctx.challenge_ciphertext());
        return guess_from_plaintext(ctx, m, challenge_);
    }

   private:
    Challenge challenge_;
};

// A lone issuing authority: forms pkg_pr * Q_ID and tries to use it as the
// private key. If the blinded split does its job this decrypts nothing.
class MasterKeyHolder final : public Adversary {
   public:
    explicit MasterKeyHolder(bool with_pkpo) : with_pkpo_(with_pkpo) {}

    Challenge choose_challenge(TrialOracles& ctx) override {
        challenge_ = default_challenge(ctx);
        return challenge_;
    }
    int guess(TrialOracles& ctx) override {
        const Backend& backend = ctx.backend();
        G1Element q_id = identity_point(backend, ctx.params(),
                                        challenge_.identity);
        Scalar factor = *ctx.oob().pkg_pr;
        if (with_pkpo_ && ctx.oob().pkpo_pr) {
            factor = backend.mul_scalars(factor, *ctx.oob().pkpo_pr);
        }
        G1Element forged = backend.mul_g1(factor, q_id);
        std::optional<Bytes> m =
            local_decrypt(ctx, forged, *ctx.challenge_ciphertext());
        return guess_from_plaintext(ctx, m, challenge_);
    }

   private:
    bool with_pkpo_;
    Challenge challenge_;
};

// Resubmits the challenge ciphertext verbatim; forfeits by rule.
class ReplayAttacker final : public Adversary {
   public:
    Challenge choose_challenge(TrialOracles& ctx) override {
        challenge_ = default_challenge(ctx);
        return challenge_;
    }
    void phase2(TrialOracles& ctx, const Bytes& challenge_ct) override {
        (void)ctx.decrypt_query(challenge_.identity, challenge_ct);
    }
    int guess(TrialOracles& ctx) override {
        return static_cast<int>(ctx.rng().next_u64() & 1);
    }

   private:
    Challenge challenge_;
};

std::vector<BuiltinAdversary> make_catalog() {
    std::vector<BuiltinAdversary> catalog;

    GameConfig cpa_i;
    cpa_i.scheme = SchemeId::full;
    cpa_i.kind = GameKind::ind_cpa;
    cpa_i.rules = AdversaryRules::for_type(AdversaryType::type_i);

    catalog.push_back({"random-guesser", "no oracle use, uniform guess",
                       cpa_i,
                       [] { return std::make_unique<RandomGuesser>(); }});

    GameConfig thief = cpa_i;
    thief.grants.target_key = true;
    catalog.push_back({"key-thief",
                       "handed the target private key out of band", thief,
                       [] { return std::make_unique<KeyThief>(); }});

    GameConfig holder = cpa_i;
    holder.rules = AdversaryRules::for_type(AdversaryType::type_ii);
    catalog.push_back({"master-key-holder",
                       "forms pkg_pr * Q_ID and attempts decryption", holder,
                       [] { return std::make_unique<MasterKeyHolder>(false); }});

    GameConfig colluding = holder;
    colluding.grants.pkpo_secret = true;
    catalog.push_back({"master-key-holder-with-pkpo",
                       "both master scalars: the judicial-recovery key",
                       colluding,
                       [] { return std::make_unique<MasterKeyHolder>(true); }});

    GameConfig replay = cpa_i;
    replay.kind = GameKind::ind_cca;
    catalog.push_back({"replay-attacker",
                       "resubmits the challenge ciphertext in phase 2",
                       replay,
                       [] { return std::make_unique<ReplayAttacker>(); }});

    return catalog;
}

}  // namespace

const std::vector<BuiltinAdversary>& builtin_adversaries() {
    static const std::vector<BuiltinAdversary> catalog = make_catalog();
    return catalog;
}

const BuiltinAdversary* find_adversary(const std::string& name) {
    for (const BuiltinAdversary& a : builtin_adversaries()) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

}  // namespace mibe

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mibe/schemes.hpp"

namespace mibe {

// Executable indistinguishability games. These estimate the advantage of
// concrete strategies empirically; they are sanity checks on the
// implementation, not security proofs.

enum class AdversaryType { type_i, type_ii };
enum class GameKind { ind_cpa, ind_cca };

struct AdversaryRules {
    AdversaryType type = AdversaryType::type_i;
    bool master_key_provided = false;  // handed pkg_pr at trial start

    // Type I gets no master key; Type II gets it but may never replace
    // public keys.
    static AdversaryRules for_type(AdversaryType t) {
        return AdversaryRules{t, t == AdversaryType::type_ii};
    }
};

enum class OracleOp {
    extract,
    partial_extract,
    request_pk,
    replace_pk,
    decrypt_query,
    out_of_band_grant,
};

const char* oracle_op_name(OracleOp op);

struct LedgerEntry {
    OracleOp op;
    std::string identity;
    int phase = 0;
    bool allowed = true;
    std::string note;
};

struct OracleLedger {
    std::vector<LedgerEntry> entries;

    size_t count(OracleOp op) const;
    bool has_violation() const;
};

struct GameOutcome {
    uint64_t trials = 0;
    uint64_t wins = 0;
    uint64_t forfeits = 0;
    double advantage = 0.0;       // 2*(wins/trials - 1/2)
    double ci_half_width = 0.0;   // 95% normal approximation
};

// Advantage estimate with confidence half-width from raw tallies.
GameOutcome estimate_outcome(uint64_t trials, uint64_t wins,
                             uint64_t forfeits);

// Extras the harness may hand a strategy outside the oracle interface.
// Every grant is recorded in the ledger.
struct OutOfBand {
    std::optional<Scalar> pkg_pr;                    // Type II master key
    std::optional<Scalar> pkpo_pr;                   // judicial-recovery runs
    std::optional<ExtractedPrivateKey> target_key;   // stolen challenge key
};

struct OobGrants {
    bool target_key = false;
    bool pkpo_secret = false;
};

struct Challenge {
    Bytes m0;
    Bytes m1;
    std::string identity;
};

class TrialOracles;

// Strategy callback protocol: phase1 -> choose_challenge -> phase2 ->
// guess. A fresh instance runs each trial.
class Adversary {
   public:
    virtual ~Adversary() = default;
    virtual void phase1(TrialOracles&) {}
    virtual Challenge choose_challenge(TrialOracles&) = 0;
    virtual void phase2(TrialOracles&, const Bytes& challenge_ct) {
        (void)challenge_ct;
    }
    virtual int guess(TrialOracles&) = 0;
};

struct GameConfig {
    SchemeId scheme = SchemeId::full;  // basic or full
    GameKind kind = GameKind::ind_cpa;
    AdversaryRules rules = AdversaryRules::for_type(AdversaryType::type_i);
    OobGrants grants;
};

// Oracle surface for one trial. Rule breaches forfeit the trial
// immediately; every call, allowed or not, lands in the ledger.
class TrialOracles {
   public:
    TrialOracles(const Backend& backend, const GameConfig& config,
                 const SetupResult& system, Rng& challenger_rng,
                 Rng& adversary_rng);

    const Backend& backend() const { return backend_; }
    const SystemParams& params() const { return system_.params; }
    const GameConfig& config() const { return config_; }
    const OracleLedger& ledger() const { return ledger_; }
    const OutOfBand& oob() const { return oob_; }
    Rng& rng() { return adversary_rng_; }
    int phase() const { return phase_; }
    size_t block_bytes() const;
    const std::optional<Bytes>& challenge_ciphertext() const {
        return challenge_ct_;
    }

    ExtractedPrivateKey extract(const std::string& identity);
    PartialKeyReply partial_extract(const std::string& identity);
    MirroredPoint request_pk(const std::string& identity);
    void replace_pk(const std::string& identity, const MirroredPoint& pk);
    std::optional<Bytes> decrypt_query(const std::string& identity,
                                       const Bytes& encoded_ct);

   private:
    friend GameOutcome run_game(const Backend&, const GameConfig&,
                                const std::function<std::unique_ptr<Adversary>()>&,
                                uint64_t, uint64_t,
                                const std::function<void(uint64_t,
                                                         const OracleLedger&,
                                                         bool, bool)>&);

    void log(OracleOp op, const std::string& identity, bool allowed,
             const std::string& note);
    [[noreturn]] void forfeit(OracleOp op, const std::string& identity,
                              const std::string& why);
    void grant(const std::string& what);
    const MirroredPoint& directory_pk(const std::string& identity);
    void fix_challenge(const Challenge& challenge);  // retro rule checks

    const Backend& backend_;
    const GameConfig& config_;
    const SetupResult& system_;
    Rng& challenger_rng_;
    Rng& adversary_rng_;
    OracleLedger ledger_;
    OutOfBand oob_;
    int phase_ = 1;
    std::map<std::string, UserKeypair> honest_users_;
    std::map<std::string, MirroredPoint> directory_;
    std::set<std::string> replaced_;
    std::optional<std::string> challenge_id_;
    std::optional<Bytes> challenge_ct_;
};

using AdversaryFactory = std::function<std::unique_ptr<Adversary>()>;
using TrialObserver = std::function<void(uint64_t trial,
                                         const OracleLedger& ledger,
                                         bool forfeited, bool won)>;

// Per trial: fresh setup, phase 1, challenge encryption under a random
// bit, phase 2, guess. Forfeited trials score as losses. Statistical
// claims need real hardness, so the toy backend is refused.
GameOutcome run_game(const Backend& backend, const GameConfig& config,
                     const AdversaryFactory& factory, uint64_t trials,
                     uint64_t seed, const TrialObserver& observer = {});

struct BuiltinAdversary {
    std::string name;
    std::string description;
    GameConfig config;
    AdversaryFactory factory;
};

const std::vector<BuiltinAdversary>& builtin_adversaries();
const BuiltinAdversary* find_adversary(const std::string& name);

}  // namespace mibe

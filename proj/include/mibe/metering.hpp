#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mibe/backend.hpp"

namespace mibe {

// Tallies of the costed algebra operations: scalar multiplications in the
// source groups (M), pairings (P), and target-group exponentiations (E).
// Hash-to-point and scalar inversions are tallied too but reported
// separately; they are outside the M/P/E taxonomy.
struct OpCounter {
    std::string phase;
    uint64_t scalar_mults = 0;
    uint64_t pairings = 0;
    uint64_t gt_exps = 0;
    uint64_t hash_to_points = 0;
    uint64_t scalar_inversions = 0;

    bool operator==(const OpCounter&) const = default;
};

// Pass-through backend that counts the calls made on it. Everything else
// delegates, so metered and unmetered runs return identical values.
class MeteredBackend final : public Backend {
   public:
    MeteredBackend(const Backend& inner, OpCounter& counter)
        : inner_(inner), counter_(counter) {}

    const BackendDescriptor& descriptor() const override {
        return inner_.descriptor();
    }
    G1Element generator_g1() const override { return inner_.generator_g1(); }
    G2Element generator_g2() const override { return inner_.generator_g2(); }
    G1Element identity_g1() const override { return inner_.identity_g1(); }
    G2Element identity_g2() const override { return inner_.identity_g2(); }
    GTElement identity_gt() const override { return inner_.identity_gt(); }

    GTElement pair(const G1Element& a, const G2Element& b) const override {
        ++counter_.pairings;
        return inner_.pair(a, b);
    }
    G1Element mul_g1(const Scalar& k, const G1Element& a) const override {
        ++counter_.scalar_mults;
        return inner_.mul_g1(k, a);
    }
    G2Element mul_g2(const Scalar& k, const G2Element& a) const override {
        ++counter_.scalar_mults;
        return inner_.mul_g2(k, a);
    }
    GTElement gt_pow(const GTElement& g, const Scalar& k) const override {
        ++counter_.gt_exps;
        return inner_.gt_pow(g, k);
    }
    G1Element hash_to_g1(const Bytes& framed_input) const override {
        ++counter_.hash_to_points;
        return inner_.hash_to_g1(framed_input);
    }
    Scalar invert_scalar(const Scalar& a) const override {
        ++counter_.scalar_inversions;
        return inner_.invert_scalar(a);
    }

    G1Element parse_g1(const Bytes& b) const override {
        return inner_.parse_g1(b);
    }
    G2Element parse_g2(const Bytes& b) const override {
        return inner_.parse_g2(b);
    }
    GTElement parse_gt(const Bytes& b) const override {
        return inner_.parse_gt(b);
    }
    Scalar scalar_from_u64(uint64_t v) const override {
        return inner_.scalar_from_u64(v);
    }
    Scalar parse_scalar(const Bytes& b) const override {
        return inner_.parse_scalar(b);
    }
    Scalar scalar_from_wide_bytes(const Bytes& w) const override {
        return inner_.scalar_from_wide_bytes(w);
    }
    Scalar add_scalars(const Scalar& a, const Scalar& b) const override {
        return inner_.add_scalars(a, b);
    }
    Scalar mul_scalars(const Scalar& a, const Scalar& b) const override {
        return inner_.mul_scalars(a, b);
    }
    bool scalar_is_zero(const Scalar& a) const override {
        return inner_.scalar_is_zero(a);
    }
    Scalar random_scalar(Rng& rng) const override {
        return inner_.random_scalar(rng);
    }

   private:
    const Backend& inner_;
    OpCounter& counter_;
};

// Runs the thunk against a counting wrapper of the backend. Phases must
// not nest; Errc::nested_metering otherwise.
OpCounter metered_run(const std::string& phase, const Backend& backend,
                      const std::function<void(const Backend&)>& thunk);

// One row of the cost profile, compared against the published reference
// counts where a reference exists.
struct ProfileRow {
    enum class Verdict { match, mismatch, report_only };

    OpCounter counts;
    bool has_reference = false;
    uint64_t ref_m = 0;
    uint64_t ref_p = 0;
    uint64_t ref_e = 0;
    Verdict verdict = Verdict::report_only;
};

// Reference profile per phase name: encrypt is 1M+1P+1E, decrypt 1M+1P;
// keygen has no agreed single-entity accounting and is report-only.
std::vector<ProfileRow> profile_report(const std::vector<OpCounter>& phases);

std::string render_profile_table(const std::vector<ProfileRow>& rows);

}  // namespace mibe

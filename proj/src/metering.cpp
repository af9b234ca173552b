#include "mibe/metering.hpp"

#include <sstream>

#include "mibe/errors.hpp"

namespace mibe {

namespace {
thread_local bool g_metering_active = false;

struct MeteringGuard {
    MeteringGuard() {
        if (g_metering_active) {
            raise(Errc::nested_metering, "metering phases must not nest");
        }
        g_metering_active = true;
    }
    ~MeteringGuard() { g_metering_active = false; }
};
}  // namespace

OpCounter metered_run(const std::string& phase, const Backend& backend,
                      const std::function<void(const Backend&)>& thunk) {
    MeteringGuard guard;
    OpCounter counter;
    counter.phase = phase;
    MeteredBackend metered(backend, counter);
    thunk(metered);
    return counter;
}

std::vector<ProfileRow> profile_report(const std::vector<OpCounter>& phases) {
    std::vector<ProfileRow> rows;
    rows.reserve(phases.size());
    for (const OpCounter& counts : phases) {
        ProfileRow row;
        row.counts = counts;
        if (counts.phase == "encrypt") {
            row.has_reference = true;
            row.ref_m = 1;
            row.ref_p = 1;
            row.ref_e = 1;
        } else if (counts.phase == "decrypt") {
            row.has_reference = true;
            row.ref_m = 1;
            row.ref_p = 1;
            row.ref_e = 0;
        }
        if (row.has_reference) {
            bool ok = counts.scalar_mults == row.ref_m &&
                      counts.pairings == row.ref_p &&
                      counts.gt_exps == row.ref_e;
            row.verdict =
                ok ? ProfileRow::Verdict::match : ProfileRow::Verdict::mismatch;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

static std::string cost_string(uint64_t m, uint64_t p, uint64_t e) {
    std::ostringstream out;
    out << m << "M+" << p << "P+" << e << "E";
    return out.str();
}

std::string render_profile_table(const std::vector<ProfileRow>& rows) {
    std::ostringstream out;
    out << "phase       measured        reference       verdict     extra\n";
    for (const ProfileRow& row : rows) {
        std::string measured = cost_string(row.counts.scalar_mults,
                                           row.counts.pairings,
                                           row.counts.gt_exps);
        std::string reference =
            row.has_reference ? cost_string(row.ref_m, row.ref_p, row.ref_e)
                              : "-";
        const char* verdict = "REPORT-ONLY";
        if (row.verdict == ProfileRow::Verdict::match) verdict = "MATCH";
        if (row.verdict == ProfileRow::Verdict::mismatch) verdict = "MISMATCH";
        std::ostringstream extra;
        extra << row.counts.hash_to_points << "H+"
              << row.counts.scalar_inversions << "I";
        out << row.counts.phase;
        for (size_t i = row.counts.phase.size(); i < 12; ++i) out << ' ';
        out << measured;
        for (size_t i = measured.size(); i < 16; ++i) out << ' ';
        out << reference;
        for (size_t i = reference.size(); i < 16; ++i) out << ' ';
        out << verdict;
        for (size_t i = std::string(verdict).size(); i < 12; ++i) out << ' ';
        out << extra.str() << "\n";
    }
    return out.str();
}

}  // namespace mibe

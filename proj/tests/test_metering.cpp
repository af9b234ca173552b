#include <doctest.h>

#include "mibe/errors.hpp"
#include "mibe/metering.hpp"
#include "mibe/rng.hpp"
#include "mibe/schemes.hpp"

using namespace mibe;

namespace {

struct System {
    std::unique_ptr<Backend> backend;
    SetupResult system;
    explicit System(BackendId id)
        : backend(make_backend(id, 101)), system([this] {
              SeededRng rng(41);
              return setup(*backend, rng);
          }()) {}
};

OpCounter count_encrypt(const System& sys, uint64_t seed) {
    SeededRng rng(seed);
    Bytes m = rng.bytes(32);
    return metered_run("encrypt", *sys.backend, [&](const Backend& b) {
        (void)encrypt_full(b, sys.system.params, "meter@example.com", m, rng);
    });
}

}  // namespace

TEST_CASE("encrypt costs one multiplication, one pairing, one exponentiation") {
    System sys(BackendId::production);
    OpCounter counts = count_encrypt(sys, 1);
    CHECK(counts.scalar_mults == 1);
    CHECK(counts.pairings == 1);
    CHECK(counts.gt_exps == 1);
    CHECK(counts.hash_to_points == 1);  // reported, outside the M/P/E taxonomy
}

TEST_CASE("full decrypt costs one multiplication and one pairing") {
    System sys(BackendId::production);
    SeededRng rng(2);
    Bytes m = rng.bytes(32);
    FullCiphertext ct = encrypt_full(*sys.backend, sys.system.params,
                                     "meter@example.com", m, rng);
    ExtractedPrivateKey key =
        court_recover(*sys.backend, sys.system.pkg, sys.system.pkpo,
                      sys.system.params, "meter@example.com");
    OpCounter counts =
        metered_run("decrypt", *sys.backend, [&](const Backend& b) {
            if (decrypt_full(b, sys.system.params, key, ct) != m) {
                raise(Errc::validation_failed, "metered decrypt broke");
            }
        });
    CHECK(counts.scalar_mults == 1);
    CHECK(counts.pairings == 1);
    CHECK(counts.gt_exps == 0);
}

TEST_CASE("basic decrypt is a single pairing") {
    System sys(BackendId::production);
    SeededRng rng(3);
    Bytes m = rng.bytes(32);
    BasicCiphertext ct = encrypt_basic(*sys.backend, sys.system.params,
                                       "meter@example.com", m, rng);
    ExtractedPrivateKey key =
        court_recover(*sys.backend, sys.system.pkg, sys.system.pkpo,
                      sys.system.params, "meter@example.com");
    OpCounter counts =
        metered_run("decrypt", *sys.backend, [&](const Backend& b) {
            (void)decrypt_basic(b, sys.system.params, key, ct);
        });
    CHECK(counts.scalar_mults == 0);
    CHECK(counts.pairings == 1);
    CHECK(counts.gt_exps == 0);
}

TEST_CASE("counts are invariant across content, identity, and backend") {
    System prod(BackendId::production);
    OpCounter first = count_encrypt(prod, 10);
    for (uint64_t seed = 11; seed < 16; ++seed) {
        OpCounter other = count_encrypt(prod, seed);
        CHECK(other.scalar_mults == first.scalar_mults);
        CHECK(other.pairings == first.pairings);
        CHECK(other.gt_exps == first.gt_exps);
    }
    System toy(BackendId::toy);
    OpCounter toy_counts = count_encrypt(toy, 10);
    CHECK(toy_counts.scalar_mults == first.scalar_mults);
    CHECK(toy_counts.pairings == first.pairings);
    CHECK(toy_counts.gt_exps == first.gt_exps);
}

TEST_CASE("the baseline scheme has the same encrypt and decrypt profile") {
    auto backend = make_production_backend();
    SeededRng rng(4);
    BfSetupResult system = bf_setup(*backend, rng);
    Bytes m = rng.bytes(32);
    FullCiphertext ct;
    OpCounter enc = metered_run("encrypt", *backend, [&](const Backend& b) {
        ct = bf_encrypt(b, system.params, "meter@example.com", m, rng);
    });
    CHECK(enc.scalar_mults == 1);
    CHECK(enc.pairings == 1);
    CHECK(enc.gt_exps == 1);

    ExtractedPrivateKey key =
        bf_extract(*backend, system.secret, system.params, "meter@example.com");
    OpCounter dec = metered_run("decrypt", *backend, [&](const Backend& b) {
        if (bf_decrypt(b, system.params, key, ct) != m) {
            raise(Errc::validation_failed, "metered decrypt broke");
        }
    });
    CHECK(dec.scalar_mults == 1);
    CHECK(dec.pairings == 1);
    CHECK(dec.gt_exps == 0);
}

TEST_CASE("metering is observationally transparent") {
    System sys(BackendId::production);
    SeededRng rng1(5);
    SeededRng rng2(5);
    Bytes m(32, 0x77);
    FullCiphertext plainly =
        encrypt_full(*sys.backend, sys.system.params, "t@example.com", m, rng1);
    FullCiphertext metered;
    (void)metered_run("encrypt", *sys.backend, [&](const Backend& b) {
        metered = encrypt_full(b, sys.system.params, "t@example.com", m, rng2);
    });
    CHECK(plainly == metered);
}

TEST_CASE("metering phases must not nest") {
    System sys(BackendId::production);
    CHECK_THROWS_AS(
        (void)metered_run("encrypt", *sys.backend,
                          [&](const Backend& outer) {
                              (void)metered_run("decrypt", outer,
                                                [](const Backend&) {});
                          }),
        Error);
}

TEST_CASE("profile report flags matches and keeps keygen informational") {
    System sys(BackendId::production);
    SeededRng rng(6);
    UserKeypair user =
        user_keygen(*sys.backend, sys.system.params, rng, "k@example.com");
    OpCounter keygen =
        metered_run("keygen", *sys.backend, [&](const Backend& b) {
            (void)run_local_ceremony(b, sys.system.pkg, sys.system.pkpo,
                                     sys.system.params, user);
        });
    OpCounter encrypt = count_encrypt(sys, 7);

    std::vector<ProfileRow> rows = profile_report({keygen, encrypt});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].verdict == ProfileRow::Verdict::report_only);
    CHECK_FALSE(rows[0].has_reference);
    CHECK(rows[0].counts.scalar_mults > 0);
    CHECK(rows[1].verdict == ProfileRow::Verdict::match);

    OpCounter fudged = encrypt;
    fudged.pairings = 7;
    std::vector<ProfileRow> bad = profile_report({fudged});
    CHECK(bad[0].verdict == ProfileRow::Verdict::mismatch);

    CHECK(profile_report({}).empty());

    std::string table = render_profile_table(rows);
    CHECK(table.find("REPORT-ONLY") != std::string::npos);
    CHECK(table.find("MATCH") != std::string::npos);
    CHECK(table.find("keygen") != std::string::npos);
}

#include "mibe/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

#include "mibe/artifacts.hpp"
#include "mibe/dates.hpp"
#include "mibe/errors.hpp"
#include "mibe/games.hpp"
#include "mibe/hybrid.hpp"
#include "mibe/metering.hpp"
#include "mibe/netproto.hpp"

namespace mibe {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCrypto = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::io_error:
        case Errc::protocol_error:
            return kExitIo;
        default:
            return kExitCrypto;
    }
}

std::unique_ptr<Backend> backend_for_params(const SystemParams& params) {
    return make_backend(params.backend_id, params.toy_order);
}

// The toy backend exists to verify algebra, not to protect anything.
void refuse_toy_for_keys(const Backend& backend) {
    if (backend.descriptor().id == BackendId::toy) {
        raise(Errc::backend_refused,
              "the toy backend must not hold real key material");
    }
}

SystemParams load_params(const std::string& path,
                         std::unique_ptr<Backend>& backend) {
    SystemParams params =
        params_from_file(read_key_file(path, KeyRole::params));
    backend = backend_for_params(params);
    return params;
}

VetHook allowlist_vet(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open allowlist " + path);
    auto allowed = std::make_shared<std::set<std::string>>();
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) allowed->insert(line);
    }
    return [allowed](const std::string& id) { return allowed->count(id) > 0; };
}

std::atomic<bool> g_stop_requested{false};
void handle_stop_signal(int) { g_stop_requested.store(true); }

void wait_for_stop() {
    std::signal(SIGINT, handle_stop_signal);
    std::signal(SIGTERM, handle_stop_signal);
    while (!g_stop_requested.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
}

// ---- subcommand bodies ------------------------------------------------------

struct SetupArgs {
    std::string out_dir;
    std::string backend = "production";
    uint16_t n_bits = 256;
    uint16_t l_bits = 256;
};

int cmd_setup(const SetupArgs& args) {
    if (args.backend != "production" && args.backend != "toy") {
        raise(Errc::backend_refused, "unknown backend " + args.backend);
    }
    std::unique_ptr<Backend> backend =
        args.backend == "toy" ? make_toy_backend() : make_production_backend();
    refuse_toy_for_keys(*backend);
    HashConfig hash;
    hash.n_bits = args.n_bits;
    hash.l_bits = args.l_bits;
    std::unique_ptr<Rng> rng = make_default_rng();
    PkgSetupResult result = pkg_setup(*backend, *rng, hash);
    write_key_file(args.out_dir + "/pkg.secret",
                   pkg_secret_to_file(*backend, result.pkg));
    write_key_file(args.out_dir + "/params.partial",
                   partial_params_to_file(result.partial));
    std::cout << "wrote " << args.out_dir << "/pkg.secret and "
              << args.out_dir << "/params.partial\n";
    return kExitOk;
}

int cmd_pkpo_init(const std::string& partial_path,
                  const std::string& out_dir) {
    PartialParams partial = partial_params_from_file(
        read_key_file(partial_path, KeyRole::params_partial));
    std::unique_ptr<Backend> backend =
        make_backend(partial.backend_id, partial.toy_order);
    refuse_toy_for_keys(*backend);
    std::unique_ptr<Rng> rng = make_default_rng();
    PkpoSetupResult result = pkpo_setup(*backend, *rng, partial);
    write_key_file(out_dir + "/pkpo.secret",
                   pkpo_secret_to_file(*backend, result.pkpo));
    write_key_file(out_dir + "/params.mibe", params_to_file(result.params));
    std::cout << "wrote " << out_dir << "/pkpo.secret and " << out_dir
              << "/params.mibe\n";
    return kExitOk;
}

int cmd_user_keygen(const std::string& params_path, const std::string& id,
                    const std::string& out) {
    std::unique_ptr<Backend> backend;
    SystemParams params = load_params(params_path, backend);
    refuse_toy_for_keys(*backend);
    std::unique_ptr<Rng> rng = make_default_rng();
    UserKeypair user = user_keygen(*backend, params, *rng, id);
    write_key_file(out, user_keypair_to_file(*backend, user));
    std::cout << "wrote " << out << " for " << id << "\n";
    return kExitOk;
}

struct CeremonyArgs {
    std::string params_path;
    std::string user_path;
    std::string out;
    std::string transcript_path;
    bool local = false;
    std::string pkg_secret_path;
    std::string pkpo_secret_path;
    std::string pkg_addr;
    std::string pkpo_addr;
};

int cmd_ceremony(const CeremonyArgs& args) {
    std::unique_ptr<Backend> backend;
    SystemParams params = load_params(args.params_path, backend);
    refuse_toy_for_keys(*backend);
    UserKeypair user = user_keypair_from_file(
        *backend, read_key_file(args.user_path, KeyRole::user_keypair));
    CeremonyRun run = [&] {
        if (args.local) {
            PkgSecret pkg = pkg_secret_from_file(
                *backend, read_key_file(args.pkg_secret_path,
                                        KeyRole::pkg_secret));
            PkpoSecret pkpo = pkpo_secret_from_file(
                *backend, read_key_file(args.pkpo_secret_path,
                                        KeyRole::pkpo_secret));
            return run_local_ceremony(*backend, pkg, pkpo, params, user);
        }
        return client_run_ceremony(*backend, params, user,
                                   parse_endpoint(args.pkg_addr),
                                   parse_endpoint(args.pkpo_addr));
    }();
    write_key_file(args.out, private_key_to_file(*backend, run.key));
    if (!args.transcript_path.empty()) {
        std::ofstream out(args.transcript_path, std::ios::app);
        for (const std::string& line : run.transcript.to_lines()) {
            out << line << "\n";
        }
    }
    std::cout << "issued private key for " << run.key.identity << " -> "
              << args.out << "\n";
    return kExitOk;
}

int cmd_verify_key(const std::string& params_path, const std::string& key_path,
                   std::string id) {
    std::unique_ptr<Backend> backend;
    SystemParams params = load_params(params_path, backend);
    ExtractedPrivateKey key = private_key_from_file(
        *backend, read_key_file(key_path, KeyRole::private_key));
    if (id.empty()) id = key.identity;
    if (!validate_private_key(*backend, params, id, key)) {
        std::cerr << "key does not validate for " << id << "\n";
        return kExitCrypto;
    }
    std::cout << "key validates for " << id << "\n";
    return kExitOk;
}

struct EncryptArgs {
    std::string params_path;
    std::string to;
    std::string expiry;
    std::string in;
    std::string out;
};

int cmd_encrypt(const EncryptArgs& args) {
    std::unique_ptr<Backend> backend;
    SystemParams params = load_params(args.params_path, backend);
    refuse_toy_for_keys(*backend);
    std::string recipient = args.to;
    if (!args.expiry.empty()) {
        if (!is_valid_date(args.expiry)) {
            raise(Errc::expired_identity,
                  "expiry must be YYYY-MM-DD: " + args.expiry);
        }
        recipient += "|" + args.expiry;
    }
    Bytes plaintext = read_binary_file(args.in);
    std::unique_ptr<Rng> rng = make_default_rng();
    Bytes envelope =
        hybrid_encrypt(*backend, params, recipient, plaintext, *rng);
    write_binary_file(args.out, envelope);
    std::cout << "encrypted " << plaintext.size() << " bytes to " << recipient
              << "\n";
    return kExitOk;
}

int cmd_decrypt(const std::string& params_path, const std::string& key_path,
                const std::string& in, const std::string& out) {
    std::unique_ptr<Backend> backend;
    SystemParams params = load_params(params_path, backend);
    ExtractedPrivateKey key = private_key_from_file(
        *backend, read_key_file(key_path, KeyRole::private_key));
    Bytes envelope = read_binary_file(in);
    std::optional<Bytes> plain = hybrid_decrypt(*backend, params, key, envelope);
    if (!plain) {
        std::cerr << "ciphertext rejected\n";
        return kExitCrypto;
    }
    write_binary_file(out, *plain);
    std::cout << "decrypted " << plain->size() << " bytes\n";
    return kExitOk;
}

int cmd_recover(const std::string& params_path, const std::string& pkg_path,
                const std::string& pkpo_path, const std::string& id,
                const std::string& out) {
    std::unique_ptr<Backend> backend;
    SystemParams params = load_params(params_path, backend);
    PkgSecret pkg = pkg_secret_from_file(
        *backend, read_key_file(pkg_path, KeyRole::pkg_secret));
    PkpoSecret pkpo = pkpo_secret_from_file(
        *backend, read_key_file(pkpo_path, KeyRole::pkpo_secret));
    ExtractedPrivateKey key = court_recover(*backend, pkg, pkpo, params, id);
    write_key_file(out, private_key_to_file(*backend, key));
    std::cout << "recovered private key for " << id << " -> " << out << "\n";
    return kExitOk;
}

struct BenchArgs {
    std::string scheme = "mibe";
    std::string backend = "production";
    uint64_t trials = 3;
    bool json = false;
};

int cmd_bench(const BenchArgs& args) {
    std::unique_ptr<Backend> backend =
        args.backend == "toy" ? make_toy_backend() : make_production_backend();
    SeededRng rng(42);
    const std::string id = "bench@example.com";
    std::vector<OpCounter> phases;

    if (args.scheme == "mibe") {
        SetupResult system = setup(*backend, rng);
        Bytes message = rng.bytes(system.params.hash.n_bits / 8);
        for (uint64_t t = 0; t < args.trials; ++t) {
            UserKeypair user = user_keygen(*backend, system.params, rng, id);
            ExtractedPrivateKey key{"", {}, std::nullopt};
            OpCounter keygen =
                metered_run("keygen", *backend, [&](const Backend& metered) {
                    key = run_local_ceremony(metered, system.pkg, system.pkpo,
                                             system.params, user)
                              .key;
                });
            FullCiphertext ct;
            OpCounter encrypt =
                metered_run("encrypt", *backend, [&](const Backend& metered) {
                    ct = encrypt_full(metered, system.params, id, message, rng);
                });
            OpCounter decrypt =
                metered_run("decrypt", *backend, [&](const Backend& metered) {
                    if (decrypt_full(metered, system.params, key, ct) !=
                        message) {
                        raise(Errc::validation_failed, "bench roundtrip broke");
                    }
                });
            if (t == 0) {
                phases = {keygen, encrypt, decrypt};
            } else if (phases[0] != keygen || phases[1] != encrypt ||
                       phases[2] != decrypt) {
                raise(Errc::validation_failed, "operation counts drifted");
            }
        }
    } else if (args.scheme == "bf") {
        BfSetupResult system = bf_setup(*backend, rng);
        Bytes message = rng.bytes(system.params.hash.n_bits / 8);
        for (uint64_t t = 0; t < args.trials; ++t) {
            ExtractedPrivateKey key{"", {}, std::nullopt};
            OpCounter keygen =
                metered_run("keygen", *backend, [&](const Backend& metered) {
                    key = bf_extract(metered, system.secret, system.params, id);
                });
            FullCiphertext ct;
            OpCounter encrypt =
                metered_run("encrypt", *backend, [&](const Backend& metered) {
                    ct = bf_encrypt(metered, system.params, id, message, rng);
                });
            OpCounter decrypt =
                metered_run("decrypt", *backend, [&](const Backend& metered) {
                    if (bf_decrypt(metered, system.params, key, ct) !=
                        message) {
                        raise(Errc::validation_failed, "bench roundtrip broke");
                    }
                });
            if (t == 0) {
                phases = {keygen, encrypt, decrypt};
            } else if (phases[0] != keygen || phases[1] != encrypt ||
                       phases[2] != decrypt) {
                raise(Errc::validation_failed, "operation counts drifted");
            }
        }
    } else {
        raise(Errc::io_error, "unknown scheme " + args.scheme);
    }

    std::vector<ProfileRow> rows = profile_report(phases);
    std::cout << render_profile_table(rows);
    if (args.json) {
        nlohmann::json out = nlohmann::json::array();
        for (const ProfileRow& row : rows) {
            const char* verdict = "REPORT-ONLY";
            if (row.verdict == ProfileRow::Verdict::match) verdict = "MATCH";
            if (row.verdict == ProfileRow::Verdict::mismatch) {
                verdict = "MISMATCH";
            }
            out.push_back({{"phase", row.counts.phase},
                           {"scalar_mults", row.counts.scalar_mults},
                           {"pairings", row.counts.pairings},
                           {"gt_exps", row.counts.gt_exps},
                           {"hash_to_points", row.counts.hash_to_points},
                           {"scalar_inversions", row.counts.scalar_inversions},
                           {"verdict", verdict}});
        }
        std::cout << out.dump() << "\n";
    }
    for (const ProfileRow& row : rows) {
        if (row.verdict == ProfileRow::Verdict::mismatch) return kExitCrypto;
    }
    return kExitOk;
}

struct GameArgs {
    std::string adversary = "random-guesser";
    std::string type;
    std::string scheme;
    std::string game;
    uint64_t trials = 1000;
    uint64_t seed = 1;
};

int cmd_game(const GameArgs& args) {
    const BuiltinAdversary* built_in = find_adversary(args.adversary);
    if (built_in == nullptr) {
        std::cerr << "unknown adversary; available:";
        for (const BuiltinAdversary& a : builtin_adversaries()) {
            std::cerr << " " << a.name;
        }
        std::cerr << "\n";
        return kExitUsage;
    }
    GameConfig config = built_in->config;
    if (args.type == "I") {
        config.rules = AdversaryRules::for_type(AdversaryType::type_i);
    } else if (args.type == "II") {
        config.rules = AdversaryRules::for_type(AdversaryType::type_ii);
    } else if (!args.type.empty()) {
        raise(Errc::io_error, "adversary type must be I or II");
    }
    if (args.scheme == "basic") {
        config.scheme = SchemeId::basic;
    } else if (args.scheme == "full") {
        config.scheme = SchemeId::full;
    } else if (!args.scheme.empty()) {
        raise(Errc::io_error, "scheme must be basic or full");
    }
    if (args.game == "cpa") {
        config.kind = GameKind::ind_cpa;
    } else if (args.game == "cca") {
        config.kind = GameKind::ind_cca;
    } else if (!args.game.empty()) {
        raise(Errc::io_error, "game must be cpa or cca");
    }
    std::unique_ptr<Backend> backend = make_production_backend();
    GameOutcome outcome = run_game(*backend, config, built_in->factory,
                                   args.trials, args.seed);
    nlohmann::json record = {
        {"adversary", built_in->name},
        {"type",
         config.rules.type == AdversaryType::type_i ? "I" : "II"},
        {"scheme", config.scheme == SchemeId::basic ? "basic" : "full"},
        {"game", config.kind == GameKind::ind_cpa ? "cpa" : "cca"},
        {"trials", outcome.trials},
        {"wins", outcome.wins},
        {"forfeits", outcome.forfeits},
        {"advantage", outcome.advantage},
        {"ci_half_width", outcome.ci_half_width},
        {"seed", args.seed},
    };
    std::cout << record.dump() << "\n";
    return kExitOk;
}

struct ServeArgs {
    std::string params_path;
    std::string secret_path;
    std::string bind = "0.0.0.0";
    uint16_t port = 0;
    std::string allowlist_path;
    bool allow_all = false;
    std::string transcript_path;
};

int cmd_serve_pkg(const ServeArgs& args) {
    std::unique_ptr<Backend> backend;
    SystemParams params = load_params(args.params_path, backend);
    refuse_toy_for_keys(*backend);
    PkgSecret pkg = pkg_secret_from_file(
        *backend, read_key_file(args.secret_path, KeyRole::pkg_secret));
    VetHook vet = args.allow_all ? accept_all_identities()
                                 : allowlist_vet(args.allowlist_path);
    uint16_t port = args.port == 0 ? kDefaultPkgPort : args.port;
    std::unique_ptr<AuthorityServer> server =
        AuthorityServer::serve_pkg(*backend, pkg, params, std::move(vet),
                                   args.bind, port, args.transcript_path);
    std::cout << "issuing authority listening on " << args.bind << ":"
              << server->port() << "\n";
    wait_for_stop();
    server->stop();
    return kExitOk;
}

int cmd_serve_pkpo(const ServeArgs& args) {
    std::unique_ptr<Backend> backend;
    SystemParams params = load_params(args.params_path, backend);
    refuse_toy_for_keys(*backend);
    PkpoSecret pkpo = pkpo_secret_from_file(
        *backend, read_key_file(args.secret_path, KeyRole::pkpo_secret));
    uint16_t port = args.port == 0 ? kDefaultPkpoPort : args.port;
    std::unique_ptr<AuthorityServer> server = AuthorityServer::serve_pkpo(
        *backend, pkpo, params, args.bind, port, args.transcript_path);
    std::cout << "privacy authority listening on " << args.bind << ":"
              << server->port() << "\n";
    wait_for_stop();
    server->stop();
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"split-authority identity-based encryption"};
    app.require_subcommand(1);

    SetupArgs setup_args;
    CLI::App* setup_cmd =
        app.add_subcommand("setup", "generate the issuing authority");
    setup_cmd->add_option("--out-dir", setup_args.out_dir)->required();
    setup_cmd->add_option("--backend", setup_args.backend);
    setup_cmd->add_option("--n-bits", setup_args.n_bits);
    setup_cmd->add_option("--l-bits", setup_args.l_bits);

    std::string partial_path;
    std::string out_dir;
    CLI::App* pkpo_cmd = app.add_subcommand(
        "pkpo-init", "generate the privacy authority and final parameters");
    pkpo_cmd->add_option("--partial", partial_path)->required();
    pkpo_cmd->add_option("--out-dir", out_dir)->required();

    std::string params_path;
    std::string identity;
    std::string out_path;
    CLI::App* keygen_cmd =
        app.add_subcommand("user-keygen", "generate a user transport keypair");
    keygen_cmd->add_option("--params", params_path)->required();
    keygen_cmd->add_option("--id", identity)->required();
    keygen_cmd->add_option("--out", out_path)->required();

    CeremonyArgs ceremony_args;
    CLI::App* ceremony_cmd =
        app.add_subcommand("ceremony", "obtain a private key in three stages");
    ceremony_cmd->add_option("--params", ceremony_args.params_path)->required();
    ceremony_cmd->add_option("--user", ceremony_args.user_path)->required();
    ceremony_cmd->add_option("--out", ceremony_args.out)->required();
    ceremony_cmd->add_option("--transcript", ceremony_args.transcript_path);
    ceremony_cmd->add_flag("--local", ceremony_args.local);
    ceremony_cmd->add_option("--pkg-secret", ceremony_args.pkg_secret_path);
    ceremony_cmd->add_option("--pkpo-secret", ceremony_args.pkpo_secret_path);
    ceremony_cmd->add_option("--pkg", ceremony_args.pkg_addr);
    ceremony_cmd->add_option("--pkpo", ceremony_args.pkpo_addr);

    std::string key_path;
    std::string verify_id;
    CLI::App* verify_cmd =
        app.add_subcommand("verify-key", "validate an issued private key");
    verify_cmd->add_option("--params", params_path)->required();
    verify_cmd->add_option("--key", key_path)->required();
    verify_cmd->add_option("--id", verify_id);

    EncryptArgs encrypt_args;
    CLI::App* encrypt_cmd =
        app.add_subcommand("encrypt", "encrypt a file to an identity");
    encrypt_cmd->add_option("--params", encrypt_args.params_path)->required();
    encrypt_cmd->add_option("--to", encrypt_args.to)->required();
    encrypt_cmd->add_option("--expiry", encrypt_args.expiry);
    encrypt_cmd->add_option("--in", encrypt_args.in)->required();
    encrypt_cmd->add_option("--out", encrypt_args.out)->required();

    std::string in_path;
    CLI::App* decrypt_cmd =
        app.add_subcommand("decrypt", "decrypt a file with a private key");
    decrypt_cmd->add_option("--params", params_path)->required();
    decrypt_cmd->add_option("--key", key_path)->required();
    decrypt_cmd->add_option("--in", in_path)->required();
    decrypt_cmd->add_option("--out", out_path)->required();

    std::string pkg_secret_path;
    std::string pkpo_secret_path;
    CLI::App* recover_cmd = app.add_subcommand(
        "recover", "derive a private key from both master secrets");
    recover_cmd->add_option("--params", params_path)->required();
    recover_cmd->add_option("--pkg-secret", pkg_secret_path)->required();
    recover_cmd->add_option("--pkpo-secret", pkpo_secret_path)->required();
    recover_cmd->add_option("--id", identity)->required();
    recover_cmd->add_option("--out", out_path)->required();

    BenchArgs bench_args;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "operation-count profile");
    bench_cmd->add_option("--scheme", bench_args.scheme);
    bench_cmd->add_option("--backend", bench_args.backend);
    bench_cmd->add_option("--trials", bench_args.trials);
    bench_cmd->add_flag("--json", bench_args.json);

    GameArgs game_args;
    CLI::App* game_cmd =
        app.add_subcommand("game", "run an indistinguishability game");
    game_cmd->add_option("--adversary", game_args.adversary);
    game_cmd->add_option("--type", game_args.type);
    game_cmd->add_option("--scheme", game_args.scheme);
    game_cmd->add_option("--game", game_args.game);
    game_cmd->add_option("--trials", game_args.trials);
    game_cmd->add_option("--seed", game_args.seed);

    ServeArgs serve_pkg_args;
    CLI::App* serve_pkg_cmd =
        app.add_subcommand("serve-pkg", "run the issuing authority daemon");
    serve_pkg_cmd->add_option("--params", serve_pkg_args.params_path)
        ->required();
    serve_pkg_cmd->add_option("--secret", serve_pkg_args.secret_path)
        ->required();
    serve_pkg_cmd->add_option("--bind", serve_pkg_args.bind);
    serve_pkg_cmd->add_option("--port", serve_pkg_args.port);
    serve_pkg_cmd->add_option("--allowlist", serve_pkg_args.allowlist_path);
    serve_pkg_cmd->add_flag("--allow-all", serve_pkg_args.allow_all);
    serve_pkg_cmd->add_option("--transcript", serve_pkg_args.transcript_path);

    ServeArgs serve_pkpo_args;
    CLI::App* serve_pkpo_cmd =
        app.add_subcommand("serve-pkpo", "run the privacy authority daemon");
    serve_pkpo_cmd->add_option("--params", serve_pkpo_args.params_path)
        ->required();
    serve_pkpo_cmd->add_option("--secret", serve_pkpo_args.secret_path)
        ->required();
    serve_pkpo_cmd->add_option("--bind", serve_pkpo_args.bind);
    serve_pkpo_cmd->add_option("--port", serve_pkpo_args.port);
    serve_pkpo_cmd->add_option("--transcript", serve_pkpo_args.transcript_path);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& err) {
        std::cerr << err.what() << "\n";
        return kExitUsage;
    }

    try {
        if (setup_cmd->parsed()) return cmd_setup(setup_args);
        if (pkpo_cmd->parsed()) return cmd_pkpo_init(partial_path, out_dir);
        if (keygen_cmd->parsed()) {
            return cmd_user_keygen(params_path, identity, out_path);
        }
        if (ceremony_cmd->parsed()) {
            bool remote = !ceremony_args.pkg_addr.empty() &&
                          !ceremony_args.pkpo_addr.empty();
            bool local = ceremony_args.local &&
                         !ceremony_args.pkg_secret_path.empty() &&
                         !ceremony_args.pkpo_secret_path.empty();
            if (local == remote) {
                std::cerr << "pick --local with both secrets, or --pkg and "
                             "--pkpo addresses\n";
                return kExitUsage;
            }
            return cmd_ceremony(ceremony_args);
        }
        if (verify_cmd->parsed()) {
            return cmd_verify_key(params_path, key_path, verify_id);
        }
        if (encrypt_cmd->parsed()) return cmd_encrypt(encrypt_args);
        if (decrypt_cmd->parsed()) {
            return cmd_decrypt(params_path, key_path, in_path, out_path);
        }
        if (recover_cmd->parsed()) {
            return cmd_recover(params_path, pkg_secret_path, pkpo_secret_path,
                               identity, out_path);
        }
        if (bench_cmd->parsed()) return cmd_bench(bench_args);
        if (game_cmd->parsed()) return cmd_game(game_args);
        if (serve_pkg_cmd->parsed()) {
            if (!serve_pkg_args.allow_all &&
                serve_pkg_args.allowlist_path.empty()) {
                std::cerr << "serve-pkg needs --allowlist FILE or an explicit "
                             "--allow-all\n";
                return kExitUsage;
            }
            return cmd_serve_pkg(serve_pkg_args);
        }
        if (serve_pkpo_cmd->parsed()) return cmd_serve_pkpo(serve_pkpo_args);
    } catch (const Error& err) {
        std::cerr << errc_name(err.code()) << ": " << err.what() << "\n";
        return exit_code_for(err.code());
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}

}  // namespace mibe

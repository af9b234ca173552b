#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <variant>

#include "mibe/ceremony.hpp"

namespace mibe {

// Request/reply wire protocol for running the two authorities as separate
// daemons. One frame per message: u32 big-endian payload length, version
// byte, type byte, payload.

constexpr uint8_t kProtocolVersion = 1;
constexpr size_t kMaxFramePayload = 1 << 20;
constexpr size_t kMaxIdentityBytes = 1024;
constexpr uint16_t kDefaultPkgPort = 7401;
constexpr uint16_t kDefaultPkpoPort = 7402;

// Stable error codes carried in ErrorReply.
enum class WireError : uint32_t {
    identity_rejected = 1,
    verification_failed = 2,
    protocol_error = 3,
    internal_error = 4,
};

enum class MsgType : uint8_t {
    params_request = 1,
    params_reply = 2,
    partial_key_request = 3,
    partial_key_reply = 4,
    secure_request = 5,
    secure_reply = 6,
    error_reply = 7,
};

struct Frame {
    uint8_t version = kProtocolVersion;
    MsgType type = MsgType::params_request;
    Bytes payload;
    bool operator==(const Frame&) const = default;
};

Bytes encode_frame(const Frame& frame);
// Throws Errc::protocol_error on truncation, oversize, bad version, or an
// unknown type byte.
Frame decode_frame(const Bytes& bytes);

struct ParamsRequest {
    bool operator==(const ParamsRequest&) const = default;
};
struct ParamsReply {
    SystemParams params;
    bool operator==(const ParamsReply&) const = default;
};
struct PartialKeyRequest {
    std::string identity;
    MirroredPoint usk_pub;
    bool operator==(const PartialKeyRequest&) const = default;
};
struct PartialKeyReplyMsg {
    PartialKeyReply reply;
    bool operator==(const PartialKeyReplyMsg&) const = default;
};
struct SecureRequest {
    std::string identity;
    MirroredPoint usk_pub;
    PartialKeyReply partial;
    bool operator==(const SecureRequest&) const = default;
};
struct SecureReplyMsg {
    SecuredKeyReply reply;
    bool operator==(const SecureReplyMsg&) const = default;
};
struct ErrorReply {
    uint32_t code = 0;
    std::string text;
    bool operator==(const ErrorReply&) const = default;
};

using Message =
    std::variant<ParamsRequest, ParamsReply, PartialKeyRequest,
                 PartialKeyReplyMsg, SecureRequest, SecureReplyMsg, ErrorReply>;

MsgType message_type(const Message& msg);
Frame encode_message(const Message& msg);
// Element-bearing messages need the backend for widths and validation;
// params replies carry their own backend id. Pass nullptr only when
// decoding params or error messages.
Message decode_message(const Frame& frame, const Backend* backend);

// Self-describing system parameter encoding (bootstraps the client).
Bytes params_to_bytes(const SystemParams& params);
SystemParams params_from_bytes(const Bytes& bytes);
Bytes partial_params_to_bytes(const PartialParams& partial);
PartialParams partial_params_from_bytes(const Bytes& bytes);

// Client-side ceremony state machine; forward-only.
struct CeremonySession {
    enum class State { awaiting_partial, awaiting_secure, done, failed };

    State state = State::awaiting_partial;
    std::string failure;

    void fail(const std::string& why) {
        state = State::failed;
        failure = why;
    }
};

struct Endpoint {
    std::string host;
    uint16_t port = 0;
};
Endpoint parse_endpoint(const std::string& host_port);

// Threaded daemons; one ceremony stage per request, concurrent
// connections. port 0 binds an ephemeral port (see port()).
class AuthorityServer {
   public:
    ~AuthorityServer();
    AuthorityServer(AuthorityServer&&) = delete;

    uint16_t port() const { return port_; }
    void stop();

    static std::unique_ptr<AuthorityServer> serve_pkg(
        const Backend& backend, const PkgSecret& pkg,
        const SystemParams& params, VetHook vet, const std::string& bind_host,
        uint16_t port, const std::string& transcript_path = "");

    static std::unique_ptr<AuthorityServer> serve_pkpo(
        const Backend& backend, const PkpoSecret& pkpo,
        const SystemParams& params, const std::string& bind_host,
        uint16_t port, const std::string& transcript_path = "");

   private:
    AuthorityServer() = default;
    struct Impl;
    static std::unique_ptr<AuthorityServer> start(std::unique_ptr<Impl> impl,
                                                  const std::string& bind_host,
                                                  uint16_t port);
    std::unique_ptr<Impl> impl_;
    uint16_t port_ = 0;
};

// One request against one connection.
Message roundtrip(const Endpoint& endpoint, const Message& request,
                  const Backend* backend);

SystemParams fetch_params(const Endpoint& endpoint);

// Three stages in order with client-side verification between them;
// aborts before contacting the privacy authority when the issuing reply
// fails its check. Throws on transport or verification failure; nothing
// is persisted on failure.
CeremonyRun client_run_ceremony(const Backend& backend,
                                const SystemParams& params,
                                const UserKeypair& user,
                                const Endpoint& pkg_addr,
                                const Endpoint& pkpo_addr);

}  // namespace mibe

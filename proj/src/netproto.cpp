#include "mibe/netproto.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>
#include <vector>

#include "mibe/errors.hpp"

namespace mibe {

// ---- frame codec ------------------------------------------------------------

Bytes encode_frame(const Frame& frame) {
    if (frame.payload.size() > kMaxFramePayload) {
        raise(Errc::protocol_error, "payload too large");
    }
    Bytes out;
    out.reserve(6 + frame.payload.size());
    append_u32_be(out, static_cast<uint32_t>(frame.payload.size()));
    out.push_back(frame.version);
    out.push_back(static_cast<uint8_t>(frame.type));
    append_bytes(out, frame.payload);
    return out;
}

Frame decode_frame(const Bytes& bytes) {
    if (bytes.size() < 6) raise(Errc::protocol_error, "truncated frame");
    uint32_t len = static_cast<uint32_t>(bytes[0]) << 24 |
                   static_cast<uint32_t>(bytes[1]) << 16 |
                   static_cast<uint32_t>(bytes[2]) << 8 | bytes[3];
    if (len > kMaxFramePayload) raise(Errc::protocol_error, "oversized frame");
    if (bytes.size() != 6u + len) {
        raise(Errc::protocol_error, bytes.size() < 6u + len
                                        ? "truncated frame"
                                        : "trailing bytes after frame");
    }
    Frame frame;
    frame.version = bytes[4];
    if (frame.version != kProtocolVersion) {
        raise(Errc::protocol_error, "unsupported protocol version");
    }
    uint8_t type = bytes[5];
    if (type < 1 || type > 7) {
        raise(Errc::protocol_error, "unknown message type");
    }
    frame.type = static_cast<MsgType>(type);
    frame.payload.assign(bytes.begin() + 6, bytes.end());
    return frame;
}

// ---- payload codecs -----------------------------------------------------------

namespace {

class ByteReader {
   public:
    explicit ByteReader(const Bytes& bytes) : bytes_(bytes) {}

    uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }

    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(bytes_[pos_]) << 8 | bytes_[pos_ + 1];
        pos_ += 2;
        return v;
    }

    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = v << 8 | bytes_[pos_ + i];
        pos_ += 4;
        return v;
    }

    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = v << 8 | bytes_[pos_ + i];
        pos_ += 8;
        return v;
    }

    Bytes take(size_t n) {
        need(n);
        Bytes out(bytes_.begin() + pos_, bytes_.begin() + pos_ + n);
        pos_ += n;
        return out;
    }

    std::string string16() {
        uint16_t n = u16();
        Bytes raw = take(n);
        return std::string(raw.begin(), raw.end());
    }

    std::string identity() {
        uint32_t n = u32();
        if (n == 0 || n > kMaxIdentityBytes) {
            raise(Errc::protocol_error, "identity length out of range");
        }
        Bytes raw = take(n);
        return std::string(raw.begin(), raw.end());
    }

    void finish() const {
        if (pos_ != bytes_.size()) {
            raise(Errc::protocol_error, "trailing payload bytes");
        }
    }

   private:
    void need(size_t n) const {
        if (pos_ + n > bytes_.size()) {
            raise(Errc::protocol_error, "short payload");
        }
    }

    const Bytes& bytes_;
    size_t pos_ = 0;
};

void put_string16(Bytes& out, const std::string& s) {
    if (s.size() > 0xffff) raise(Errc::protocol_error, "string too long");
    append_u16_be(out, static_cast<uint16_t>(s.size()));
    append_bytes(out, str_bytes(s));
}

void put_identity(Bytes& out, const std::string& id) {
    if (id.empty() || id.size() > kMaxIdentityBytes) {
        raise(Errc::protocol_error, "identity length out of range");
    }
    append_u32_be(out, static_cast<uint32_t>(id.size()));
    append_bytes(out, str_bytes(id));
}

void append_u64_be(Bytes& out, uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_hash_config(Bytes& out, const HashConfig& hash,
                     const std::string& xof_name) {
    for (const std::string& tag : hash.tags) put_string16(out, tag);
    append_u16_be(out, hash.n_bits);
    append_u16_be(out, hash.l_bits);
    put_string16(out, xof_name);
}

void read_hash_config(ByteReader& in, HashConfig& hash, std::string& xof_name) {
    for (std::string& tag : hash.tags) tag = in.string16();
    hash.n_bits = in.u16();
    hash.l_bits = in.u16();
    xof_name = in.string16();
    try {
        validate_hash_config(hash);
    } catch (const Error& err) {
        raise(Errc::protocol_error, err.what());
    }
}

G1Element read_g1(ByteReader& in, const Backend& backend) {
    try {
        return backend.parse_g1(in.take(backend.descriptor().g1_size));
    } catch (const Error& err) {
        raise(Errc::protocol_error, err.what());
    }
}

G2Element read_g2(ByteReader& in, const Backend& backend) {
    try {
        return backend.parse_g2(in.take(backend.descriptor().g2_size));
    } catch (const Error& err) {
        raise(Errc::protocol_error, err.what());
    }
}

MirroredPoint read_mirror(ByteReader& in, const Backend& backend) {
    G1Element g1 = read_g1(in, backend);
    G2Element g2 = read_g2(in, backend);
    return MirroredPoint{std::move(g1), std::move(g2)};
}

void put_mirror(Bytes& out, const MirroredPoint& m) {
    append_bytes(out, m.g1.bytes);
    append_bytes(out, m.g2.bytes);
}

const Backend& require_backend(const Backend* backend) {
    if (backend == nullptr) {
        raise(Errc::protocol_error, "message needs backend context");
    }
    return *backend;
}

}  // namespace

Bytes params_to_bytes(const SystemParams& params) {
    Bytes out;
    out.push_back(static_cast<uint8_t>(params.backend_id));
    append_u64_be(out, params.toy_order);
    put_hash_config(out, params.hash, params.xof_name);
    put_mirror(out, params.generator);
    put_mirror(out, params.pkg_pub);
    put_mirror(out, params.pkpo_pub);
    return out;
}

SystemParams params_from_bytes(const Bytes& bytes) {
    ByteReader in(bytes);
    SystemParams params;
    uint8_t id = in.u8();
    if (id != 1 && id != 2) raise(Errc::protocol_error, "unknown backend id");
    params.backend_id = static_cast<BackendId>(id);
    params.toy_order = in.u64();
    read_hash_config(in, params.hash, params.xof_name);
    std::unique_ptr<Backend> backend;
    try {
        backend = make_backend(params.backend_id, params.toy_order);
    } catch (const Error& err) {
        raise(Errc::protocol_error, err.what());
    }
    params.generator = read_mirror(in, *backend);
    params.pkg_pub = read_mirror(in, *backend);
    params.pkpo_pub = read_mirror(in, *backend);
    in.finish();
    if (params.generator.g1 != backend->generator_g1() ||
        params.generator.g2 != backend->generator_g2()) {
        raise(Errc::protocol_error, "generator does not match the backend");
    }
    if (params.xof_name != "SHAKE256") {
        raise(Errc::protocol_error, "unsupported hash primitive");
    }
    return params;
}

Bytes partial_params_to_bytes(const PartialParams& partial) {
    Bytes out;
    out.push_back(static_cast<uint8_t>(partial.backend_id));
    append_u64_be(out, partial.toy_order);
    put_hash_config(out, partial.hash, partial.xof_name);
    put_mirror(out, partial.generator);
    put_mirror(out, partial.pkg_pub);
    return out;
}

PartialParams partial_params_from_bytes(const Bytes& bytes) {
    ByteReader in(bytes);
    PartialParams partial;
    uint8_t id = in.u8();
    if (id != 1 && id != 2) raise(Errc::protocol_error, "unknown backend id");
    partial.backend_id = static_cast<BackendId>(id);
    partial.toy_order = in.u64();
    read_hash_config(in, partial.hash, partial.xof_name);
    std::unique_ptr<Backend> backend =
        make_backend(partial.backend_id, partial.toy_order);
    partial.generator = read_mirror(in, *backend);
    partial.pkg_pub = read_mirror(in, *backend);
    in.finish();
    return partial;
}

MsgType message_type(const Message& msg) {
    return static_cast<MsgType>(msg.index() + 1);
}

Frame encode_message(const Message& msg) {
    Frame frame;
    frame.type = message_type(msg);
    std::visit(
        [&frame](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            Bytes& out = frame.payload;
            if constexpr (std::is_same_v<T, ParamsRequest>) {
                // empty payload
            } else if constexpr (std::is_same_v<T, ParamsReply>) {
                out = params_to_bytes(m.params);
            } else if constexpr (std::is_same_v<T, PartialKeyRequest>) {
                put_identity(out, m.identity);
                put_mirror(out, m.usk_pub);
            } else if constexpr (std::is_same_v<T, PartialKeyReplyMsg>) {
                append_bytes(out, m.reply.q_pkg.bytes);
                append_bytes(out, m.reply.t_pkg.bytes);
            } else if constexpr (std::is_same_v<T, SecureRequest>) {
                put_identity(out, m.identity);
                put_mirror(out, m.usk_pub);
                append_bytes(out, m.partial.q_pkg.bytes);
                append_bytes(out, m.partial.t_pkg.bytes);
            } else if constexpr (std::is_same_v<T, SecureReplyMsg>) {
                append_bytes(out, m.reply.q_pkpo.bytes);
                append_bytes(out, m.reply.t_pkpo.bytes);
            } else if constexpr (std::is_same_v<T, ErrorReply>) {
                append_u32_be(out, m.code);
                put_string16(out, m.text);
            }
        },
        msg);
    return frame;
}

Message decode_message(const Frame& frame, const Backend* backend) {
    ByteReader in(frame.payload);
    switch (frame.type) {
        case MsgType::params_request: {
            in.finish();
            return ParamsRequest{};
        }
        case MsgType::params_reply: {
            return ParamsReply{params_from_bytes(frame.payload)};
        }
        case MsgType::partial_key_request: {
            PartialKeyRequest msg;
            msg.identity = in.identity();
            msg.usk_pub = read_mirror(in, require_backend(backend));
            in.finish();
            return msg;
        }
        case MsgType::partial_key_reply: {
            const Backend& b = require_backend(backend);
            PartialKeyReplyMsg msg;
            msg.reply.q_pkg = read_g1(in, b);
            msg.reply.t_pkg = read_g1(in, b);
            in.finish();
            return msg;
        }
        case MsgType::secure_request: {
            const Backend& b = require_backend(backend);
            SecureRequest msg;
            msg.identity = in.identity();
            msg.usk_pub = read_mirror(in, b);
            msg.partial.q_pkg = read_g1(in, b);
            msg.partial.t_pkg = read_g1(in, b);
            in.finish();
            return msg;
        }
        case MsgType::secure_reply: {
            const Backend& b = require_backend(backend);
            SecureReplyMsg msg;
            msg.reply.q_pkpo = read_g1(in, b);
            msg.reply.t_pkpo = read_g1(in, b);
            in.finish();
            return msg;
        }
        case MsgType::error_reply: {
            ErrorReply msg;
            msg.code = in.u32();
            msg.text = in.string16();
            in.finish();
            return msg;
        }
    }
    raise(Errc::protocol_error, "unknown message type");
}

// ---- sockets ------------------------------------------------------------------

namespace {

struct Fd {
    int fd = -1;
    Fd() = default;
    explicit Fd(int value) : fd(value) {}
    Fd(Fd&& other) noexcept : fd(other.fd) { other.fd = -1; }
    Fd& operator=(Fd&& other) noexcept {
        if (this != &other) {
            close_fd();
            fd = other.fd;
            other.fd = -1;
        }
        return *this;
    }
    ~Fd() { close_fd(); }
    void close_fd() {
        if (fd >= 0) ::close(fd);
        fd = -1;
    }
    bool valid() const { return fd >= 0; }
};

bool send_all(int fd, const uint8_t* data, size_t len) {
    while (len > 0) {
        ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
        if (n <= 0) return false;
        data += n;
        len -= static_cast<size_t>(n);
    }
    return true;
}

bool recv_exact(int fd, uint8_t* data, size_t len) {
    while (len > 0) {
        ssize_t n = ::recv(fd, data, len, 0);
        if (n <= 0) return false;
        data += n;
        len -= static_cast<size_t>(n);
    }
    return true;
}

void write_frame_fd(int fd, const Frame& frame) {
    Bytes wire = encode_frame(frame);
    if (!send_all(fd, wire.data(), wire.size())) {
        raise(Errc::protocol_error, "connection closed while sending");
    }
}

// False on clean EOF before any byte; throws on malformed data.
bool read_frame_fd(int fd, Frame& out) {
    uint8_t header[6];
    ssize_t first = ::recv(fd, header, 1, 0);
    if (first == 0) return false;
    if (first < 0) raise(Errc::protocol_error, "connection error");
    if (!recv_exact(fd, header + 1, 5)) {
        raise(Errc::protocol_error, "truncated frame header");
    }
    uint32_t len = static_cast<uint32_t>(header[0]) << 24 |
                   static_cast<uint32_t>(header[1]) << 16 |
                   static_cast<uint32_t>(header[2]) << 8 | header[3];
    if (len > kMaxFramePayload) raise(Errc::protocol_error, "oversized frame");
    Bytes wire(header, header + 6);
    wire.resize(6 + len);
    if (len > 0 && !recv_exact(fd, wire.data() + 6, len)) {
        raise(Errc::protocol_error, "truncated frame body");
    }
    out = decode_frame(wire);
    return true;
}

Fd connect_tcp(const Endpoint& endpoint) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    std::string port = std::to_string(endpoint.port);
    if (getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &result) != 0) {
        raise(Errc::protocol_error, "cannot resolve " + endpoint.host);
    }
    Fd fd;
    for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
        Fd candidate(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
        if (!candidate.valid()) continue;
        timeval timeout{10, 0};
        setsockopt(candidate.fd, SOL_SOCKET, SO_RCVTIMEO, &timeout,
                   sizeof(timeout));
        if (::connect(candidate.fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            fd = std::move(candidate);
            break;
        }
    }
    freeaddrinfo(result);
    if (!fd.valid()) {
        raise(Errc::protocol_error,
              "cannot connect to " + endpoint.host + ":" + port);
    }
    return fd;
}

}  // namespace

Endpoint parse_endpoint(const std::string& host_port) {
    size_t colon = host_port.rfind(':');
    if (colon == std::string::npos || colon == 0 ||
        colon + 1 >= host_port.size()) {
        raise(Errc::protocol_error, "expected host:port");
    }
    unsigned long port = std::stoul(host_port.substr(colon + 1));
    if (port == 0 || port > 0xffff) {
        raise(Errc::protocol_error, "port out of range");
    }
    return Endpoint{host_port.substr(0, colon), static_cast<uint16_t>(port)};
}

// ---- server ---------------------------------------------------------------------

struct AuthorityServer::Impl {
    enum class Role { pkg, pkpo };

    const Backend& backend;
    SystemParams params;
    Role role;
    PkgSecret pkg{};
    PkpoSecret pkpo{};
    VetHook vet;
    std::string transcript_path;
    std::mutex transcript_mutex;
    Fd listen_fd;
    std::atomic<bool> stopping{false};
    std::atomic<int> active_connections{0};
    std::thread accept_thread;

    Impl(const Backend& b, SystemParams p, Role r)
        : backend(b), params(std::move(p)), role(r) {}

    void append_transcript(const std::string& stage, const std::string& id,
                           const Bytes& a, const Bytes& b) {
        if (transcript_path.empty()) return;
        std::lock_guard<std::mutex> lock(transcript_mutex);
        std::ofstream out(transcript_path, std::ios::app);
        out << stage << " " << to_hex(str_bytes(id)) << " " << to_hex(a) << " "
            << to_hex(b) << "\n";
    }

    Message handle(const Message& request) {
        if (std::holds_alternative<ParamsRequest>(request)) {
            return ParamsReply{params};
        }
        if (const auto* partial = std::get_if<PartialKeyRequest>(&request)) {
            if (role != Role::pkg) {
                return ErrorReply{
                    static_cast<uint32_t>(WireError::protocol_error),
                    "not the issuing authority"};
            }
            try {
                PartialKeyReply reply =
                    partial_key_supply(backend, pkg, params, partial->identity,
                                       partial->usk_pub, vet);
                append_transcript("partial", partial->identity,
                                  reply.q_pkg.bytes, reply.t_pkg.bytes);
                return PartialKeyReplyMsg{std::move(reply)};
            } catch (const Error& err) {
                return error_reply(err);
            }
        }
        if (const auto* secure = std::get_if<SecureRequest>(&request)) {
            if (role != Role::pkpo) {
                return ErrorReply{
                    static_cast<uint32_t>(WireError::protocol_error),
                    "not the privacy authority"};
            }
            try {
                SecuredKeyReply reply =
                    key_securing(backend, pkpo, params, secure->identity,
                                 secure->usk_pub, secure->partial);
                append_transcript("secured", secure->identity,
                                  reply.q_pkpo.bytes, reply.t_pkpo.bytes);
                return SecureReplyMsg{std::move(reply)};
            } catch (const Error& err) {
                return error_reply(err);
            }
        }
        return ErrorReply{static_cast<uint32_t>(WireError::protocol_error),
                          "unexpected message"};
    }

    static Message error_reply(const Error& err) {
        WireError code = WireError::internal_error;
        switch (err.code()) {
            case Errc::identity_rejected:
                code = WireError::identity_rejected;
                break;
            case Errc::verification_failed:
            case Errc::invalid_element:
                code = WireError::verification_failed;
                break;
            case Errc::protocol_error:
                code = WireError::protocol_error;
                break;
            default: break;
        }
        return ErrorReply{static_cast<uint32_t>(code), err.what()};
    }

    void serve_connection(int fd) {
        Fd guard(fd);
        ++active_connections;
        struct Tracker {
            std::atomic<int>& count;
            ~Tracker() { --count; }
        } tracker{active_connections};
        for (;;) {
            Frame frame;
            try {
                if (!read_frame_fd(guard.fd, frame)) return;
                Message request = decode_message(frame, &backend);
                write_frame_fd(guard.fd, encode_message(handle(request)));
            } catch (const Error& err) {
                // malformed input: answer once, then drop the connection
                try {
                    write_frame_fd(
                        guard.fd,
                        encode_message(ErrorReply{
                            static_cast<uint32_t>(WireError::protocol_error),
                            err.what()}));
                } catch (const Error&) {
                }
                return;
            }
        }
    }

    void accept_loop() {
        for (;;) {
            int fd = ::accept(listen_fd.fd, nullptr, nullptr);
            if (fd < 0) {
                if (stopping.load()) return;
                continue;
            }
            std::thread(&Impl::serve_connection, this, fd).detach();
        }
    }
};

static Fd listen_tcp(const std::string& host, uint16_t& port) {
    Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
    if (!fd.valid()) raise(Errc::protocol_error, "socket failed");
    int yes = 1;
    setsockopt(fd.fd, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (host.empty() || host == "0.0.0.0") {
        addr.sin_addr.s_addr = INADDR_ANY;
    } else if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        raise(Errc::protocol_error, "bad bind address " + host);
    }
    if (::bind(fd.fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        raise(Errc::protocol_error, "cannot bind " + host);
    }
    if (::listen(fd.fd, 16) != 0) raise(Errc::protocol_error, "listen failed");
    socklen_t len = sizeof(addr);
    getsockname(fd.fd, reinterpret_cast<sockaddr*>(&addr), &len);
    port = ntohs(addr.sin_port);
    return fd;
}

AuthorityServer::~AuthorityServer() { stop(); }

void AuthorityServer::stop() {
    if (!impl_) return;
    impl_->stopping.store(true);
    ::shutdown(impl_->listen_fd.fd, SHUT_RDWR);
    impl_->listen_fd.close_fd();
    if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
    // connection handlers are detached; wait for stragglers before the
    // state they reference goes away
    for (int i = 0; i < 5000 && impl_->active_connections.load() > 0; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(1));
    }
}

std::unique_ptr<AuthorityServer> AuthorityServer::start(
    std::unique_ptr<AuthorityServer::Impl> impl, const std::string& bind_host,
    uint16_t port) {
    impl->listen_fd = listen_tcp(bind_host, port);
    std::unique_ptr<AuthorityServer> server(new AuthorityServer());
    server->impl_ = std::move(impl);
    server->port_ = port;
    server->impl_->accept_thread =
        std::thread(&AuthorityServer::Impl::accept_loop, server->impl_.get());
    return server;
}

std::unique_ptr<AuthorityServer> AuthorityServer::serve_pkg(
    const Backend& backend, const PkgSecret& pkg, const SystemParams& params,
    VetHook vet, const std::string& bind_host, uint16_t port,
    const std::string& transcript_path) {
    auto impl = std::make_unique<Impl>(backend, params, Impl::Role::pkg);
    impl->pkg = pkg;
    impl->vet = std::move(vet);
    impl->transcript_path = transcript_path;
    return start(std::move(impl), bind_host, port);
}

std::unique_ptr<AuthorityServer> AuthorityServer::serve_pkpo(
    const Backend& backend, const PkpoSecret& pkpo, const SystemParams& params,
    const std::string& bind_host, uint16_t port,
    const std::string& transcript_path) {
    auto impl = std::make_unique<Impl>(backend, params, Impl::Role::pkpo);
    impl->pkpo = pkpo;
    impl->transcript_path = transcript_path;
    return start(std::move(impl), bind_host, port);
}

// ---- client -----------------------------------------------------------------------

Message roundtrip(const Endpoint& endpoint, const Message& request,
                  const Backend* backend) {
    Fd fd = connect_tcp(endpoint);
    write_frame_fd(fd.fd, encode_message(request));
    Frame reply;
    if (!read_frame_fd(fd.fd, reply)) {
        raise(Errc::protocol_error, "connection closed before reply");
    }
    return decode_message(reply, backend);
}

SystemParams fetch_params(const Endpoint& endpoint) {
    Message reply = roundtrip(endpoint, ParamsRequest{}, nullptr);
    if (const auto* params = std::get_if<ParamsReply>(&reply)) {
        return params->params;
    }
    if (const auto* err = std::get_if<ErrorReply>(&reply)) {
        raise(Errc::protocol_error, "authority refused: " + err->text);
    }
    raise(Errc::protocol_error, "unexpected reply to params request");
}

namespace {

[[noreturn]] void raise_wire_error(const ErrorReply& err) {
    switch (static_cast<WireError>(err.code)) {
        case WireError::identity_rejected:
            raise(Errc::identity_rejected, err.text);
        case WireError::verification_failed:
            raise(Errc::verification_failed, err.text);
        default:
            raise(Errc::protocol_error, err.text);
    }
}

}  // namespace

CeremonyRun client_run_ceremony(const Backend& backend,
                                const SystemParams& params,
                                const UserKeypair& user,
                                const Endpoint& pkg_addr,
                                const Endpoint& pkpo_addr) {
    CeremonySession session;
    CeremonyTranscript transcript;
    transcript.identity = user.identity;
    transcript.usk_pub = user.usk_pub;
    try {
        Message reply =
            roundtrip(pkg_addr,
                      PartialKeyRequest{user.identity, user.usk_pub}, &backend);
        if (const auto* err = std::get_if<ErrorReply>(&reply)) {
            raise_wire_error(*err);
        }
        const auto* partial = std::get_if<PartialKeyReplyMsg>(&reply);
        if (partial == nullptr) {
            raise(Errc::protocol_error, "unexpected reply from the issuer");
        }
        transcript.partial = partial->reply;
        if (!verify_partial(backend, params, partial->reply)) {
            // do not forward an unverified partial key anywhere
            raise(Errc::verification_failed, "issuer reply fails its check");
        }
        session.state = CeremonySession::State::awaiting_secure;

        Message secured_reply = roundtrip(
            pkpo_addr,
            SecureRequest{user.identity, user.usk_pub, partial->reply},
            &backend);
        if (const auto* err = std::get_if<ErrorReply>(&secured_reply)) {
            raise_wire_error(*err);
        }
        const auto* secured = std::get_if<SecureReplyMsg>(&secured_reply);
        if (secured == nullptr) {
            raise(Errc::protocol_error,
                  "unexpected reply from the privacy authority");
        }
        transcript.secured = secured->reply;
        ExtractedPrivateKey key =
            key_fetching(backend, user, params, secured->reply);
        session.state = CeremonySession::State::done;
        transcript.outcome = CeremonyTranscript::Outcome::completed;
        return CeremonyRun{std::move(key), std::move(transcript)};
    } catch (const Error& err) {
        session.fail(errc_name(err.code()));
        transcript.outcome = CeremonyTranscript::Outcome::failed;
        transcript.failure_reason = errc_name(err.code());
        throw;
    }
}

}  // namespace mibe

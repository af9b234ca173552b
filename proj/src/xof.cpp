#include "mibe/xof.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace mibe {

namespace {
struct CtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;
}  // namespace

Bytes xof(const Bytes& input, size_t out_len) {
    Bytes out(out_len);
    CtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), input.data(), input.size()) != 1 ||
        EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
        throw std::runtime_error("SHAKE256 failed");
    }
    return out;
}

Bytes sha256(const Bytes& input) {
    Bytes out(32);
    unsigned int len = 0;
    CtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), input.data(), input.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != 32) {
        throw std::runtime_error("SHA-256 failed");
    }
    return out;
}

}  // namespace mibe

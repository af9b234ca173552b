#include <cstdint>

#include "mibe/backend.hpp"
#include "mibe/errors.hpp"
#include "mibe/xof.hpp"

// Exponent-space oracle: all three groups are Z_q with the generator fixed
// at 1, so every element literally is its own discrete logarithm and
// e(a, b) = a*b mod q. Useless for security, ideal for checking protocol
// algebra by direct arithmetic.

namespace mibe {

namespace {

constexpr size_t kToyWidth = 8;  // every kind: unsigned 64-bit little-endian

bool is_small_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

class ToyBackend final : public Backend {
   public:
    explicit ToyBackend(uint64_t order) : q_(order) {
        if (order < 3 || order >= (1ull << 31) || !is_small_prime(order)) {
            raise(Errc::backend_refused,
                  "toy order must be an odd prime below 2^31");
        }
        desc_.id = BackendId::toy;
        desc_.name = "toy";
        for (int i = 7; i >= 0; --i) {
            desc_.order.push_back(static_cast<uint8_t>(q_ >> (8 * i)));
        }
        desc_.g1_size = desc_.g2_size = desc_.gt_size = desc_.scalar_size =
            kToyWidth;
    }

    const BackendDescriptor& descriptor() const override { return desc_; }

    G1Element generator_g1() const override { return {encode(1)}; }
    G2Element generator_g2() const override { return {encode(1)}; }
    G1Element identity_g1() const override { return {encode(0)}; }
    G2Element identity_g2() const override { return {encode(0)}; }
    GTElement identity_gt() const override { return {encode(0)}; }

    GTElement pair(const G1Element& a, const G2Element& b) const override {
        uint64_t x = decode(a.bytes);
        uint64_t y = decode(b.bytes);
        return {encode(mulmod(x, y))};
    }

    G1Element mul_g1(const Scalar& k, const G1Element& a) const override {
        return {encode(mulmod(decode(k.bytes), decode(a.bytes)))};
    }

    G2Element mul_g2(const Scalar& k, const G2Element& a) const override {
        return {encode(mulmod(decode(k.bytes), decode(a.bytes)))};
    }

    GTElement gt_pow(const GTElement& g, const Scalar& k) const override {
        return {encode(mulmod(decode(g.bytes), decode(k.bytes)))};
    }

    G1Element parse_g1(const Bytes& bytes) const override {
        return {check(bytes)};
    }
    G2Element parse_g2(const Bytes& bytes) const override {
        return {check(bytes)};
    }
    GTElement parse_gt(const Bytes& bytes) const override {
        return {check(bytes)};
    }

    Scalar scalar_from_u64(uint64_t v) const override {
        return {encode(v % q_)};
    }

    Scalar parse_scalar(const Bytes& bytes) const override {
        return {check(bytes)};
    }

    Scalar scalar_from_wide_bytes(const Bytes& wide) const override {
        uint64_t acc = 0;
        for (uint8_t b : wide) acc = (acc << 8 | b) % q_;
        return {encode(acc)};
    }

    Scalar add_scalars(const Scalar& a, const Scalar& b) const override {
        return {encode((decode(a.bytes) + decode(b.bytes)) % q_)};
    }

    Scalar mul_scalars(const Scalar& a, const Scalar& b) const override {
        return {encode(mulmod(decode(a.bytes), decode(b.bytes)))};
    }

    Scalar invert_scalar(const Scalar& a) const override {
        uint64_t v = decode(a.bytes);
        if (v == 0) raise(Errc::invalid_scalar, "no inverse of zero");
        // q prime: v^(q-2) mod q
        uint64_t result = 1;
        uint64_t base = v;
        uint64_t e = q_ - 2;
        while (e > 0) {
            if (e & 1) result = mulmod(result, base);
            base = mulmod(base, base);
            e >>= 1;
        }
        return {encode(result)};
    }

    bool scalar_is_zero(const Scalar& a) const override {
        return decode(a.bytes) == 0;
    }

    Scalar random_scalar(Rng& rng) const override {
        // rejection sampling over the smallest power-of-two cover of q
        uint64_t mask = 1;
        while (mask < q_) mask <<= 1;
        --mask;
        for (;;) {
            uint64_t v = rng.next_u64() & mask;
            if (v < q_) return {encode(v)};
        }
    }

    G1Element hash_to_g1(const Bytes& framed_input) const override {
        for (uint32_t ctr = 0;; ++ctr) {
            Bytes input = framed_input;
            append_u32_be(input, ctr);
            uint64_t v = decode_wide(xof(input, 16));
            if (v != 0) return {encode(v)};
        }
    }

   private:
    Bytes encode(uint64_t v) const {
        Bytes out;
        append_u64_le(out, v);
        return out;
    }

    uint64_t decode(const Bytes& bytes) const {
        Bytes checked = check(bytes);
        return read_u64_le(checked.data());
    }

    Bytes check(const Bytes& bytes) const {
        if (bytes.size() != kToyWidth) {
            raise(Errc::invalid_element, "toy element must be 8 bytes");
        }
        if (read_u64_le(bytes.data()) >= q_) {
            raise(Errc::invalid_element, "toy element out of range");
        }
        return bytes;
    }

    uint64_t decode_wide(const Bytes& wide) const {
        uint64_t acc = 0;
        for (uint8_t b : wide) acc = (acc << 8 | b) % q_;
        return acc;
    }

    uint64_t mulmod(uint64_t a, uint64_t b) const {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(a) * b) % q_);
    }

    uint64_t q_;
    BackendDescriptor desc_;
};

}  // namespace

std::unique_ptr<Backend> make_toy_backend(uint64_t order) {
    return std::make_unique<ToyBackend>(order);
}

}  // namespace mibe

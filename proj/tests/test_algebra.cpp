#include <doctest.h>

#include <set>

#include "mibe/backend.hpp"
#include "mibe/errors.hpp"
#include "mibe/rng.hpp"

using namespace mibe;

namespace {

Bytes le64(uint64_t v) {
    Bytes out;
    append_u64_le(out, v);
    return out;
}

G1Element toy_g1(const Backend& b, uint64_t v) { return b.parse_g1(le64(v)); }
G2Element toy_g2(const Backend& b, uint64_t v) { return b.parse_g2(le64(v)); }
GTElement toy_gt(const Backend& b, uint64_t v) { return b.parse_gt(le64(v)); }

// The protocol-level algebra must hold identically on both backends.
void check_axioms(const Backend& backend) {
    SeededRng rng(7);
    const G1Element p = backend.generator_g1();
    const G2Element q = backend.generator_g2();
    const GTElement base = backend.pair(p, q);

    CHECK(base != backend.identity_gt());  // non-degeneracy

    for (int i = 0; i < 100; ++i) {
        Scalar x = backend.random_nonzero_scalar(rng);
        Scalar y = backend.random_nonzero_scalar(rng);
        GTElement lhs = backend.pair(backend.mul_g1(x, p), backend.mul_g2(y, q));
        GTElement rhs = backend.gt_pow(base, backend.mul_scalars(x, y));
        CHECK(lhs == rhs);
    }

    // pairing with either identity collapses to the GT identity
    CHECK(backend.pair(backend.identity_g1(), q) == backend.identity_gt());
    CHECK(backend.pair(p, backend.identity_g2()) == backend.identity_gt());

    // scalar action: 1 fixes, 0 annihilates, exponents compose
    Scalar one = backend.scalar_from_u64(1);
    Scalar zero = backend.scalar_from_u64(0);
    CHECK(backend.mul_g1(one, p) == p);
    CHECK(backend.mul_g1(zero, p) == backend.identity_g1());
    CHECK(backend.gt_pow(base, one) == base);
    for (int i = 0; i < 20; ++i) {
        Scalar a = backend.random_nonzero_scalar(rng);
        Scalar b = backend.random_nonzero_scalar(rng);
        CHECK(backend.gt_pow(backend.gt_pow(base, a), b) ==
              backend.gt_pow(base, backend.mul_scalars(a, b)));
        CHECK(backend.mul_g1(a, backend.mul_g1(b, p)) ==
              backend.mul_g1(backend.mul_scalars(a, b), p));
    }

    // serialization roundtrips bit-exactly for every kind
    for (int i = 0; i < 20; ++i) {
        Scalar k = backend.random_nonzero_scalar(rng);
        G1Element a = backend.mul_g1(k, p);
        G2Element b = backend.mul_g2(k, q);
        GTElement c = backend.gt_pow(base, k);
        CHECK(backend.parse_g1(a.bytes) == a);
        CHECK(backend.parse_g2(b.bytes) == b);
        CHECK(backend.parse_gt(c.bytes) == c);
        CHECK(backend.parse_scalar(k.bytes) == k);
    }

    // mirrored pairs are cross-checkable without the scalar
    Scalar k = backend.random_nonzero_scalar(rng);
    MirroredPoint mirror = backend.mirrored_base_mul(k);
    CHECK(backend.mirror_consistent(mirror));
    Scalar other = backend.random_nonzero_scalar(rng);
    MirroredPoint bad{mirror.g1, backend.mul_g2(other, q)};
    CHECK_FALSE(backend.mirror_consistent(bad));

    // malformed input is a decode error, not garbage output
    const BackendDescriptor& desc = backend.descriptor();
    CHECK_THROWS_AS((void)backend.parse_g1(Bytes(desc.g1_size, 0xff)), Error);
    CHECK_THROWS_AS((void)backend.parse_g2(Bytes(desc.g2_size, 0xff)), Error);
    CHECK_THROWS_AS((void)backend.parse_gt(Bytes(desc.gt_size, 0xff)), Error);
    CHECK_THROWS_AS((void)backend.parse_g1(Bytes(desc.g1_size + 1, 0)), Error);
    CHECK_THROWS_AS((void)backend.parse_g1(Bytes{}), Error);
}

}  // namespace

TEST_CASE("toy oracle pins the worked arithmetic") {
    auto backend = make_toy_backend(101);
    const Backend& b = *backend;

    CHECK(b.pair(toy_g1(b, 5), toy_g2(b, 11)) == toy_gt(b, 55));
    CHECK(b.mul_g1(b.scalar_from_u64(7), toy_g1(b, 29)) == toy_g1(b, 1));
    CHECK(b.gt_pow(toy_gt(b, 11), b.scalar_from_u64(5)) == toy_gt(b, 55));
    CHECK(b.pair(b.identity_g1(), toy_g2(b, 11)) == b.identity_gt());
    CHECK(b.mul_g1(b.scalar_from_u64(1), toy_g1(b, 29)) == toy_g1(b, 29));
    // order annihilation: q = 0 as a scalar
    CHECK(b.mul_g1(b.scalar_from_u64(101), toy_g1(b, 29)) == b.identity_g1());
}

TEST_CASE("toy elements are 8-byte little-endian and canonical") {
    auto backend = make_toy_backend(101);
    CHECK(toy_g1(*backend, 29).bytes == le64(29));
    CHECK(backend->parse_g1(le64(29)).bytes == le64(29));
    CHECK_THROWS_AS((void)backend->parse_g1(le64(101)), Error);   // >= q
    CHECK_THROWS_AS((void)backend->parse_g1(le64(4096)), Error);  // >= q
    CHECK_THROWS_AS((void)backend->parse_scalar(le64(101)), Error);
    CHECK(backend->parse_scalar(le64(100)) == backend->scalar_from_u64(100));
}

TEST_CASE("toy backend wants a small odd prime order") {
    CHECK_THROWS_AS((void)make_toy_backend(100), Error);
    CHECK_THROWS_AS((void)make_toy_backend(2), Error);
    CHECK_THROWS_AS((void)make_toy_backend(1ull << 40), Error);
    CHECK_NOTHROW((void)make_toy_backend(1000003));
}

TEST_CASE("toy backend satisfies the bilinear axioms") {
    auto backend = make_toy_backend(101);
    check_axioms(*backend);
}

TEST_CASE("production backend satisfies the bilinear axioms") {
    auto backend = make_production_backend();
    check_axioms(*backend);
}

TEST_CASE("production rejects off-curve and non-canonical encodings") {
    auto backend = make_production_backend();
    const BackendDescriptor& desc = backend->descriptor();
    G1Element p = backend->generator_g1();

    // tamper the y coordinate: off curve
    Bytes off = p.bytes;
    off[desc.g1_size - 1] ^= 1;
    CHECK_THROWS_AS((void)backend->parse_g1(off), Error);

    // a G1 encoding is not a G2 encoding
    CHECK_THROWS_AS((void)backend->parse_g2(p.bytes), Error);
    CHECK_THROWS_AS((void)backend->parse_g1(backend->generator_g2().bytes),
                    Error);

    // identity must be all zero after the tag
    Bytes almost_zero = backend->identity_g1().bytes;
    almost_zero[5] = 1;
    CHECK_THROWS_AS((void)backend->parse_g1(almost_zero), Error);

    // GT values outside the order-q subgroup are refused
    Bytes stray(desc.gt_size, 0);
    stray[desc.gt_size / 2 - 1] = 2;  // the field element 2 + 0i
    CHECK_THROWS_AS((void)backend->parse_gt(stray), Error);

    // zero is not a GT element
    CHECK_THROWS_AS((void)backend->parse_gt(Bytes(desc.gt_size, 0)), Error);
}

TEST_CASE("scalar arithmetic is mod q") {
    for (BackendId id : {BackendId::toy, BackendId::production}) {
        auto backend = make_backend(id);
        SeededRng rng(3);
        Scalar a = backend->random_nonzero_scalar(rng);
        Scalar inv = backend->invert_scalar(a);
        CHECK(backend->mul_scalars(a, inv) == backend->scalar_from_u64(1));
        CHECK(backend->scalar_is_zero(backend->scalar_from_u64(0)));
        CHECK_THROWS_AS((void)backend->invert_scalar(backend->scalar_from_u64(0)),
                        Error);
    }
}

TEST_CASE("distinct seeds give distinct scalars") {
    auto backend = make_production_backend();
    std::set<Bytes> seen;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        SeededRng rng(seed);
        seen.insert(backend->random_nonzero_scalar(rng).bytes);
    }
    CHECK(seen.size() == 20);
}

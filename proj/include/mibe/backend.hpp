#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "mibe/bytes.hpp"
#include "mibe/rng.hpp"

namespace mibe {

enum class BackendId : uint8_t {
    production = 1,  // pairing-friendly curve over a large prime field
    toy = 2,         // exponent-space oracle over Z_q, for verification only
};

const char* backend_name(BackendId id);

// Group elements are immutable values holding their canonical encoding.
// Every backend operation validates its inputs, so elements may be built
// from untrusted bytes and passed around freely.
struct G1Element {
    Bytes bytes;
    bool operator==(const G1Element&) const = default;
};

struct G2Element {
    Bytes bytes;
    bool operator==(const G2Element&) const = default;
};

struct GTElement {
    Bytes bytes;
    bool operator==(const GTElement&) const = default;
};

struct Scalar {
    Bytes bytes;
    bool operator==(const Scalar&) const = default;
};

struct BackendDescriptor {
    BackendId id;
    std::string name;
    Bytes order;  // group order q, big-endian
    size_t g1_size;
    size_t g2_size;
    size_t gt_size;
    size_t scalar_size;
};

// A public value published in both source groups, derived from one scalar.
// The protocol needs to pair several public points on either side of the
// pairing; mirroring keeps that possible on asymmetric curves.
struct MirroredPoint {
    G1Element g1;
    G2Element g2;
    bool operator==(const MirroredPoint&) const = default;
};

class Backend {
   public:
    virtual ~Backend() = default;

    virtual const BackendDescriptor& descriptor() const = 0;

    virtual G1Element generator_g1() const = 0;
    virtual G2Element generator_g2() const = 0;
    virtual G1Element identity_g1() const = 0;
    virtual G2Element identity_g2() const = 0;
    virtual GTElement identity_gt() const = 0;

    // e: G1 x G2 -> GT, bilinear and non-degenerate on the generator
    // subgroups. pair(identity, b) = pair(a, identity) = identity_gt.
    virtual GTElement pair(const G1Element& a, const G2Element& b) const = 0;

    virtual G1Element mul_g1(const Scalar& k, const G1Element& a) const = 0;
    virtual G2Element mul_g2(const Scalar& k, const G2Element& a) const = 0;
    virtual GTElement gt_pow(const GTElement& g, const Scalar& k) const = 0;

    // Deserialize-and-validate. Throws Errc::invalid_element on wrong
    // length, out-of-range coordinates, off-curve points, or (for GT)
    // values outside the order-q subgroup. Encodings are canonical: the
    // returned element holds exactly the accepted bytes.
    virtual G1Element parse_g1(const Bytes& bytes) const = 0;
    virtual G2Element parse_g2(const Bytes& bytes) const = 0;
    virtual GTElement parse_gt(const Bytes& bytes) const = 0;

    virtual Scalar scalar_from_u64(uint64_t v) const = 0;
    virtual Scalar parse_scalar(const Bytes& bytes) const = 0;
    // Reduce a wide uniform byte string mod q (for hash outputs).
    virtual Scalar scalar_from_wide_bytes(const Bytes& wide) const = 0;
    virtual Scalar add_scalars(const Scalar& a, const Scalar& b) const = 0;
    virtual Scalar mul_scalars(const Scalar& a, const Scalar& b) const = 0;
    // Throws Errc::invalid_scalar on zero.
    virtual Scalar invert_scalar(const Scalar& a) const = 0;
    virtual bool scalar_is_zero(const Scalar& a) const = 0;

    // Uniform scalar in [0, q).
    virtual Scalar random_scalar(Rng& rng) const = 0;

    // Deterministic map of a domain-separated input onto G1; never returns
    // the identity element.
    virtual G1Element hash_to_g1(const Bytes& framed_input) const = 0;

    bool is_identity(const G1Element& a) const { return a == identity_g1(); }
    bool is_identity(const G2Element& a) const { return a == identity_g2(); }
    bool is_identity(const GTElement& a) const { return a == identity_gt(); }

    // Redraws until nonzero.
    Scalar random_nonzero_scalar(Rng& rng) const;

    // k * generator in both source groups.
    MirroredPoint mirrored_base_mul(const Scalar& k) const;

    // A mirrored pair is consistent when both halves encode the same
    // scalar: pair(X_g1, Q) == pair(P, X_g2) with P, Q the generators.
    bool mirror_consistent(const MirroredPoint& x) const;
};

std::unique_ptr<Backend> make_production_backend();
std::unique_ptr<Backend> make_toy_backend(uint64_t order = 101);
std::unique_ptr<Backend> make_backend(BackendId id, uint64_t toy_order = 101);

}  // namespace mibe

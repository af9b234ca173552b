#include <gmpxx.h>

#include <cstddef>

#include "mibe/backend.hpp"
#include "mibe/errors.hpp"
#include "mibe/xof.hpp"

// Supersingular curve E: y^2 = x^3 + x over F_p with p = 3 (mod 4), so
// #E(F_p) = p + 1 = h*q with q prime. G1 is the order-q subgroup of
// E(F_p). G2 elements are images of E(F_p) points under the distortion
// map (x, y) -> (-x, iy) into E(F_p^2), stored by their preimage. The
// pairing is the Tate pairing on E(F_p^2) with embedding degree 2; the
// distorted second argument has x in F_p, which lets the vertical-line
// denominators be dropped (they are killed by the p-1 part of the final
// exponentiation). GT is the order-q subgroup of F_p^2*.
//
// Parameters were generated once and frozen: q = 2^159 + 2^17 + 1 (prime,
// low Hamming weight), h a random 352-bit multiple of 4 chosen so that
// p = h*q - 1 is prime, and G the image of the smallest-x curve point
// under multiplication by h.

namespace mibe {

namespace {

const char* const kFieldPrime =
    "5f90352a5603ffb0926c3a9685a915e0684ce12c77797a3730e31ef9d811bd52"
    "6de72a72e3c5c83cfc38f28a63d0cf4c57c28f4f8c38d916dda83d8e5526d503";
const char* const kGroupOrder = "8000000000000000000000000000000000020001";
const char* const kCofactor =
    "bf206a54ac07ff6124d8752d0b522bc0d096c5d5c75f6fa50c31abcf91be6302"
    "1626bb090f06e750ab1ed504";
const char* const kGenX =
    "24c3373a577af4575aa1845cf2bf92ad8944bb09156ca4150c43a428541ac882"
    "45860a9f3f94242a4e4a89616adac2aef8df11f583974579593d945eee3c435b";
const char* const kGenY =
    "405590604e22d5041409253d283a6fd473fb711bc7728acc3543d6351bf8a809"
    "2555702e1d6613d45afab62fbce42222eeb01734a0e17961503e4420804cc536";

constexpr size_t kFpBytes = 64;
constexpr size_t kScalarBytes = 20;
constexpr size_t kPointBytes = 1 + 2 * kFpBytes;
constexpr size_t kGtBytes = 2 * kFpBytes;

constexpr uint8_t kG1Identity = 0x00;
constexpr uint8_t kG1Affine = 0x04;
constexpr uint8_t kG2Identity = 0x08;
constexpr uint8_t kG2Affine = 0x0c;

struct Pt {
    mpz_class x;
    mpz_class y;
    bool inf = true;
};

// a + b*i with i^2 = -1 (p = 3 mod 4 makes -1 a non-residue)
struct Fp2 {
    mpz_class a;
    mpz_class b;
};

void fp_to_bytes(const mpz_class& v, uint8_t* out) {
    size_t count = 0;
    for (size_t i = 0; i < kFpBytes; ++i) out[i] = 0;
    Bytes tmp(kFpBytes);
    mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    for (size_t i = 0; i < count; ++i) {
        out[kFpBytes - count + i] = tmp[i];
    }
}

mpz_class bytes_to_mpz(const uint8_t* in, size_t len) {
    mpz_class v;
    mpz_import(v.get_mpz_t(), len, 1, 1, 1, 0, in);
    return v;
}

class ProdBackend final : public Backend {
   public:
    ProdBackend()
        : p_(kFieldPrime, 16),
          q_(kGroupOrder, 16),
          h_(kCofactor, 16),
          gen_{mpz_class(kGenX, 16), mpz_class(kGenY, 16), false} {
        sqrt_exp_ = (p_ + 1) / 4;
        final_exp_ = (p_ + 1) / q_;
        desc_.id = BackendId::production;
        desc_.name = "production";
        desc_.order.resize(kScalarBytes);
        fp_fixed_export(q_, desc_.order.data(), kScalarBytes);
        desc_.g1_size = kPointBytes;
        desc_.g2_size = kPointBytes;
        desc_.gt_size = kGtBytes;
        desc_.scalar_size = kScalarBytes;
    }

    const BackendDescriptor& descriptor() const override { return desc_; }

    G1Element generator_g1() const override {
        return {encode_point(gen_, kG1Identity, kG1Affine)};
    }
    G2Element generator_g2() const override {
        return {encode_point(gen_, kG2Identity, kG2Affine)};
    }
    G1Element identity_g1() const override {
        return {encode_point(Pt{}, kG1Identity, kG1Affine)};
    }
    G2Element identity_g2() const override {
        return {encode_point(Pt{}, kG2Identity, kG2Affine)};
    }
    GTElement identity_gt() const override {
        return {encode_fp2(Fp2{1, 0})};
    }

    GTElement pair(const G1Element& a, const G2Element& b) const override {
        Pt pa = decode_point(a.bytes, kG1Identity, kG1Affine, "G1");
        Pt pb = decode_point(b.bytes, kG2Identity, kG2Affine, "G2");
        if (pa.inf || pb.inf) return identity_gt();
        Fp2 f = miller_loop(pa, pb);
        // f^(p-1) = conj(f)/f, then the remaining (p+1)/q
        Fp2 g = fp2_mul(fp2_conj(f), fp2_inv(f));
        return {encode_fp2(fp2_pow(g, final_exp_))};
    }

    G1Element mul_g1(const Scalar& k, const G1Element& a) const override {
        Pt pt = decode_point(a.bytes, kG1Identity, kG1Affine, "G1");
        Pt r = pt_mul(decode_scalar(k.bytes), pt);
        return {encode_point(r, kG1Identity, kG1Affine)};
    }

    G2Element mul_g2(const Scalar& k, const G2Element& a) const override {
        Pt pt = decode_point(a.bytes, kG2Identity, kG2Affine, "G2");
        Pt r = pt_mul(decode_scalar(k.bytes), pt);
        return {encode_point(r, kG2Identity, kG2Affine)};
    }

    GTElement gt_pow(const GTElement& g, const Scalar& k) const override {
        Fp2 v = decode_fp2(g.bytes);
        return {encode_fp2(fp2_pow(v, decode_scalar(k.bytes)))};
    }

    G1Element parse_g1(const Bytes& bytes) const override {
        decode_point(bytes, kG1Identity, kG1Affine, "G1");
        return {bytes};
    }

    G2Element parse_g2(const Bytes& bytes) const override {
        decode_point(bytes, kG2Identity, kG2Affine, "G2");
        return {bytes};
    }

    GTElement parse_gt(const Bytes& bytes) const override {
        decode_fp2(bytes);
        return {bytes};
    }

    Scalar scalar_from_u64(uint64_t v) const override {
        mpz_class m;
        mpz_import(m.get_mpz_t(), 1, 1, 8, 0, 0, &v);
        return {encode_scalar(m % q_)};
    }

    Scalar parse_scalar(const Bytes& bytes) const override {
        decode_scalar(bytes);
        return {bytes};
    }

    Scalar scalar_from_wide_bytes(const Bytes& wide) const override {
        mpz_class v = bytes_to_mpz(wide.data(), wide.size());
        return {encode_scalar(v % q_)};
    }

    Scalar add_scalars(const Scalar& a, const Scalar& b) const override {
        mpz_class v = decode_scalar(a.bytes) + decode_scalar(b.bytes);
        return {encode_scalar(v % q_)};
    }

    Scalar mul_scalars(const Scalar& a, const Scalar& b) const override {
        mpz_class v = decode_scalar(a.bytes) * decode_scalar(b.bytes);
        return {encode_scalar(v % q_)};
    }

    Scalar invert_scalar(const Scalar& a) const override {
        mpz_class v = decode_scalar(a.bytes);
        if (v == 0) raise(Errc::invalid_scalar, "no inverse of zero");
        mpz_class r;
        mpz_invert(r.get_mpz_t(), v.get_mpz_t(), q_.get_mpz_t());
        return {encode_scalar(r)};
    }

    bool scalar_is_zero(const Scalar& a) const override {
        return decode_scalar(a.bytes) == 0;
    }

    Scalar random_scalar(Rng& rng) const override {
        for (;;) {
            Bytes draw = rng.bytes(kScalarBytes);
            mpz_class v = bytes_to_mpz(draw.data(), draw.size());
            if (v < q_) return {encode_scalar(v)};
        }
    }

    G1Element hash_to_g1(const Bytes& framed_input) const override {
        for (uint32_t ctr = 0;; ++ctr) {
            Bytes input = framed_input;
            append_u32_be(input, ctr);
            Bytes d = xof(input, kFpBytes + 1);
            mpz_class x = bytes_to_mpz(d.data(), kFpBytes) % p_;
            mpz_class rhs = fp_mod(x * x * x + x);
            mpz_class y;
            mpz_powm(y.get_mpz_t(), rhs.get_mpz_t(), sqrt_exp_.get_mpz_t(),
                     p_.get_mpz_t());
            if (fp_mod(y * y) != rhs) continue;  // non-residue, next counter
            if ((d[kFpBytes] & 1) != mpz_odd_p(y.get_mpz_t())) {
                y = p_ - y;
            }
            Pt r = pt_mul(h_, Pt{x, y, false});  // clear cofactor
            if (r.inf) continue;
            return {encode_point(r, kG1Identity, kG1Affine)};
        }
    }

   private:
    mpz_class fp_mod(const mpz_class& v) const {
        mpz_class r = v % p_;
        if (r < 0) r += p_;
        return r;
    }

    mpz_class fp_inv(const mpz_class& v) const {
        mpz_class r;
        if (mpz_invert(r.get_mpz_t(), v.get_mpz_t(), p_.get_mpz_t()) == 0) {
            raise(Errc::invalid_element, "non-invertible field element");
        }
        return r;
    }

    static void fp_fixed_export(const mpz_class& v, uint8_t* out, size_t len) {
        for (size_t i = 0; i < len; ++i) out[i] = 0;
        size_t count = 0;
        Bytes tmp(len);
        mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
        for (size_t i = 0; i < count; ++i) out[len - count + i] = tmp[i];
    }

    // ---- E(F_p) affine arithmetic -------------------------------------

    Pt pt_double(const Pt& t) const {
        if (t.inf || t.y == 0) return Pt{};
        mpz_class lam = fp_mod((3 * t.x * t.x + 1) * fp_inv(fp_mod(2 * t.y)));
        mpz_class x3 = fp_mod(lam * lam - 2 * t.x);
        mpz_class y3 = fp_mod(lam * (t.x - x3) - t.y);
        return Pt{x3, y3, false};
    }

    Pt pt_add(const Pt& a, const Pt& b) const {
        if (a.inf) return b;
        if (b.inf) return a;
        if (a.x == b.x) {
            if (fp_mod(a.y + b.y) == 0) return Pt{};
            return pt_double(a);
        }
        mpz_class lam = fp_mod((b.y - a.y) * fp_inv(fp_mod(b.x - a.x)));
        mpz_class x3 = fp_mod(lam * lam - a.x - b.x);
        mpz_class y3 = fp_mod(lam * (a.x - x3) - a.y);
        return Pt{x3, y3, false};
    }

    Pt pt_mul(const mpz_class& k, const Pt& pt) const {
        Pt r{};
        if (k == 0 || pt.inf) return r;
        size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
        for (size_t i = bits; i-- > 0;) {
            r = pt_double(r);
            if (mpz_tstbit(k.get_mpz_t(), i)) r = pt_add(r, pt);
        }
        return r;
    }

    // ---- F_p^2 arithmetic ----------------------------------------------

    Fp2 fp2_mul(const Fp2& u, const Fp2& v) const {
        return Fp2{fp_mod(u.a * v.a - u.b * v.b),
                   fp_mod(u.a * v.b + u.b * v.a)};
    }

    Fp2 fp2_sqr(const Fp2& u) const {
        return Fp2{fp_mod((u.a - u.b) * (u.a + u.b)), fp_mod(2 * u.a * u.b)};
    }

    Fp2 fp2_conj(const Fp2& u) const { return Fp2{u.a, fp_mod(-u.b)}; }

    Fp2 fp2_inv(const Fp2& u) const {
        mpz_class norm_inv = fp_inv(fp_mod(u.a * u.a + u.b * u.b));
        return Fp2{fp_mod(u.a * norm_inv), fp_mod(-u.b * norm_inv)};
    }

    Fp2 fp2_pow(const Fp2& u, const mpz_class& e) const {
        Fp2 r{1, 0};
        if (e == 0) return r;
        size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
        for (size_t i = bits; i-- > 0;) {
            r = fp2_sqr(r);
            if (mpz_tstbit(e.get_mpz_t(), i)) r = fp2_mul(r, u);
        }
        return r;
    }

    bool fp2_is_one(const Fp2& u) const { return u.a == 1 && u.b == 0; }

    // ---- pairing ---------------------------------------------------------

    // Miller loop for the Tate pairing of P against the distortion image
    // of Qu, i.e. the point (-Qu.x, Qu.y * i). Vertical-line factors take
    // values in F_p and are omitted; the final exponentiation removes
    // them. The evaluated point never lies on a line through E(F_p)
    // points (its y-coordinate is purely imaginary and nonzero), so the
    // accumulated f stays nonzero.
    Fp2 miller_loop(const Pt& p_in, const Pt& qu) const {
        mpz_class xq = fp_mod(-qu.x);
        const mpz_class& yb = qu.y;
        Fp2 f{1, 0};
        Pt t = p_in;
        size_t bits = mpz_sizeinbase(q_.get_mpz_t(), 2);
        for (size_t i = bits - 1; i-- > 0;) {
            f = fp2_sqr(f);
            if (!t.inf) {
                if (t.y == 0) {
                    t = Pt{};  // vertical tangent: subfield factor, drop
                } else {
                    mpz_class lam = fp_mod((3 * t.x * t.x + 1) *
                                           fp_inv(fp_mod(2 * t.y)));
                    f = fp2_mul(f, line_at(t, lam, xq, yb));
                    mpz_class x3 = fp_mod(lam * lam - 2 * t.x);
                    t.y = fp_mod(lam * (t.x - x3) - t.y);
                    t.x = x3;
                }
            }
            if (mpz_tstbit(q_.get_mpz_t(), i)) {
                if (t.inf) {
                    t = p_in;
                } else if (t.x == p_in.x) {
                    if (fp_mod(t.y + p_in.y) == 0) {
                        t = Pt{};  // vertical chord, drop
                    } else if (t.y == 0) {
                        t = Pt{};
                    } else {
                        mpz_class lam = fp_mod((3 * t.x * t.x + 1) *
                                               fp_inv(fp_mod(2 * t.y)));
                        f = fp2_mul(f, line_at(t, lam, xq, yb));
                        t = pt_double(t);
                    }
                } else {
                    mpz_class lam = fp_mod((p_in.y - t.y) *
                                           fp_inv(fp_mod(p_in.x - t.x)));
                    f = fp2_mul(f, line_at(t, lam, xq, yb));
                    mpz_class x3 = fp_mod(lam * lam - t.x - p_in.x);
                    t.y = fp_mod(lam * (t.x - x3) - t.y);
                    t.x = x3;
                }
            }
        }
        return f;
    }

    // l(x, y) = y - y_T - lam*(x - x_T) evaluated at (xq, yb*i)
    Fp2 line_at(const Pt& t, const mpz_class& lam, const mpz_class& xq,
                const mpz_class& yb) const {
        return Fp2{fp_mod(-t.y - lam * (xq - t.x)), yb};
    }

    // ---- encodings -------------------------------------------------------

    Bytes encode_point(const Pt& pt, uint8_t inf_tag, uint8_t affine_tag) const {
        Bytes out(kPointBytes, 0);
        if (pt.inf) {
            out[0] = inf_tag;
            return out;
        }
        out[0] = affine_tag;
        fp_to_bytes(pt.x, out.data() + 1);
        fp_to_bytes(pt.y, out.data() + 1 + kFpBytes);
        return out;
    }

    Pt decode_point(const Bytes& bytes, uint8_t inf_tag, uint8_t affine_tag,
                    const char* what) const {
        if (bytes.size() != kPointBytes) {
            raise(Errc::invalid_element, std::string(what) + ": bad length");
        }
        if (bytes[0] == inf_tag) {
            for (size_t i = 1; i < kPointBytes; ++i) {
                if (bytes[i] != 0) {
                    raise(Errc::invalid_element,
                          std::string(what) + ": non-canonical identity");
                }
            }
            return Pt{};
        }
        if (bytes[0] != affine_tag) {
            raise(Errc::invalid_element, std::string(what) + ": bad prefix");
        }
        mpz_class x = bytes_to_mpz(bytes.data() + 1, kFpBytes);
        mpz_class y = bytes_to_mpz(bytes.data() + 1 + kFpBytes, kFpBytes);
        if (x >= p_ || y >= p_) {
            raise(Errc::invalid_element,
                  std::string(what) + ": coordinate out of range");
        }
        if (y == 0 || fp_mod(y * y) != fp_mod(x * x * x + x)) {
            raise(Errc::invalid_element, std::string(what) + ": off curve");
        }
        return Pt{x, y, false};
    }

    Bytes encode_fp2(const Fp2& v) const {
        Bytes out(kGtBytes);
        fp_to_bytes(v.a, out.data());
        fp_to_bytes(v.b, out.data() + kFpBytes);
        return out;
    }

    Fp2 decode_fp2(const Bytes& bytes) const {
        if (bytes.size() != kGtBytes) {
            raise(Errc::invalid_element, "GT: bad length");
        }
        Fp2 v{bytes_to_mpz(bytes.data(), kFpBytes),
              bytes_to_mpz(bytes.data() + kFpBytes, kFpBytes)};
        if (v.a >= p_ || v.b >= p_) {
            raise(Errc::invalid_element, "GT: coordinate out of range");
        }
        if (v.a == 0 && v.b == 0) {
            raise(Errc::invalid_element, "GT: zero is not a group element");
        }
        if (!fp2_is_one(fp2_pow(v, q_))) {
            raise(Errc::invalid_element, "GT: not in the order-q subgroup");
        }
        return v;
    }

    Bytes encode_scalar(const mpz_class& v) const {
        Bytes out(kScalarBytes);
        fp_fixed_export(v, out.data(), kScalarBytes);
        return out;
    }

    mpz_class decode_scalar(const Bytes& bytes) const {
        if (bytes.size() != kScalarBytes) {
            raise(Errc::invalid_scalar, "scalar: bad length");
        }
        mpz_class v = bytes_to_mpz(bytes.data(), kScalarBytes);
        if (v >= q_) raise(Errc::invalid_scalar, "scalar: out of range");
        return v;
    }

    mpz_class p_;
    mpz_class q_;
    mpz_class h_;
    Pt gen_;
    mpz_class sqrt_exp_;
    mpz_class final_exp_;
    BackendDescriptor desc_;
};

}  // namespace

std::unique_ptr<Backend> make_production_backend() {
    return std::make_unique<ProdBackend>();
}

}  // namespace mibe

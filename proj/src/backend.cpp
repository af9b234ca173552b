#include "mibe/backend.hpp"

#include "mibe/errors.hpp"

namespace mibe {

const char* backend_name(BackendId id) {
    switch (id) {
        case BackendId::production: return "production";
        case BackendId::toy: return "toy";
    }
    return "unknown";
}

Scalar Backend::random_nonzero_scalar(Rng& rng) const {
    for (;;) {
        Scalar s = random_scalar(rng);
        if (!scalar_is_zero(s)) return s;
    }
}

MirroredPoint Backend::mirrored_base_mul(const Scalar& k) const {
    return MirroredPoint{mul_g1(k, generator_g1()), mul_g2(k, generator_g2())};
}

bool Backend::mirror_consistent(const MirroredPoint& x) const {
    return pair(x.g1, generator_g2()) == pair(generator_g1(), x.g2);
}

std::unique_ptr<Backend> make_backend(BackendId id, uint64_t toy_order) {
    switch (id) {
        case BackendId::production: return make_production_backend();
        case BackendId::toy: return make_toy_backend(toy_order);
    }
    raise(Errc::backend_refused, "unknown backend id");
}

}  // namespace mibe

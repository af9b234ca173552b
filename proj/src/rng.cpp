#include "mibe/rng.hpp"

#include <sodium.h>

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include "mibe/xof.hpp"

namespace mibe {

uint64_t Rng::next_u64() {
    uint8_t buf[8];
    fill(buf, sizeof(buf));
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | buf[i];
    return v;
}

void OsRng::fill(uint8_t* out, size_t len) {
    static std::once_flag init;
    std::call_once(init, [] {
        if (sodium_init() < 0) throw std::runtime_error("sodium_init failed");
    });
    randombytes_buf(out, len);
}

static Bytes seed_bytes_from(uint64_t seed, uint64_t stream) {
    Bytes s;
    s.reserve(16);
    append_u64_le(s, seed);
    append_u64_le(s, stream);
    return s;
}

SeededRng::SeededRng(uint64_t seed) : seed_(seed_bytes_from(seed, 0)) {}

SeededRng::SeededRng(uint64_t seed, uint64_t stream)
    : seed_(seed_bytes_from(seed, stream)) {}

SeededRng::SeededRng(const Bytes& seed) : seed_(seed) {}

void SeededRng::refill() {
    Bytes input = seed_;
    append_u64_le(input, block_++);
    buffer_ = xof(input, 4096);
    pos_ = 0;
}

void SeededRng::fill(uint8_t* out, size_t len) {
    while (len > 0) {
        if (pos_ >= buffer_.size()) refill();
        size_t take = std::min(len, buffer_.size() - pos_);
        std::memcpy(out, buffer_.data() + pos_, take);
        pos_ += take;
        out += take;
        len -= take;
    }
}

std::unique_ptr<Rng> make_default_rng() {
    const char* seed = std::getenv("MIBE_TEST_SEED");
    if (seed != nullptr && seed[0] != '\0') {
        return std::make_unique<SeededRng>(
            static_cast<uint64_t>(std::strtoull(seed, nullptr, 10)));
    }
    return std::make_unique<OsRng>();
}

}  // namespace mibe

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "mibe/bytes.hpp"

namespace mibe {

// Source of random bytes. Protocol operations take an Rng so tests can fix
// coins; production entry points use OsRng.
class Rng {
   public:
    virtual ~Rng() = default;
    virtual void fill(uint8_t* out, size_t len) = 0;

    Bytes bytes(size_t len) {
        Bytes out(len);
        if (len > 0) fill(out.data(), len);
        return out;
    }

    uint64_t next_u64();
};

// OS randomness (libsodium).
class OsRng final : public Rng {
   public:
    void fill(uint8_t* out, size_t len) override;
};

// Deterministic stream derived from a seed via SHAKE256. Two instances with
// the same seed produce the same stream.
class SeededRng final : public Rng {
   public:
    explicit SeededRng(uint64_t seed);
    SeededRng(uint64_t seed, uint64_t stream);
    explicit SeededRng(const Bytes& seed);

    void fill(uint8_t* out, size_t len) override;

   private:
    void refill();

    Bytes seed_;
    Bytes buffer_;
    size_t pos_ = 0;
    uint64_t block_ = 0;
};

// OsRng unless MIBE_TEST_SEED is set in the environment.
std::unique_ptr<Rng> make_default_rng();

}  // namespace mibe

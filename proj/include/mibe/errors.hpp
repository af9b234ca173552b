#pragma once

#include <stdexcept>
#include <string>

namespace mibe {

enum class Errc {
    invalid_element,
    invalid_scalar,
    length_mismatch,
    empty_identity,
    identity_rejected,
    expired_identity,
    verification_failed,
    validation_failed,
    backend_refused,
    nested_metering,
    rule_violation,
    protocol_error,
    io_error,
    bad_key_file,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
   public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const { return code_; }

   private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace mibe

#include "mibe/errors.hpp"

namespace mibe {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::invalid_element: return "invalid-element";
        case Errc::invalid_scalar: return "invalid-scalar";
        case Errc::length_mismatch: return "length-mismatch";
        case Errc::empty_identity: return "empty-identity";
        case Errc::identity_rejected: return "identity-rejected";
        case Errc::expired_identity: return "expired-identity";
        case Errc::verification_failed: return "verification-failed";
        case Errc::validation_failed: return "validation-failed";
        case Errc::backend_refused: return "backend-refused";
        case Errc::nested_metering: return "nested-metering";
        case Errc::rule_violation: return "rule-violation";
        case Errc::protocol_error: return "protocol-error";
        case Errc::io_error: return "io-error";
        case Errc::bad_key_file: return "bad-key-file";
    }
    return "unknown";
}

}  // namespace mibe

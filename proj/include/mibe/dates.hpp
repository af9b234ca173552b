#pragma once

#include <optional>
#include <string>

namespace mibe {

// Identities may carry an expiry suffix "|YYYY-MM-DD"; the suffix is part
// of the identity string proper (keys are issued for the suffixed form),
// so the hash-to-point binding enforces it for free. Expiry is a policy
// check applied at encryption time.

bool is_valid_date(const std::string& yyyy_mm_dd);

// Expiry suffix of an identity, if present and well-formed.
std::optional<std::string> identity_expiry(const std::string& identity);

// Current UTC date as YYYY-MM-DD; MIBE_TODAY overrides it for tests.
std::string today_utc();

// True when the date sorts strictly before today.
bool date_is_past(const std::string& yyyy_mm_dd);

}  // namespace mibe

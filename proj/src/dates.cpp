#include "mibe/dates.hpp"

#include <cctype>
#include <cstdlib>
#include <ctime>

namespace mibe {

bool is_valid_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    int month = (s[5] - '0') * 10 + (s[6] - '0');
    int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::optional<std::string> identity_expiry(const std::string& identity) {
    size_t bar = identity.rfind('|');
    if (bar == std::string::npos) return std::nullopt;
    std::string suffix = identity.substr(bar + 1);
    if (!is_valid_date(suffix)) return std::nullopt;
    return suffix;
}

std::string today_utc() {
    const char* forced = std::getenv("MIBE_TODAY");
    if (forced != nullptr && is_valid_date(forced)) return forced;
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday);
    return buf;
}

bool date_is_past(const std::string& yyyy_mm_dd) {
    // ISO dates compare correctly as strings
    return yyyy_mm_dd < today_utc();
}

}  // namespace mibe

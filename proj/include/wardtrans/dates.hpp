#ifndef WARDTRANS_DATES_HPP
#define WARDTRANS_DATES_HPP

#include <string>

namespace wardtrans {

// Days since 1970-01-01 for a proleptic Gregorian calendar date.
long civil_to_days(int year, int month, int day);

// Parses "YYYY-MM-DD"; throws std::invalid_argument on malformed input.
long parse_iso_date(const std::string& text);

// Inverse of civil_to_days, formatted as "YYYY-MM-DD".
std::string format_iso_date(long days_since_epoch);

}  // namespace wardtrans

#endif

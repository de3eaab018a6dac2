#ifndef RISKQUAD_DATES_HPP
#define RISKQUAD_DATES_HPP

#include <compare>
#include <cstdint>
#include <string>

namespace riskquad {

/// Calendar date backed by a serial day count (days since 1970-01-01).
/// Parsing is strict ISO-8601 (YYYY-MM-DD); no locale, no timezones.
class Date {
 public:
  Date() = default;

  static Date parse(const std::string& iso);   // throws std::invalid_argument
  static Date from_serial(std::int64_t days) { return Date(days); }

  std::int64_t serial() const { return days_; }
  std::string to_string() const;

  int year() const;
  int month() const;
  int day() const;

  Date plus_days(std::int64_t n) const { return Date(days_ + n); }

  auto operator<=>(const Date&) const = default;

 private:
  explicit Date(std::int64_t days) : days_(days) {}
  std::int64_t days_ = 0;
};

}  // namespace riskquad

#endif

#ifndef SYMTA_LABEL_HPP
#define SYMTA_LABEL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

namespace symta {

/// A tree label: an integer (integer theory) or an interned-by-value symbol
/// (finite theory). Ordering is integers first, then symbols; this fixes the
/// serialization order everywhere.
class Label {
public:
  Label() : value_(std::int64_t{0}) {}
  explicit Label(std::int64_t n) : value_(n) {}
  explicit Label(std::string s) : value_(std::move(s)) {}

  bool is_int() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_sym() const { return !is_int(); }

  std::int64_t num() const { return std::get<std::int64_t>(value_); }
  const std::string& sym() const { return std::get<std::string>(value_); }

  std::string str() const {
    return is_int() ? std::to_string(num()) : sym();
  }

  friend bool operator==(const Label& a, const Label& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Label& a, const Label& b) { return !(a == b); }
  friend bool operator<(const Label& a, const Label& b) { return a.value_ < b.value_; }

private:
  std::variant<std::int64_t, std::string> value_;
};

} // namespace symta

template <>
struct std::hash<symta::Label> {
  std::size_t operator()(const symta::Label& l) const noexcept {
    return l.is_int() ? std::hash<std::int64_t>{}(l.num())
                      : std::hash<std::string>{}(l.sym());
  }
};

#endif

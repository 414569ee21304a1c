#include "ssam/rational.hpp"

#include <cctype>
#include <charconv>

namespace ssam {

std::optional<Rational> Rational::parse(std::string_view s) {
  auto strip = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  };
  s = strip(s);
  if (s.empty()) return std::nullopt;

  auto parse_ll = [&](std::string_view v) -> std::optional<long long> {
    v = strip(v);
    if (v.empty()) return std::nullopt;
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) return std::nullopt;
    return out;
  };

  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    auto n = parse_ll(s);
    if (!n) return std::nullopt;
    return Rational(*n);
  }
  auto n = parse_ll(s.substr(0, slash));
  auto d = parse_ll(s.substr(slash + 1));
  if (!n || !d || *d == 0) return std::nullopt;
  return Rational(*n, *d);
}

}  // namespace ssam

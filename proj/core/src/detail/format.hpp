#ifndef ATLASFEM_DETAIL_FORMAT_HPP
#define ATLASFEM_DETAIL_FORMAT_HPP

#include <charconv>
#include <string>

namespace atlasfem::detail {

/// Shortest decimal representation that round-trips the exact double.
inline std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace atlasfem::detail

#endif

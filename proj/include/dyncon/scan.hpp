#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "dyncon/core.hpp"

namespace dyncon::detail {

// Strips a '#' comment, splits on whitespace.  Empty result = skippable line.
inline std::vector<std::string> tokenize(const std::string& raw) {
  std::string line = raw;
  if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline int64_t parse_int(const std::string& tok, int line, const char* what) {
  size_t used = 0;
  int64_t v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line, std::string("expected integer for ") + what +
                               ", got '" + tok + "'");
  }
  if (used != tok.size())
    throw ParseError(line, std::string("trailing characters in ") + what +
                               " '" + tok + "'");
  return v;
}

inline uint64_t parse_uint(const std::string& tok, int line, const char* what) {
  int64_t v = parse_int(tok, line, what);
  if (v < 0)
    throw ParseError(line, std::string(what) + " must be nonnegative");
  return static_cast<uint64_t>(v);
}

}  // namespace dyncon::detail

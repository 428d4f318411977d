#pragma once

#include <iosfwd>
#include <string>

#include "pdakit/core.hpp"

namespace pdakit {

// Array text format:
//   MIMOPDA 1
//   G <int> L <int> K <int> F <int> Z <int> S <int>
//   F lines of K whitespace-separated tokens, each "*" or an id in [1..S]
// Lines end with a single newline, no trailing whitespace.  Lines starting
// with '#' are comments and skipped on read.  write(read(x)) is
// byte-identical to x for files produced by write().
std::string write_array(const PdaArray& p);
void write_array_file(const PdaArray& p, const std::string& path);

PdaArray read_array(std::istream& in);
PdaArray read_array_file(const std::string& path);

}  // namespace pdakit

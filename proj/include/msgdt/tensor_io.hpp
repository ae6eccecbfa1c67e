#pragma once

// T3F1 binary tensor files:
//   bytes 0..3   ASCII "T3F1"
//   then         m, l, n as little-endian uint64
//   then         m*l*n little-endian IEEE-754 binary64 values,
//                frontal-slice-major, row-major within a slice.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "msgdt/tensor.hpp"

namespace msgdt {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_t3f(std::ostream& out, const Tensor3& t);
Tensor3 read_t3f(std::istream& in);

void save_t3f(const std::filesystem::path& path, const Tensor3& t);
Tensor3 load_t3f(const std::filesystem::path& path);

}  // namespace msgdt

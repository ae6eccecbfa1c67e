#include "msgdt/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace msgdt {

namespace {

constexpr std::array<char, 4> kMagic{'T', '3', 'F', '1'};

void put_u64(std::vector<char>& buf, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
  return v;
}

void read_exact(std::istream& in, unsigned char* dst, std::size_t len, const char* what) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(in.gcount()) != len) {
    throw FormatError(std::string("T3F1: truncated ") + what);
  }
}

}  // namespace

void write_t3f(std::ostream& out, const Tensor3& t) {
  if (t.empty()) throw DimensionError("write_t3f: empty tensor");
  std::vector<char> buf;
  buf.reserve(4 + 24 + 8 * t.size());
  buf.insert(buf.end(), kMagic.begin(), kMagic.end());
  put_u64(buf, t.rows());
  put_u64(buf, t.cols());
  put_u64(buf, t.slices());
  for (double v : t.values()) put_u64(buf, std::bit_cast<std::uint64_t>(v));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw FormatError("T3F1: write failed");
}

Tensor3 read_t3f(std::istream& in) {
  std::array<unsigned char, 28> header{};
  read_exact(in, header.data(), header.size(), "header");
  if (std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
    throw FormatError("T3F1: bad magic");
  }
  const std::uint64_t m = get_u64(header.data() + 4);
  const std::uint64_t l = get_u64(header.data() + 12);
  const std::uint64_t n = get_u64(header.data() + 20);
  if (m == 0 || l == 0 || n == 0) throw FormatError("T3F1: zero dimension");
  constexpr std::uint64_t kMaxEntries = std::numeric_limits<std::uint64_t>::max() / 8;
  if (l > kMaxEntries / m || n > kMaxEntries / (m * l)) {
    throw FormatError("T3F1: dimensions overflow");
  }
  const std::size_t count = m * l * n;
  std::vector<unsigned char> payload(count * 8);
  read_exact(in, payload.data(), payload.size(), "payload");
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<double>(get_u64(payload.data() + 8 * i));
  }
  return Tensor3(Shape{m, l, n}, std::move(values));
}

void save_t3f(const std::filesystem::path& path, const Tensor3& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  write_t3f(out, t);
}

Tensor3 load_t3f(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return read_t3f(in);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace msgdt

#include "msgdt/frames.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "msgdt/tensor_io.hpp"

namespace msgdt {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(const std::vector<char>& buf, std::size_t& pos) {
  while (pos < buf.size()) {
    const auto c = static_cast<unsigned char>(buf[pos]);
    if (c == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else if (std::isspace(c)) {
      ++pos;
    } else {
      break;
    }
  }
  std::string tok;
  while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) {
    tok.push_back(buf[pos++]);
  }
  return tok;
}

std::size_t parse_positive(const std::string& tok, const std::filesystem::path& path) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw FormatError(path.string() + ": bad PGM header field '" + tok + "'");
  }
  const unsigned long long v = std::stoull(tok);
  if (v == 0) throw FormatError(path.string() + ": zero PGM header field");
  return static_cast<std::size_t>(v);
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  if (next_token(buf, pos) != "P5") throw FormatError(path.string() + ": not a binary PGM (P5)");
  GrayImage img;
  img.width = parse_positive(next_token(buf, pos), path);
  img.height = parse_positive(next_token(buf, pos), path);
  const std::size_t maxval = parse_positive(next_token(buf, pos), path);
  if (maxval > 255) throw FormatError(path.string() + ": only 8-bit PGM is supported");
  if (pos >= buf.size()) throw FormatError(path.string() + ": truncated PGM");
  ++pos;  // single whitespace byte before the raster
  const std::size_t count = img.width * img.height;
  if (buf.size() - pos < count) throw FormatError(path.string() + ": truncated PGM raster");
  img.pixels.assign(buf.begin() + static_cast<std::ptrdiff_t>(pos),
                    buf.begin() + static_cast<std::ptrdiff_t>(pos + count));
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw FormatError("write failed: " + path.string());
}

Tensor3 ingest_frames(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  if (files.empty()) throw FormatError("no .pgm frames in " + dir.string());
  std::sort(files.begin(), files.end());

  const GrayImage first = read_pgm(files.front());
  Tensor3 t(first.height, first.width, files.size());
  for (std::size_t k = 0; k < files.size(); ++k) {
    const GrayImage img = k == 0 ? first : read_pgm(files[k]);
    if (img.width != first.width || img.height != first.height) {
      throw FormatError(files[k].string() + ": frame size " + std::to_string(img.width) + "x" +
                        std::to_string(img.height) + " differs from " +
                        std::to_string(first.width) + "x" + std::to_string(first.height));
    }
    std::transform(img.pixels.begin(), img.pixels.end(), t.slice(k).begin(),
                   [](std::uint8_t v) { return static_cast<double>(v); });
  }
  return t;
}

void export_frames(const Tensor3& t, const std::filesystem::path& dir, const std::string& prefix) {
  std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < t.slices(); ++k) {
    GrayImage img{t.cols(), t.rows(), {}};
    img.pixels.reserve(t.rows() * t.cols());
    for (double v : t.slice(k)) {
      img.pixels.push_back(static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)));
    }
    char name[64];
    std::snprintf(name, sizeof name, "_%04zu.pgm", k);
    write_pgm(dir / (prefix + name), img);
  }
}

std::vector<double> per_frame_mae(const Tensor3& a, const Tensor3& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError("per_frame_mae: shape mismatch " + a.shape().str() + " vs " +
                         b.shape().str());
  }
  std::vector<double> mae(a.slices(), 0.0);
  for (std::size_t k = 0; k < a.slices(); ++k) {
    const auto sa = a.slice(k);
    const auto sb = b.slice(k);
    for (std::size_t idx = 0; idx < sa.size(); ++idx) mae[k] += std::abs(sa[idx] - sb[idx]);
    mae[k] /= static_cast<double>(sa.size());
  }
  return mae;
}

}  // namespace msgdt

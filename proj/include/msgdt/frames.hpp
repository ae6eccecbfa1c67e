#pragma once

// 8-bit grayscale frames in binary PGM (P5). A directory of equally sized
// frames, taken in lexicographic filename order, maps to a
// height x width x frames tensor with one frame per frontal slice.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "msgdt/tensor.hpp"

namespace msgdt {

struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

Tensor3 ingest_frames(const std::filesystem::path& dir);

/// Writes slice k as `<prefix>_<kkkk>.pgm`, values rounded and clamped to [0, 255].
void export_frames(const Tensor3& t, const std::filesystem::path& dir,
                   const std::string& prefix = "frame");

/// Mean absolute difference per frontal slice.
std::vector<double> per_frame_mae(const Tensor3& a, const Tensor3& b);

}  // namespace msgdt

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rud/errors.hpp"

namespace rud {

/// Greyscale images scaled to [0, 1]. `images` holds one image per column so
/// that a batch is a contiguous column block.
struct ImageDataset {
    Eigen::MatrixXd images;  // (rows * cols) x count
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;

    std::size_t count() const noexcept { return static_cast<std::size_t>(images.cols()); }
    Eigen::Index pixels() const noexcept { return images.rows(); }
};

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;

/// Parses an IDX image container: big-endian magic 0x00000803, count, rows,
/// cols, then count * rows * cols unsigned bytes. Pixels are divided by 255.
/// Throws FormatError on a wrong magic, a short header or payload, or
/// trailing bytes.
ImageDataset parse_idx_images(std::span<const std::uint8_t> bytes);

/// Inverse of parse_idx_images. Pixels are rounded to the nearest byte.
std::vector<std::uint8_t> write_idx_images(const ImageDataset& data);

ImageDataset load_idx_images(const std::filesystem::path& path);
void save_idx_images(const ImageDataset& data, const std::filesystem::path& path);

/// Seeded shuffle of 0..count-1 cut into consecutive batches of
/// `batch_size`; a final short batch is dropped.
std::vector<std::vector<std::size_t>> minibatches(std::size_t count, std::size_t batch_size,
                                                  std::uint64_t seed);
std::vector<std::vector<std::size_t>> minibatches(const ImageDataset& data, std::size_t batch_size,
                                                  std::uint64_t seed);

/// Gathers the listed images into a pixel-by-batch matrix.
Eigen::MatrixXd gather_batch(const ImageDataset& data, std::span<const std::size_t> indices);

/// Deterministic 28x28 stand-in for handwritten digits: stroke-drawn glyphs
/// 0-9 with random shift, scale, slant and stroke width, quantised to bytes.
ImageDataset synthetic_digits(std::size_t count, std::uint64_t seed);

}  // namespace rud

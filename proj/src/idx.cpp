#include "rud/idx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace rud {

namespace {

constexpr std::size_t kHeaderBytes = 16;

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t value) {
    out.push_back(static_cast<std::uint8_t>(value >> 24));
    out.push_back(static_cast<std::uint8_t>(value >> 16));
    out.push_back(static_cast<std::uint8_t>(value >> 8));
    out.push_back(static_cast<std::uint8_t>(value));
}

}  // namespace

ImageDataset parse_idx_images(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4) throw FormatError("IDX: truncated magic number", bytes.size());
    const std::uint32_t magic = read_be32(bytes, 0);
    if (magic != kIdxImageMagic) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "0x%08x", magic);
        throw FormatError(std::string("IDX: expected image magic 0x00000803, found ") + buf, 0);
    }
    if (bytes.size() < kHeaderBytes) throw FormatError("IDX: truncated header", bytes.size());

    const std::uint32_t count = read_be32(bytes, 4);
    const std::uint32_t rows = read_be32(bytes, 8);
    const std::uint32_t cols = read_be32(bytes, 12);
    const std::uint64_t pixels = std::uint64_t{rows} * cols;
    const std::uint64_t payload = pixels * count;
    const std::uint64_t available = bytes.size() - kHeaderBytes;
    if (available < payload) {
        throw FormatError("IDX: truncated payload, expected " + std::to_string(payload) +
                              " bytes, found " + std::to_string(available),
                          bytes.size());
    }
    if (available > payload) {
        throw FormatError("IDX: " + std::to_string(available - payload) + " trailing bytes",
                          kHeaderBytes + static_cast<std::size_t>(payload));
    }

    ImageDataset data;
    data.rows = rows;
    data.cols = cols;
    data.images.resize(static_cast<Eigen::Index>(pixels), static_cast<Eigen::Index>(count));
    const std::uint8_t* src = bytes.data() + kHeaderBytes;
    for (Eigen::Index k = 0; k < data.images.cols(); ++k) {
        for (Eigen::Index p = 0; p < data.images.rows(); ++p) {
            data.images(p, k) = static_cast<double>(*src++) / 255.0;
        }
    }
    return data;
}

std::vector<std::uint8_t> write_idx_images(const ImageDataset& data) {
    if (static_cast<std::uint64_t>(data.pixels()) != std::uint64_t{data.rows} * data.cols) {
        throw std::invalid_argument("IDX: image size does not match rows * cols");
    }
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderBytes + static_cast<std::size_t>(data.images.size()));
    write_be32(out, kIdxImageMagic);
    write_be32(out, static_cast<std::uint32_t>(data.count()));
    write_be32(out, data.rows);
    write_be32(out, data.cols);
    for (Eigen::Index k = 0; k < data.images.cols(); ++k) {
        for (Eigen::Index p = 0; p < data.images.rows(); ++p) {
            const double v = std::clamp(data.images(p, k), 0.0, 1.0);
            out.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
        }
    }
    return out;
}

ImageDataset load_idx_images(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                          std::istreambuf_iterator<char>()};
    return parse_idx_images(bytes);
}

void save_idx_images(const ImageDataset& data, const std::filesystem::path& path) {
    const auto bytes = write_idx_images(data);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::vector<std::size_t>> minibatches(std::size_t count, std::size_t batch_size,
                                                  std::uint64_t seed) {
    if (batch_size == 0 || batch_size > count) {
        throw std::invalid_argument("minibatches: batch size must lie in [1, count]");
    }
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start + batch_size <= count; start += batch_size) {
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(start + batch_size));
    }
    return batches;
}

std::vector<std::vector<std::size_t>> minibatches(const ImageDataset& data, std::size_t batch_size,
                                                  std::uint64_t seed) {
    return minibatches(data.count(), batch_size, seed);
}

Eigen::MatrixXd gather_batch(const ImageDataset& data, std::span<const std::size_t> indices) {
    Eigen::MatrixXd batch(data.pixels(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= data.count()) throw std::out_of_range("gather_batch: index out of range");
        batch.col(static_cast<Eigen::Index>(k)) = data.images.col(static_cast<Eigen::Index>(indices[k]));
    }
    return batch;
}

namespace {

struct Point {
    double x;
    double y;
};

using Stroke = std::vector<Point>;

// Glyphs on a unit box, x to the right and y downward.
const std::array<std::vector<Stroke>, 10>& glyphs() {
    constexpr Point tl{0.3, 0.18}, tr{0.7, 0.18}, ml{0.3, 0.5}, mr{0.7, 0.5}, bl{0.3, 0.82},
        br{0.7, 0.82};
    static const std::array<std::vector<Stroke>, 10> table{{
        {{tl, tr, br, bl, tl}},
        {{{0.5, 0.18}, {0.5, 0.82}}, {{0.38, 0.3}, {0.5, 0.18}}},
        {{tl, tr, mr, ml, bl, br}},
        {{tl, tr, mr, br, bl}, {ml, mr}},
        {{tl, ml, mr}, {tr, br}},
        {{tr, tl, ml, mr, br, bl}},
        {{tr, tl, bl, br, mr, ml}},
        {{tl, tr, {0.45, 0.82}}},
        {{tl, tr, br, bl, tl}, {ml, mr}},
        {{mr, ml, tl, tr, br, bl}},
    }};
    return table;
}

double segment_distance(Point p, Point a, Point b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double s = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    const double ex = p.x - (a.x + s * dx), ey = p.y - (a.y + s * dy);
    return std::sqrt(ex * ex + ey * ey);
}

}  // namespace

ImageDataset synthetic_digits(std::size_t count, std::uint64_t seed) {
    constexpr std::uint32_t side = 28;
    ImageDataset data;
    data.rows = side;
    data.cols = side;
    data.images.resize(side * side, static_cast<Eigen::Index>(count));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> digit(0, 9);
    std::uniform_real_distribution<double> scale(0.8, 1.1), slant(-0.25, 0.25),
        shift(-0.08, 0.08), width(0.035, 0.065);

    for (std::size_t k = 0; k < count; ++k) {
        const auto& strokes = glyphs()[static_cast<std::size_t>(digit(rng))];
        const double s = scale(rng), sl = slant(rng), dx = shift(rng), dy = shift(rng),
                     w = width(rng);
        std::vector<Stroke> placed;
        for (const Stroke& stroke : strokes) {
            Stroke moved;
            for (Point p : stroke) {
                const double x = 0.5 + s * (p.x - 0.5), y = 0.5 + s * (p.y - 0.5);
                moved.push_back({x + sl * (y - 0.5) + dx, y + dy});
            }
            placed.push_back(std::move(moved));
        }
        for (std::uint32_t r = 0; r < side; ++r) {
            for (std::uint32_t c = 0; c < side; ++c) {
                const Point p{(c + 0.5) / side, (r + 0.5) / side};
                double d = 1e9;
                for (const Stroke& stroke : placed) {
                    for (std::size_t i = 0; i + 1 < stroke.size(); ++i) {
                        d = std::min(d, segment_distance(p, stroke[i], stroke[i + 1]));
                    }
                }
                // Anti-aliased edge about one pixel wide, quantised like a real scan.
                const double v = std::clamp((w - d) * side + 0.5, 0.0, 1.0);
                data.images(r * side + c, static_cast<Eigen::Index>(k)) =
                    std::round(v * 255.0) / 255.0;
            }
        }
    }
    return data;
}

}  // namespace rud

#include <doctest.h>

#include <filesystem>
#include <random>
#include <set>

#include "rud/errors.hpp"
#include "rud/idx.hpp"

using namespace rud;

namespace {

std::vector<std::uint8_t> header(std::uint32_t magic, std::uint32_t n, std::uint32_t r, std::uint32_t c) {
    std::vector<std::uint8_t> out;
    for (std::uint32_t v : {magic, n, r, c}) {
        for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
    }
    return out;
}

std::size_t offset_of(const std::vector<std::uint8_t>& bytes) {
    try {
        parse_idx_images(bytes);
    } catch (const FormatError& e) {
        return e.offset();
    }
    FAIL("expected FormatError");
    return 0;
}

}  // namespace

TEST_CASE("parse a 1x2x2 IDX file") {
    auto bytes = header(0x00000803, 1, 2, 2);
    bytes.insert(bytes.end(), {0, 255, 128, 64});
    const ImageDataset d = parse_idx_images(bytes);
    CHECK(d.count() == 1);
    CHECK(d.rows == 2);
    CHECK(d.cols == 2);
    REQUIRE(d.pixels() == 4);
    CHECK(d.images(0, 0) == 0.0);
    CHECK(d.images(1, 0) == 1.0);
    CHECK(d.images(2, 0) == 128.0 / 255.0);
    CHECK(d.images(3, 0) == 64.0 / 255.0);
}

TEST_CASE("IDX errors report the offending offset") {
    SUBCASE("label-file magic") {
        auto bytes = header(0x00000801, 1, 2, 2);
        bytes.insert(bytes.end(), 4, 0);
        CHECK(offset_of(bytes) == 0);
    }
    SUBCASE("truncated payload") {
        auto bytes = header(0x00000803, 2, 28, 28);
        bytes.resize(16 + 1567, 7);
        CHECK(offset_of(bytes) == 16 + 1567);
    }
    SUBCASE("trailing bytes") {
        auto bytes = header(0x00000803, 1, 2, 2);
        bytes.insert(bytes.end(), 6, 1);
        CHECK(offset_of(bytes) == 20);
    }
    SUBCASE("short header") {
        auto bytes = header(0x00000803, 1, 2, 2);
        bytes.resize(10);
        CHECK(offset_of(bytes) == 10);
        CHECK(offset_of({0x00, 0x00}) == 2);
    }
    SUBCASE("message carries the offset") {
        const FormatError e("bad", 42);
        CHECK(std::string(e.what()).find("42") != std::string::npos);
    }
}

TEST_CASE("IDX write/parse round trip") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> byte(0, 255), dim(1, 9), n(0, 5);
    for (int trial = 0; trial < 50; ++trial) {
        ImageDataset d;
        d.rows = static_cast<std::uint32_t>(dim(rng));
        d.cols = static_cast<std::uint32_t>(dim(rng));
        d.images.resize(d.rows * d.cols, n(rng));
        for (Eigen::Index k = 0; k < d.images.size(); ++k) d.images.data()[k] = byte(rng) / 255.0;
        const auto bytes = write_idx_images(d);
        CHECK(bytes.size() == 16 + static_cast<std::size_t>(d.images.size()));
        const ImageDataset back = parse_idx_images(bytes);
        CHECK(back.rows == d.rows);
        CHECK(back.cols == d.cols);
        CHECK(back.images == d.images);
        CHECK(write_idx_images(back) == bytes);
    }
}

TEST_CASE("IDX file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "rud_test_idx_roundtrip.idx";
    const ImageDataset d = synthetic_digits(12, 3);
    save_idx_images(d, path);
    const ImageDataset back = load_idx_images(path);
    CHECK(back.images == d.images);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_idx_images(path), std::runtime_error);
}

TEST_CASE("minibatches") {
    SUBCASE("exact partition") {
        const auto b = minibatches(6, 2, 1);
        REQUIRE(b.size() == 3);
        std::multiset<std::size_t> seen;
        for (const auto& batch : b) {
            CHECK(batch.size() == 2);
            seen.insert(batch.begin(), batch.end());
        }
        CHECK(seen == std::multiset<std::size_t>{0, 1, 2, 3, 4, 5});
    }
    SUBCASE("short final batch is dropped") {
        const auto b = minibatches(5, 2, 1);
        REQUIRE(b.size() == 2);
        std::set<std::size_t> seen;
        for (const auto& batch : b) seen.insert(batch.begin(), batch.end());
        CHECK(seen.size() == 4);
    }
    SUBCASE("deterministic in the seed") {
        CHECK(minibatches(100, 10, 4) == minibatches(100, 10, 4));
        CHECK(minibatches(100, 10, 4) != minibatches(100, 10, 5));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(minibatches(5, 0, 1), std::invalid_argument);
        CHECK_THROWS_AS(minibatches(5, 6, 1), std::invalid_argument);
    }
}

TEST_CASE("gather_batch") {
    const ImageDataset d = synthetic_digits(5, 1);
    const std::vector<std::size_t> idx{4, 0};
    const Eigen::MatrixXd b = gather_batch(d, idx);
    CHECK(b.cols() == 2);
    CHECK(b.col(0) == d.images.col(4));
    CHECK(b.col(1) == d.images.col(0));
    const std::vector<std::size_t> bad{5};
    CHECK_THROWS_AS(gather_batch(d, bad), std::out_of_range);
}

TEST_CASE("synthetic digits") {
    const ImageDataset d = synthetic_digits(50, 7);
    CHECK(d.rows == 28);
    CHECK(d.cols == 28);
    CHECK(d.count() == 50);
    CHECK(d.images.minCoeff() >= 0.0);
    CHECK(d.images.maxCoeff() <= 1.0);
    // quantized to 8 bits
    for (Eigen::Index k = 0; k < d.images.size(); ++k) {
        const double v = d.images.data()[k] * 255.0;
        CHECK(std::abs(v - std::round(v)) < 1e-9);
    }
    // every image has ink and background
    for (Eigen::Index k = 0; k < d.images.cols(); ++k) {
        CHECK(d.images.col(k).maxCoeff() > 0.5);
        CHECK(d.images.col(k).minCoeff() == 0.0);
    }
    CHECK(synthetic_digits(50, 7).images == d.images);
    CHECK(synthetic_digits(50, 8).images != d.images);
}

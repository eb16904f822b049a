#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "mhinr/nn/rng.hpp"
#include "mhinr/signal/cell_grid.hpp"
#include "mhinr/signal/coordinates.hpp"
#include "mhinr/signal/perlin.hpp"
#include "mhinr/signal/pgm.hpp"
#include "mhinr/signal/resample.hpp"

using namespace mhinr;
using namespace mhinr::signal;

namespace {

Image random_image(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  nn::Rng rng(seed);
  std::vector<double> px(rows * cols);
  for (double& v : px) v = rng.uniform01();
  return Image(rows, cols, std::move(px));
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mhinr_signal_" + name);
}

}  // namespace

TEST(Image, RejectsOutOfRangePixels) {
  EXPECT_THROW(Image(1, 1, std::vector<double>{1.5}), ContractError);
  EXPECT_THROW(Image(1, 2, std::vector<double>{0.5}), ContractError);
  EXPECT_THROW(Image(1, 1, std::vector<double>{std::nan("")}), ContractError);
  EXPECT_EQ(Image::clamped(1, 2, {-0.5, 2.0}).pixels(), (std::vector<double>{0.0, 1.0}));
}

TEST(NormalizeGlobal, Endpoints) {
  EXPECT_EQ(normalize_global(1, 256), -1.0);
  EXPECT_EQ(normalize_global(256, 256), 1.0);
  EXPECT_EQ(normalize_global(129, 257), 0.0);
  EXPECT_THROW(normalize_global(1, 1), ContractError);
  EXPECT_THROW(normalize_global(0, 4), ContractError);
  EXPECT_THROW(normalize_global(5, 4), ContractError);
}

TEST(NormalizeGlobal, StrictlyIncreasing) {
  for (std::size_t n : {2u, 3u, 17u, 256u}) {
    for (std::size_t r = 1; r < n; ++r) EXPECT_LT(normalize_global(r, n), normalize_global(r + 1, n));
  }
}

TEST(NormalizeLocal, Values) {
  EXPECT_EQ(normalize_local(1, 4), -1.0);
  EXPECT_EQ(normalize_local(1, 1), 0.0);
  EXPECT_NEAR(normalize_local(3, 4), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(normalize_local(4, 4), 1.0);
  EXPECT_EQ(normalize_local(7, 9), normalize_global(7, 9));
}

TEST(CellGrid, DivisibilityRequired) {
  EXPECT_THROW(CellGrid(10, 10, 3, 1), ContractError);
  EXPECT_THROW(CellGrid(10, 10, 0, 1), ContractError);
  const CellGrid g(12, 8, 3, 2);
  EXPECT_EQ(g.cell_rows(), 4u);
  EXPECT_EQ(g.cell_cols(), 4u);
  EXPECT_EQ(g.head_count(), 6u);
  EXPECT_EQ(g.head_index(2, 1), 2u);
}

TEST(Partition, CellIndexingFollowsCellOffsets) {
  // v[r, c] = 10 r + c with 1-based r, c, scaled into [0, 1].
  std::vector<double> px;
  for (int r = 1; r <= 4; ++r) {
    for (int c = 1; c <= 4; ++c) px.push_back((10.0 * r + c) / 100.0);
  }
  const Image img(4, 4, px);
  const CellGrid grid(4, 4, 2, 2);
  EXPECT_DOUBLE_EQ(cell_pixel(img, grid, 2, 1, 1, 1) * 100.0, 31.0);
  EXPECT_THROW(cell_pixel(img, grid, 2, 1, 3, 1), ContractError);
  const auto cells = partition(img, grid);
  EXPECT_DOUBLE_EQ(cells[grid.head_index(2, 1)].at(0, 0) * 100.0, 31.0);
}

TEST(Partition, DegenerateGrids) {
  const Image img = random_image(4, 6, 1);
  const auto whole = partition(img, CellGrid(4, 6, 1, 1));
  ASSERT_EQ(whole.size(), 1u);
  EXPECT_EQ(whole[0], img);
  const CellGrid per_pixel(4, 6, 4, 6);
  const auto pixels = partition(img, per_pixel);
  for (std::size_t l = 1; l <= 4; ++l) {
    for (std::size_t k = 1; k <= 6; ++k) EXPECT_EQ(pixels[per_pixel.head_index(l, k)].at(0, 0), img.at(l - 1, k - 1));
  }
}

TEST(Partition, CoverageIsExhaustiveAndUnique) {
  for (auto [rows, cols, hx, hy] : {std::tuple{6u, 4u, 3u, 2u}, {8u, 8u, 4u, 1u}, {5u, 5u, 5u, 5u}}) {
    const CellGrid grid(rows, cols, hx, hy);
    std::vector<int> hits(rows * cols, 0);
    for (std::size_t l = 1; l <= hx; ++l)
      for (std::size_t k = 1; k <= hy; ++k)
        for (std::size_t r = 1; r <= grid.cell_rows(); ++r)
          for (std::size_t c = 1; c <= grid.cell_cols(); ++c) {
            const auto p = grid.global_pixel(l, k, r, c);
            ++hits[(p.row - 1) * cols + (p.col - 1)];
          }
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(Assemble, RoundTrips) {
  const Image img = random_image(8, 8, 2);
  const CellGrid grid(8, 8, 4, 2);
  EXPECT_EQ(assemble(partition(img, grid), grid), img);

  const CellGrid g2(4, 4, 2, 2);
  std::vector<Image> zeros(4, Image(2, 2, 0.0));
  EXPECT_EQ(assemble(zeros, g2), Image(4, 4, 0.0));
  EXPECT_EQ(partition(assemble(zeros, g2), g2), zeros);

  PerlinSpec spec;
  spec.octaves = 4;
  spec.seed = 3;
  const Image perlin = perlin2d(spec, 256, 256);
  const CellGrid g3(256, 256, 64, 64);
  EXPECT_EQ(assemble(partition(perlin, g3), g3), perlin);
}

TEST(Assemble, RejectsMissingOrMisshapenCells) {
  const CellGrid grid(4, 4, 2, 2);
  EXPECT_THROW(assemble(std::vector<Image>(3, Image(2, 2)), grid), ContractError);
  EXPECT_THROW(assemble(std::vector<Image>(4, Image(2, 1)), grid), ContractError);
}

TEST(BoxDownsample, Values) {
  EXPECT_EQ(box_downsample(Image(4, 4, 0.25), 2), Image(2, 2, 0.25));
  const Image checker(2, 2, std::vector<double>{0, 1, 1, 0});
  EXPECT_EQ(box_downsample(checker, 2).at(0, 0), 0.5);
  EXPECT_THROW(box_downsample(Image(3, 4), 2), ContractError);
}

TEST(BoxDownsample, MatchesScalarOracle) {
  const Image img = random_image(8, 8, 4);
  const Image out = box_downsample(img, 2);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const double expected =
          (img.at(2 * r, 2 * c) + img.at(2 * r, 2 * c + 1) + img.at(2 * r + 1, 2 * c) + img.at(2 * r + 1, 2 * c + 1)) / 4;
      EXPECT_NEAR(out.at(r, c), expected, 1e-12);
    }
  }
}

TEST(BoxDownsample, UpsamplePreservesMean) {
  const Image img = random_image(16, 12, 5);
  const Image round = constant_upsample(box_downsample(img, 4), 4);
  EXPECT_NEAR(round.mean(), img.mean(), 1e-12);
}

TEST(Perlin, FadeEndpoints) {
  EXPECT_EQ(perlin_fade(0.0), 0.0);
  EXPECT_EQ(perlin_fade(1.0), 1.0);
  EXPECT_EQ(perlin_fade(0.5), 0.5);
}

TEST(Perlin, VanishesOnLattice) {
  const PerlinNoise noise(17);
  for (int x = -3; x < 300; x += 7) {
    for (int y = 0; y < 20; ++y) EXPECT_EQ(noise(x, y), 0.0);
  }
  EXPECT_NE(noise(0.5, 0.3), 0.0);
}

TEST(Perlin, DeterministicAndSeedSensitive) {
  PerlinSpec spec;
  spec.octaves = 3;
  spec.seed = 10;
  const Image a = perlin2d(spec, 64, 64);
  EXPECT_EQ(a, perlin2d(spec, 64, 64));
  EXPECT_DOUBLE_EQ(a.min(), 0.0);
  EXPECT_DOUBLE_EQ(a.max(), 1.0);
  spec.seed = 11;
  const Image b = perlin2d(spec, 64, 64);
  std::size_t differ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) differ += a.pixels()[i] != b.pixels()[i];
  EXPECT_GE(static_cast<double>(differ), 0.99 * static_cast<double>(a.size()));
}

TEST(Perlin, RoughnessGrowsWithOctaves) {
  double previous = 0.0;
  for (std::size_t octaves = 1; octaves <= 5; ++octaves) {
    PerlinSpec spec;
    spec.octaves = octaves;
    spec.seed = 1;
    const double roughness = mean_abs_dx(perlin2d(spec, 64, 64));
    EXPECT_GT(roughness, previous) << "octaves " << octaves;
    previous = roughness;
  }
}

TEST(Perlin, SpecValidation) {
  PerlinSpec spec;
  spec.octaves = 0;
  EXPECT_THROW(perlin2d(spec, 8, 8), ContractError);
  spec = {};
  spec.persistence = 1.5;
  EXPECT_THROW(perlin2d(spec, 8, 8), ContractError);
  spec = {};
  spec.lacunarity = 1.0;
  EXPECT_THROW(perlin2d(spec, 8, 8), ContractError);
}

TEST(Pgm, DecodesMinimalHeader) {
  const std::string text = "P5 2 1 255 ";
  std::vector<std::uint8_t> bytes(text.begin(), text.end());
  bytes.push_back(0);
  bytes.push_back(255);
  const Image img = decode_pgm(bytes);
  EXPECT_EQ(img.rows(), 1u);
  EXPECT_EQ(img.cols(), 2u);
  EXPECT_EQ(img.pixels(), (std::vector<double>{0.0, 1.0}));
}

TEST(Pgm, SkipsComments) {
  const std::string text = "P5\n# made by hand\n1 1\n# max\n255\n";
  std::vector<std::uint8_t> bytes(text.begin(), text.end());
  bytes.push_back(51);
  EXPECT_DOUBLE_EQ(decode_pgm(bytes).at(0, 0), 0.2);
}

TEST(Pgm, EncoderIsBitExact) {
  const Image img(1, 3, std::vector<double>{0.0, 0.5, 1.0});
  const auto bytes = encode_pgm(img);
  const std::string header = "P5\n3 1\n255\n";
  ASSERT_EQ(bytes.size(), header.size() + 3);
  EXPECT_TRUE(std::equal(header.begin(), header.end(), bytes.begin()));
  EXPECT_EQ(bytes[header.size()], 0);
  EXPECT_EQ(bytes[header.size() + 1], 128);  // 127.5 rounds half up
  EXPECT_EQ(bytes[header.size() + 2], 255);
}

TEST(Pgm, RejectsMalformedFiles) {
  auto bytes_of = [](const std::string& s) { return std::vector<std::uint8_t>(s.begin(), s.end()); };
  EXPECT_THROW(decode_pgm(bytes_of("P2 1 1 255 \x01")), IoError);
  EXPECT_THROW(decode_pgm(bytes_of("P5 2 2 255 \x01")), IoError);
  EXPECT_THROW(decode_pgm(bytes_of("P5 1 1 65535 \x01\x01")), IoError);
  EXPECT_THROW(decode_pgm(bytes_of("P5 x 1 255 \x01")), IoError);
  EXPECT_THROW(decode_pgm(bytes_of("P5 1")), IoError);
  EXPECT_THROW(load_image(temp_path("does_not_exist.pgm")), IoError);
}

TEST(Pgm, RoundTripQuantization) {
  PerlinSpec spec;
  spec.octaves = 5;
  spec.seed = 8;
  const Image img = perlin2d(spec, 256, 256);
  const auto path = temp_path("roundtrip.pgm");
  save_image(img, path);
  const Image once = load_image(path);
  ASSERT_EQ(once.rows(), 256u);
  ASSERT_EQ(once.cols(), 256u);
  double max_err = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) max_err = std::max(max_err, std::abs(once.pixels()[i] - img.pixels()[i]));
  EXPECT_LE(max_err, 1.0 / 510.0 + 1e-12);
  save_image(once, path);
  EXPECT_EQ(load_image(path), once);
  std::filesystem::remove(path);
}

TEST(Pgm, LoadsBundledCamera) {
  const Image img = load_image(std::filesystem::path(MHINR_TEST_DATA_DIR) / "camera_512.pgm");
  EXPECT_EQ(img.rows(), 512u);
  EXPECT_EQ(img.cols(), 512u);
  EXPECT_GT(img.max() - img.min(), 0.5);
}

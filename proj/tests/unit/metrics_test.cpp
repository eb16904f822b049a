#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mhinr/metrics/psnr.hpp"
#include "mhinr/metrics/spearman.hpp"
#include "mhinr/nn/rng.hpp"

using namespace mhinr;
using namespace mhinr::metrics;
using signal::Image;

namespace {

Image random_image(std::size_t n, std::uint64_t seed) {
  nn::Rng rng(seed);
  std::vector<double> px(n * n);
  for (double& v : px) v = rng.uniform01();
  return Image(n, n, std::move(px));
}

}  // namespace

TEST(Psnr, ExactMatchIsCapped) {
  const Image a = random_image(8, 1);
  const auto r = psnr(a, a);
  EXPECT_TRUE(r.capped);
  EXPECT_EQ(r.psnr_db, 100.0);
  EXPECT_EQ(r.mse, 0.0);
}

TEST(Psnr, ConstantImagesClosedForm) {
  const auto r = psnr(Image(4, 4, 0.0), Image(4, 4, 0.1));
  EXPECT_NEAR(r.mse, 0.01, 1e-15);
  EXPECT_NEAR(r.psnr_db, 20.0, 1e-12);
  EXPECT_FALSE(r.capped);
}

TEST(Psnr, MatchesScalarLoopAndIsSymmetric) {
  const Image a = random_image(16, 2);
  const Image b = random_image(16, 3);
  double s = 0.0;
  for (std::size_t r = 0; r < 16; ++r)
    for (std::size_t c = 0; c < 16; ++c) s += std::pow(a.at(r, c) - b.at(r, c), 2);
  const double expected = 10.0 * std::log10(1.0 / (s / 256.0));
  EXPECT_NEAR(psnr(a, b).psnr_db, expected, 1e-10);
  EXPECT_EQ(psnr(a, b).psnr_db, psnr(b, a).psnr_db);
}

TEST(Psnr, DecreasesWithNoiseAmplitude) {
  const Image base(16, 16, 0.5);
  nn::Rng rng(4);
  std::vector<double> noise(256);
  for (double& v : noise) v = rng.uniform(-1.0, 1.0);
  double previous = 1e9;
  for (double amp : {0.01, 0.05, 0.1, 0.2, 0.4}) {
    std::vector<double> px(256);
    for (std::size_t i = 0; i < 256; ++i) px[i] = 0.5 + amp * noise[i];
    const double db = psnr(base, Image(16, 16, px)).psnr_db;
    EXPECT_LT(db, previous);
    previous = db;
  }
}

TEST(Psnr, DimensionMismatch) { EXPECT_THROW(psnr(Image(2, 2), Image(2, 3)), ContractError); }

TEST(Spearman, MonotoneLists) {
  const std::vector<double> down{5, 4, 3, 2, 1};
  const std::vector<double> up{0.1, 0.2, 0.7, 0.9};
  EXPECT_DOUBLE_EQ(spearman_trend(down), -1.0);
  EXPECT_DOUBLE_EQ(spearman_trend(up), 1.0);
}

TEST(Spearman, HandComputedValue) {
  const std::vector<double> xs{1, 3, 2};
  EXPECT_NEAR(spearman_trend(xs), 0.5, 1e-15);
}

TEST(Spearman, TiesUseAverageRanks) {
  const std::vector<double> xs{1, 2, 2, 3};
  const auto ranks = average_ranks(xs);
  EXPECT_EQ(ranks, (std::vector<double>{1.0, 2.5, 2.5, 4.0}));
  // Pearson on ranks (1,2,3,4) vs (1,2.5,2.5,4): cov 4.5, var 5 and 4.5.
  EXPECT_NEAR(spearman_trend(xs), 4.5 / std::sqrt(5.0 * 4.5), 1e-15);
}

TEST(Spearman, NeedsThreeValues) {
  const std::vector<double> xs{1, 2};
  EXPECT_THROW(spearman_trend(xs), ContractError);
}

#include <cstdio>
#include <filesystem>
#include <random>

#include <doctest.h>

#include "core/annotations.hpp"
#include "core/image_io.hpp"
#include "core/raster.hpp"

using namespace fddb360;

namespace {

ImageBuffer random_image(int w, int h, int ch, std::uint64_t seed) {
  ImageBuffer img(w, h, ch);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, 255);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(u(rng));
  return img;
}

}  // namespace

TEST_SUITE("raster") {

TEST_CASE("bilinear_sample reproduces pixel values at centers") {
  const ImageBuffer img = random_image(7, 5, 3, 1);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        CHECK(bilinear_sample(img, {c + 0.5, r + 0.5}, ch) ==
              doctest::Approx(img.at(c, r, ch)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("bilinear_sample of a constant image is constant") {
  ImageBuffer img(6, 6, 1, 123);
  for (const auto& p : {PixelPoint{0.1, 0.1}, PixelPoint{3.7, 2.2},
                        PixelPoint{5.9, 5.9}, PixelPoint{-1.0, 9.0}}) {
    CHECK(bilinear_sample(img, p, 0) == doctest::Approx(123.0));
  }
}

TEST_CASE("bilinear_sample midpoint of two pixels") {
  ImageBuffer img(2, 1, 1);
  img.at(0, 0, 0) = 10;
  img.at(1, 0, 0) = 20;
  CHECK(bilinear_sample(img, {1.0, 0.5}, 0) == doctest::Approx(15.0));
}

TEST_CASE("bilinear_sample is exact on bilinear ramps") {
  ImageBuffer img(10, 8, 1);
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 10; ++c) {
      img.at(c, r, 0) = static_cast<std::uint8_t>(3 * c + 5 * r + 7);
    }
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.5, 9.5), uy(0.5, 7.5);
  for (int i = 0; i < 200; ++i) {
    const double col = ux(rng), row = uy(rng);
    const double expected = 3 * (col - 0.5) + 5 * (row - 0.5) + 7;
    CHECK(bilinear_sample(img, {col, row}, 0) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("skin_mask rule") {
  ImageBuffer img(3, 1, 3);
  auto set_px = [&](int c, int r, int g, int b) {
    img.at(c, 0, 0) = static_cast<std::uint8_t>(r);
    img.at(c, 0, 1) = static_cast<std::uint8_t>(g);
    img.at(c, 0, 2) = static_cast<std::uint8_t>(b);
  };
  set_px(0, 0, 255, 0);      // pure green
  set_px(1, 200, 120, 90);   // skin tone
  set_px(2, 0, 0, 0);        // black
  const BinaryMask mask = skin_mask(img);
  CHECK_FALSE(mask.get(0, 0));
  CHECK(mask.get(1, 0));
  CHECK_FALSE(mask.get(2, 0));
}

TEST_CASE("skin_mask of a grayscale image is all false") {
  const BinaryMask mask = skin_mask(random_image(4, 4, 1, 5));
  CHECK(mask.count() == 0);
}

TEST_CASE("rect_mask examples") {
  CHECK(rect_mask(10, 10, {}, 0.0).count() == 0);
  CHECK(rect_mask(10, 10, {{0, 0, 10, 10}}, 0.0).count() == 100);
  const BinaryMask m = rect_mask(10, 10, {{2, 2, 3, 3}}, 0.0);
  CHECK(m.count() == 9);
  CHECK(m.get(2, 2));
  CHECK(m.get(4, 4));
  CHECK_FALSE(m.get(5, 4));
  CHECK_FALSE(m.get(1, 2));
}

TEST_CASE("rect_mask grows monotonically with dilation") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(-4.0, 20.0), size(0.5, 12.0);
  std::uniform_real_distribution<double> dil(0.0, 6.0);
  for (int i = 0; i < 50; ++i) {
    const std::vector<RectFace> rects{{pos(rng), pos(rng), size(rng), size(rng)}};
    double d1 = dil(rng), d2 = dil(rng);
    if (d1 > d2) std::swap(d1, d2);
    const BinaryMask small = rect_mask(24, 24, rects, d1);
    const BinaryMask big = rect_mask(24, 24, rects, d2);
    for (std::size_t k = 0; k < small.bits.size(); ++k) {
      if (small.bits[k]) CHECK(big.bits[k]);
    }
  }
}

TEST_CASE("rect_mask clips to the image") {
  const BinaryMask m = rect_mask(4, 4, {{-10, -10, 100, 100}}, 5.0);
  CHECK(m.count() == 16);
}

TEST_CASE("png round trip is lossless") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fddb360_raster_test";
  fs::create_directories(dir);
  for (const int ch : {1, 3}) {
    const ImageBuffer img = random_image(13, 9, ch, 42 + ch);
    const std::string path = (dir / ("rt" + std::to_string(ch) + ".png")).string();
    write_png(path, img);
    const ImageBuffer back = read_image(path);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
    CHECK(back.channels == img.channels);
    CHECK(back.data == img.data);
  }
  fs::remove_all(dir);
}

TEST_CASE("jpeg encode/decode approximates the source") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fddb360_raster_test_jpg";
  fs::create_directories(dir);
  ImageBuffer img(16, 16, 3);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      img.at(c, r, 0) = static_cast<std::uint8_t>(10 * c + 40);
      img.at(c, r, 1) = static_cast<std::uint8_t>(10 * r + 40);
      img.at(c, r, 2) = 128;
    }
  }
  const std::string path = (dir / "rt.jpg").string();
  write_jpeg(path, img, 95);
  const ImageBuffer back = read_image(path);
  REQUIRE(back.width == 16);
  REQUIRE(back.channels == 3);
  double max_err = 0;
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    max_err = std::max(max_err, std::abs(double(img.data[i]) - back.data[i]));
  }
  CHECK(max_err < 24.0);
  fs::remove_all(dir);
}

}  // TEST_SUITE

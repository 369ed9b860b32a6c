// Generates the bundled mini dataset: 20 small synthetic scenes with painted
// face-like ellipses, in FDDB layout (10 fold ellipse lists, 2 images each).
// Deterministic; run once and commit the output.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "core/annotations.hpp"
#include "core/image_io.hpp"
#include "core/raster.hpp"

namespace fs = std::filesystem;
using namespace fddb360;

namespace {

struct Scene {
  int width;
  int height;
  int channels;
  int face_count;
};

void paint_background(ImageBuffer& img, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_int_distribution<int> level(40, 110);
  const int style = pick(rng);
  const int base_r = level(rng), base_g = level(rng) + 40, base_b = level(rng) + 60;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      double t = 0.0;
      if (style == 0) {
        t = static_cast<double>(c) / img.width;
      } else if (style == 1) {
        t = static_cast<double>(r) / img.height;
      } else {
        t = 0.5 + 0.5 * std::sin(c * 0.11) * std::cos(r * 0.09);
      }
      const int add = static_cast<int>(90 * t);
      auto put = [&](int ch, int v) {
        img.at(c, r, ch) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
      };
      if (img.channels == 3) {
        put(0, base_r + add / 2);  // keep red low: background must not read as skin
        put(1, base_g + add);
        put(2, base_b + add);
      } else {
        put(0, base_g + add);
      }
    }
  }
  // A few textured blocks so the inpainting has structure to copy.
  std::uniform_int_distribution<int> bx(0, std::max(1, img.width - 12));
  std::uniform_int_distribution<int> by(0, std::max(1, img.height - 12));
  for (int k = 0; k < 4; ++k) {
    const int x0 = bx(rng), y0 = by(rng);
    const int shade = 30 + 30 * k;
    for (int r = y0; r < std::min(img.height, y0 + 10); ++r) {
      for (int c = x0; c < std::min(img.width, x0 + 10); ++c) {
        const int v = (c + r) % 2 == 0 ? shade : shade + 50;
        if (img.channels == 3) {
          img.at(c, r, 0) = static_cast<std::uint8_t>(v / 2);
          img.at(c, r, 1) = static_cast<std::uint8_t>(v);
          img.at(c, r, 2) = static_cast<std::uint8_t>(std::min(255, v + 40));
        } else {
          img.at(c, r, 0) = static_cast<std::uint8_t>(v);
        }
      }
    }
  }
}

EllipseFace paint_face(ImageBuffer& img, std::mt19937_64& rng, int slot,
                       int slots) {
  const double margin = 0.18;
  const double band = (1.0 - 2 * margin) / slots;
  std::uniform_real_distribution<double> jitter(-0.04, 0.04);
  EllipseFace face;
  face.center_col =
      img.width * (margin + band * (slot + 0.5) + jitter(rng));
  face.center_row = img.height * (0.35 + 0.3 * (slot % 2 == 0 ? 0.0 : 1.0) +
                                  jitter(rng));
  const double max_a = std::min(img.width, img.height) * 0.16;
  std::uniform_real_distribution<double> size(max_a * 0.6, max_a);
  face.major_radius = size(rng);
  face.minor_radius = face.major_radius * 0.72;
  std::uniform_real_distribution<double> ang(-0.5, 0.5);
  face.angle = ang(rng);

  const double ca = std::cos(face.angle), sa = std::sin(face.angle);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      const double dx = c + 0.5 - face.center_col;
      const double dy = r + 0.5 - face.center_row;
      const double u = dx * ca + dy * sa;
      const double v = -dx * sa + dy * ca;
      const double q = (u * u) / (face.major_radius * face.major_radius) +
                       (v * v) / (face.minor_radius * face.minor_radius);
      if (q > 1.0) continue;
      if (img.channels == 3) {
        img.at(c, r, 0) = static_cast<std::uint8_t>(205 - 10 * q);
        img.at(c, r, 1) = static_cast<std::uint8_t>(150 - 15 * q);
        img.at(c, r, 2) = static_cast<std::uint8_t>(118 - 15 * q);
      } else {
        img.at(c, r, 0) = static_cast<std::uint8_t>(170 - 30 * q);
      }
      if (q < 0.08) {  // dark patch roughly where features sit
        for (int ch = 0; ch < img.channels; ++ch) {
          img.at(c, r, ch) = static_cast<std::uint8_t>(img.at(c, r, ch) / 3);
        }
      }
    }
  }
  return face;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_fixture <output_root>\n");
    return 1;
  }
  const fs::path root(argv[1]);

  const Scene scenes[20] = {
      {120, 90, 3, 1},  {72, 112, 3, 1},  {132, 96, 3, 2},  {100, 100, 3, 0},
      {104, 78, 3, 1},  {80, 120, 3, 2},  {120, 80, 1, 1},  {60, 80, 3, 1},
      {96, 72, 3, 3},   {110, 82, 3, 1},  {120, 90, 3, 2},  {90, 120, 3, 1},
      {128, 92, 3, 1},  {100, 100, 1, 2}, {112, 84, 3, 0},  {76, 108, 3, 1},
      {124, 88, 3, 2},  {64, 88, 3, 1},   {118, 86, 3, 1},  {102, 76, 3, 2},
  };

  std::mt19937_64 rng(20240719ULL);
  int scene_index = 0;
  for (int fold = 1; fold <= 10; ++fold) {
    char list_name[48];
    std::snprintf(list_name, sizeof(list_name),
                  "FDDB-fold-%02d-ellipseList.txt", fold);
    fs::create_directories(root);
    std::ofstream list(root / list_name, std::ios::binary);
    for (int n = 0; n < 2; ++n, ++scene_index) {
      const Scene& scene = scenes[scene_index];
      char rel[64];
      std::snprintf(rel, sizeof(rel), "fold%02d/img_%03d", fold, scene_index);
      fs::create_directories(root / "images" / fs::path(rel).parent_path());

      ImageBuffer img(scene.width, scene.height, scene.channels);
      paint_background(img, rng);
      std::vector<EllipseFace> faces;
      for (int f = 0; f < scene.face_count; ++f) {
        faces.push_back(paint_face(img, rng, f, scene.face_count));
      }
      write_png((root / "images" / (std::string(rel) + ".png")).string(), img);

      list << rel << "\n" << faces.size() << "\n";
      char line[160];
      for (const EllipseFace& e : faces) {
        std::snprintf(line, sizeof(line), "%.6f %.6f %.6f %.6f %.6f 1\n",
                      e.major_radius, e.minor_radius, e.angle, e.center_col,
                      e.center_row);
        list << line;
      }
    }
  }
  std::printf("wrote 20 images under %s\n", root.string().c_str());
  return 0;
}

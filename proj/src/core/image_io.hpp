#pragma once

#include <string>

#include "core/raster.hpp"

namespace fddb360 {

// Decodes a PNG or JPEG file (8 bits/channel) into a 1- or 3-channel buffer.
ImageBuffer read_image(const std::string& path);

void write_png(const std::string& path, const ImageBuffer& img);
void write_jpeg(const std::string& path, const ImageBuffer& img,
                int quality = 92);

// Width/height from the file header without decoding the pixel data.
std::pair<int, int> read_image_size(const std::string& path);

}  // namespace fddb360

// Copyright 2026 The rexl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rexl/core/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <vector>

#include "rexl/core/error.hpp"

namespace rexl {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void png_error_handler(png_structp png, png_const_charp message) {
  auto* error = static_cast<std::string*>(png_get_error_ptr(png));
  if (error != nullptr) *error = message;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

float from_level(unsigned level, const ValueRange& range) {
  const double v = range.lo + range.width() * (static_cast<double>(level) / 255.0);
  return std::clamp(static_cast<float>(v), static_cast<float>(range.lo), static_cast<float>(range.hi));
}

}  // namespace

unsigned char quantize(double value, const ValueRange& range) noexcept {
  const double t = std::clamp((value - range.lo) / range.width(), 0.0, 1.0);
  return static_cast<unsigned char>(std::lround(t * 255.0));
}

namespace {

struct DecodedPng {
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
};

// Keeps every object with a destructor out of the setjmp frame.
bool decode_png(png_structp png, png_infop info, std::FILE* file, DecodedPng* out) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, file);
  png_read_info(png, info);
  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if ((color & PNG_COLOR_MASK_ALPHA) != 0) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS) != 0) {
    png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
  }
  png_read_update_info(png, info);
  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  out->channels = png_get_channels(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  out->pixels.resize(row_bytes * out->height);
  out->rows.resize(out->height);
  for (png_uint_32 y = 0; y < out->height; ++y) out->rows[y] = out->pixels.data() + y * row_bytes;
  png_read_image(png, out->rows.data());
  png_read_end(png, nullptr);
  return true;
}

bool encode_png(png_structp png, png_infop info, std::FILE* file, const ImageTensor* image,
                png_bytep* rows, png_text* chunks, int num_chunks) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, file);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image->width()),
               static_cast<png_uint_32>(image->height()), 8,
               image->channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (num_chunks > 0) png_set_text(png, info, chunks, num_chunks);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  return true;
}

}  // namespace

ImageTensor read_png(const std::filesystem::path& path, ValueRange range) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw FormatError("read_png: cannot open " + path.string());

  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error, png_error_handler,
                                           png_warning_handler);
  if (png == nullptr) throw FormatError("read_png: libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw FormatError("read_png: libpng initialisation failed");
  }
  DecodedPng decoded;
  const bool ok = decode_png(png, info, file.get(), &decoded);
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok) throw FormatError("read_png: " + path.string() + ": " + error);

  if (decoded.channels != 1 && decoded.channels != 3) {
    throw FormatError("read_png: unsupported channel count " + std::to_string(decoded.channels));
  }
  std::vector<float> data(decoded.pixels.size());
  std::transform(decoded.pixels.begin(), decoded.pixels.end(), data.begin(),
                 [&](unsigned char level) { return from_level(level, range); });
  return ImageTensor(static_cast<int>(decoded.height), static_cast<int>(decoded.width), decoded.channels,
                     std::move(data), range);
}

void write_png(const std::filesystem::path& path, const ImageTensor& image, const TextMetadata& text) {
  require(image.channels() == 1 || image.channels() == 3, "write_png: only 1 or 3 channels supported");
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw FormatError("write_png: cannot open " + path.string() + " for writing");

  std::vector<unsigned char> bytes(image.size());
  const auto data = image.data();
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize(data[i], image.range());
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.height()));
  const auto row_bytes = static_cast<std::size_t>(image.width() * image.channels());
  for (int y = 0; y < image.height(); ++y) {
    rows[static_cast<std::size_t>(y)] = bytes.data() + static_cast<std::size_t>(y) * row_bytes;
  }

  // libpng wants mutable char pointers for text chunks.
  std::vector<std::string> keys;
  std::vector<std::string> values;
  for (const auto& [k, v] : text) {
    keys.push_back(k);
    values.push_back(v);
  }
  std::vector<png_text> chunks(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    chunks[i] = png_text{};
    chunks[i].compression = PNG_TEXT_COMPRESSION_NONE;
    chunks[i].key = keys[i].data();
    chunks[i].text = values[i].data();
    chunks[i].text_length = values[i].size();
  }

  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, png_error_handler,
                                            png_warning_handler);
  if (png == nullptr) throw FormatError("write_png: libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw FormatError("write_png: libpng initialisation failed");
  }
  const bool ok = encode_png(png, info, file.get(), &image, rows.data(), chunks.data(),
                             static_cast<int>(chunks.size()));
  png_destroy_write_struct(&png, &info);
  if (!ok) throw FormatError("write_png: " + path.string() + ": " + error);
}

ImageTensor read_pgm(const std::filesystem::path& path, ValueRange range) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("read_pgm: cannot open " + path.string());

  auto next_token = [&]() {
    std::string token;
    char ch = 0;
    while (in.get(ch)) {
      if (ch == '#') {
        std::string ignored;
        std::getline(in, ignored);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch)) != 0) {
        if (!token.empty()) break;
        continue;
      }
      token.push_back(ch);
    }
    return token;
  };

  const std::string magic = next_token();
  if (magic != "P5" && magic != "P2") throw FormatError("read_pgm: not a PGM file: " + path.string());
  int width = 0;
  int height = 0;
  int maxval = 0;
  try {
    width = std::stoi(next_token());
    height = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw FormatError("read_pgm: malformed header in " + path.string());
  }
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255) {
    throw FormatError("read_pgm: unsupported header in " + path.string());
  }

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<float> data(count);
  const auto level = [&](unsigned raw) {
    return from_level(static_cast<unsigned>(std::lround(255.0 * raw / maxval)), range);
  };
  if (magic == "P5") {
    std::vector<unsigned char> raw(count);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
    if (static_cast<std::size_t>(in.gcount()) != count) {
      throw FormatError("read_pgm: truncated pixel data in " + path.string());
    }
    for (std::size_t i = 0; i < count; ++i) data[i] = level(raw[i]);
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::string token = next_token();
      if (token.empty()) throw FormatError("read_pgm: truncated pixel data in " + path.string());
      data[i] = level(static_cast<unsigned>(std::stoi(token)));
    }
  }
  return ImageTensor(height, width, 1, std::move(data), range);
}

void write_pgm(const std::filesystem::path& path, const ImageTensor& image) {
  require(image.channels() == 1, "write_pgm: only single-channel images supported");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("write_pgm: cannot open " + path.string() + " for writing");
  out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
  for (float v : image.data()) out.put(static_cast<char>(quantize(v, image.range())));
  if (!out) throw FormatError("write_pgm: write failed for " + path.string());
}

ImageTensor read_image(const std::filesystem::path& path, ValueRange range) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png") return read_png(path, range);
  if (ext == ".pgm") return read_pgm(path, range);
  throw FormatError("read_image: unsupported image format: " + path.string());
}

}  // namespace rexl

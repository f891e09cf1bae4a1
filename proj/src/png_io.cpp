// Copyright 2026 The skinaudit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "skinaudit/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

namespace skinaudit::io {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File Open(const std::filesystem::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) {
    throw IoError(std::string("cannot open ") + path.string() +
                  (mode[0] == 'r' ? "" : " for writing"));
  }
  return f;
}

// libpng reports errors through longjmp; messages land here first.
void OnError(png_structp png, png_const_charp msg) {
  auto* out = static_cast<std::string*>(png_get_error_ptr(png));
  if (out) *out = msg;
  png_longjmp(png, 1);
}

void OnWarning(png_structp, png_const_charp) {}

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path)
      : path_(path), file_(Open(path, "rb")) {
    png_byte sig[8];
    if (std::fread(sig, 1, 8, file_.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
      throw IoError(path.string() + " is not a PNG file");
    }
    png_ = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error_, OnError,
                                  OnWarning);
    if (!png_) throw IoError("libpng initialisation failed");
    info_ = png_create_info_struct(png_);
    if (!info_) {
      png_destroy_read_struct(&png_, nullptr, nullptr);
      throw IoError("libpng initialisation failed");
    }
  }
  ~Reader() { png_destroy_read_struct(&png_, &info_, nullptr); }
  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  // Both entry points run under setjmp; nothing with a destructor may be
  // constructed between the setjmp and a libpng call.
  void ReadHeader() {
    if (setjmp(png_jmpbuf(png_))) Fail();
    png_init_io(png_, file_.get());
    png_set_sig_bytes(png_, 8);
    png_read_info(png_, info_);
  }

  RawImage Decode() {
    ReadHeader();
    const png_uint_32 width = png_get_image_width(png_, info_);
    const png_uint_32 height = png_get_image_height(png_, info_);
    const int color_type = png_get_color_type(png_, info_);
    const bool gray = (color_type & PNG_COLOR_MASK_COLOR) == 0;

    RawImage out;
    out.width = width;
    out.height = height;
    out.channels = gray ? 1 : 3;
    out.data.resize(static_cast<std::size_t>(width) * height * out.channels);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) {
      rows[y] = out.data.data() + static_cast<std::size_t>(y) * width * out.channels;
    }

    if (setjmp(png_jmpbuf(png_))) Fail();
    png_set_strip_16(png_);
    png_set_strip_alpha(png_);
    png_set_packing(png_);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png_);
    if (gray) png_set_expand_gray_1_2_4_to_8(png_);
    png_read_update_info(png_, info_);
    if (png_get_rowbytes(png_, info_) !=
        static_cast<std::size_t>(width) * out.channels) {
      throw IoError(path_.string() + ": unsupported PNG layout");
    }
    png_read_image(png_, rows.data());
    png_read_end(png_, nullptr);
    return out;
  }

  std::pair<std::size_t, std::size_t> Size() {
    ReadHeader();
    return {png_get_image_width(png_, info_), png_get_image_height(png_, info_)};
  }

 private:
  [[noreturn]] void Fail() {
    throw IoError(path_.string() + ": " + (error_.empty() ? "decode error" : error_));
  }

  std::filesystem::path path_;
  File file_;
  std::string error_;
  png_structp png_ = nullptr;
  png_infop info_ = nullptr;
};

void Write(const std::filesystem::path& path, std::size_t width,
           std::size_t height, int color_type, int channels,
           const std::uint8_t* data) {
  File file = Open(path, "wb");
  std::string error;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &error, OnError, OnWarning);
  if (!png) throw IoError("libpng initialisation failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(height);
  for (std::size_t y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(data + y * width * channels);
  }
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path.string() + ": " + (error.empty() ? "encode error" : error));
  }
  png_init_io(png, file.get());
  // Batch exports write thousands of files; the adaptive filter search and
  // high zlib levels cost far more time than the space they save.
  png_set_compression_level(png, 2);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_SUB);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw IoError("error writing " + path.string());
}

}  // namespace

RawImage ReadPng(const std::filesystem::path& path) {
  return Reader(path).Decode();
}

std::pair<std::size_t, std::size_t> PngSize(const std::filesystem::path& path) {
  return Reader(path).Size();
}

RgbImage ReadRgb(const std::filesystem::path& path) {
  RawImage raw = ReadPng(path);
  if (raw.width == 0 || raw.height == 0) {
    throw IoError(path.string() + ": empty image");
  }
  std::vector<RgbPixel> pixels(raw.width * raw.height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (raw.channels == 1) {
      const std::uint8_t v = raw.data[i];
      pixels[i] = {v, v, v};
    } else {
      pixels[i] = {raw.data[3 * i], raw.data[3 * i + 1], raw.data[3 * i + 2]};
    }
  }
  return RgbImage(raw.width, raw.height, std::move(pixels));
}

void WriteRgb(const std::filesystem::path& path, const RgbImage& img) {
  static_assert(sizeof(RgbPixel) == 3);
  Write(path, img.width(), img.height(), PNG_COLOR_TYPE_RGB, 3,
        reinterpret_cast<const std::uint8_t*>(img.pixels().data()));
}

void WriteGray(const std::filesystem::path& path, std::size_t width,
               std::size_t height, std::span<const std::uint8_t> data) {
  if (data.size() != width * height) {
    throw InvalidArgument("gray buffer size does not match dimensions");
  }
  Write(path, width, height, PNG_COLOR_TYPE_GRAY, 1, data.data());
}

}  // namespace skinaudit::io

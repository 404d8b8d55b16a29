// Copyright 2026 The FSOF Authors
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

#include "png_codec.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>

#include "fsof/errors.hpp"

namespace fsof::detail {

namespace {

struct ReadState {
  std::span<const std::uint8_t> data;
  std::size_t offset = 0;
  bool truncated = false;
  char message[256] = {};
};

struct WriteState {
  std::vector<std::uint8_t>* out = nullptr;
  char message[256] = {};
};

void on_read(png_structp png, png_bytep dst, png_size_t length) {
  auto* state = static_cast<ReadState*>(png_get_io_ptr(png));
  if (length > state->data.size() - state->offset) {
    state->truncated = true;
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(dst, state->data.data() + state->offset, length);
  state->offset += length;
}

void on_read_error(png_structp png, png_const_charp message) {
  auto* state = static_cast<ReadState*>(png_get_error_ptr(png));
  std::strncpy(state->message, message, sizeof(state->message) - 1);
  png_longjmp(png, 1);
}

void on_write(png_structp png, png_bytep src, png_size_t length) {
  auto* state = static_cast<WriteState*>(png_get_io_ptr(png));
  state->out->insert(state->out->end(), src, src + length);
}

void on_write_error(png_structp png, png_const_charp message) {
  auto* state = static_cast<WriteState*>(png_get_error_ptr(png));
  std::strncpy(state->message, message, sizeof(state->message) - 1);
  png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

enum class DecodeStatus { kOk, kFailed, kBadDepth, kBadColor };

// No object with a non-trivial destructor lives in this frame, so the
// longjmp out of libpng is well defined.
DecodeStatus decode_into(png_structp png, png_infop info, PngImage& image,
                         std::vector<std::uint8_t>& raw,
                         std::vector<png_bytep>& rows) {
  if (setjmp(png_jmpbuf(png))) return DecodeStatus::kFailed;

  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  image.width = static_cast<int>(png_get_image_width(png, info));
  image.height = static_cast<int>(png_get_image_height(png, info));
  image.bit_depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (image.bit_depth != 8 && image.bit_depth != 16) return DecodeStatus::kBadDepth;
  if (color == PNG_COLOR_TYPE_PALETTE) return DecodeStatus::kBadColor;
  image.channels = png_get_channels(png, info);

  png_textp text = nullptr;
  int num_text = 0;
  png_get_text(png, info, &text, &num_text);
  for (int i = 0; i < num_text; ++i) {
    image.text.emplace_back(text[i].key, text[i].text ? text[i].text : "");
  }

  if (image.bit_depth == 16) png_set_swap(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  if (row_bytes * static_cast<std::size_t>(image.height) > (std::size_t{1} << 30)) {
    png_error(png, "image too large");
  }
  raw.resize(row_bytes * static_cast<std::size_t>(image.height));
  rows.resize(static_cast<std::size_t>(image.height));
  for (int y = 0; y < image.height; ++y) {
    rows[static_cast<std::size_t>(y)] = raw.data() + row_bytes * static_cast<std::size_t>(y);
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  return DecodeStatus::kOk;
}

bool encode_into(png_structp png, png_infop info, const PngImage& image,
                 std::vector<png_text>& text, std::vector<png_bytep>& rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  const int color = image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), image.bit_depth, color,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (!text.empty()) png_set_text(png, info, text.data(), static_cast<int>(text.size()));
  png_write_info(png, info);
  if (image.bit_depth == 16) png_set_swap(png);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  return true;
}

}  // namespace

PngImage decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw BadMagic("not a PNG file");
  }
  ReadState state;
  state.data = bytes;
  state.offset = 8;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state,
                                           on_read_error, on_warning);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  png_set_read_fn(png, &state, on_read);
  png_set_user_limits(png, 1u << 16, 1u << 16);

  PngImage image;
  std::vector<std::uint8_t> raw;
  std::vector<png_bytep> rows;
  const DecodeStatus status = decode_into(png, info, image, raw, rows);
  png_destroy_read_struct(&png, &info, nullptr);

  switch (status) {
    case DecodeStatus::kOk:
      break;
    case DecodeStatus::kBadDepth:
      throw WrongBitDepth("unsupported PNG bit depth " + std::to_string(image.bit_depth));
    case DecodeStatus::kBadColor:
      throw WrongChannelCount("palette PNGs are not supported");
    case DecodeStatus::kFailed:
      if (state.truncated) throw TruncatedFile(state.message);
      throw IoError(std::string("corrupt PNG: ") + state.message);
  }

  const std::size_t count = static_cast<std::size_t>(image.width) *
                            static_cast<std::size_t>(image.height) *
                            static_cast<std::size_t>(image.channels);
  image.samples.resize(count);
  if (image.bit_depth == 16) {
    std::memcpy(image.samples.data(), raw.data(), count * sizeof(std::uint16_t));
  } else {
    for (std::size_t i = 0; i < count; ++i) image.samples[i] = raw[i];
  }
  return image;
}

std::vector<std::uint8_t> encode_png(const PngImage& image) {
  if ((image.channels != 1 && image.channels != 3) ||
      (image.bit_depth != 8 && image.bit_depth != 16)) {
    throw InvalidArgument("encode_png: unsupported layout");
  }
  const std::size_t per_row = static_cast<std::size_t>(image.width) *
                              static_cast<std::size_t>(image.channels);
  const std::size_t bytes_per_sample = image.bit_depth == 16 ? 2 : 1;
  std::vector<std::uint8_t> raw(per_row * bytes_per_sample *
                                static_cast<std::size_t>(image.height));
  if (image.bit_depth == 16) {
    std::memcpy(raw.data(), image.samples.data(), raw.size());
  } else {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      raw[i] = static_cast<std::uint8_t>(image.samples[i]);
    }
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
  for (std::size_t y = 0; y < rows.size(); ++y) {
    rows[y] = raw.data() + y * per_row * bytes_per_sample;
  }
  std::vector<png_text> text(image.text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    text[i] = {};
    text[i].compression = PNG_TEXT_COMPRESSION_NONE;
    text[i].key = const_cast<char*>(image.text[i].first.c_str());
    text[i].text = const_cast<char*>(image.text[i].second.c_str());
    text[i].text_length = image.text[i].second.size();
  }

  std::vector<std::uint8_t> out;
  WriteState state;
  state.out = &out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state,
                                            on_write_error, on_warning);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }
  png_set_write_fn(png, &state, on_write, nullptr);
  const bool ok = encode_into(png, info, image, text, rows);
  png_destroy_write_struct(&png, &info);
  if (!ok) throw IoError(std::string("PNG encoding failed: ") + state.message);
  return out;
}

}  // namespace fsof::detail

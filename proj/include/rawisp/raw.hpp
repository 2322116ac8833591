/**
 * Copyright 2026 The rawisp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RAWISP_RAW_HPP_
#define RAWISP_RAW_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rawisp/tensor.hpp"

namespace rawisp {

enum class CfaPattern { kRGGB, kBGGR, kGRBG, kGBRG };

std::string_view cfa_name(CfaPattern p);
/// Throws kMetadata for anything but RGGB/BGGR/GRBG/GBRG (case-insensitive).
CfaPattern parse_cfa(std::string_view name);

/// Bayer mosaic plus the sensor metadata needed to normalize it.
struct RawFrame {
  int64_t width = 0;
  int64_t height = 0;
  std::vector<uint16_t> samples;  // row-major
  CfaPattern cfa = CfaPattern::kRGGB;
  uint32_t black_level = 0;
  uint32_t white_level = 65535;

  /// Throws kFormat on a size mismatch and kMetadata on black >= white.
  void validate() const;
  uint16_t at(int64_t y, int64_t x) const { return samples[static_cast<size_t>(y * width + x)]; }
};

struct SensorMetadata {
  CfaPattern cfa = CfaPattern::kRGGB;
  uint32_t black_level = 0;
  uint32_t white_level = 0;
};

/// Sidecar text: one `key = value` (or `key: value`) per line, `#` comments.
/// Required keys: cfa_pattern, black_level, white_level.
SensorMetadata parse_metadata(std::string_view text);
std::string format_metadata(const SensorMetadata& meta);

struct GrayImage16 {
  int64_t width = 0;
  int64_t height = 0;
  std::vector<uint16_t> samples;
};

/// Binary PGM (P5). Samples are big-endian 16-bit when maxval > 255.
/// Throws kFormat on a bad header or excess payload, kTruncation on a short one.
GrayImage16 decode_pgm(std::span<const uint8_t> bytes);
std::vector<uint8_t> encode_pgm16(const GrayImage16& image);

RawFrame load_raw(const std::string& mosaic_path, const std::string& metadata_path);
void save_raw(const RawFrame& frame, const std::string& mosaic_path,
              const std::string& metadata_path);

/// Smooth colour scene sampled through `cfa`, with mild noise, scaled into
/// [black_level, white_level]. Deterministic in `seed`.
RawFrame synthesize_raw(int64_t width, int64_t height, CfaPattern cfa, uint32_t black_level,
                        uint32_t white_level, uint64_t seed);

/// (1, H, W, 1) tensor of clamp((v - black) / (white - black), 0, 1). Non-RGGB
/// mosaics are shifted by one row and/or column with mirrored borders so that
/// (0,0) is always an R site.
Tensor normalize(const RawFrame& frame);

/// 8-bit interleaved RGB.
class RenderedImage {
 public:
  RenderedImage() = default;
  /// Throws kInvalidShape for a zero extent, kInvalidArgument on a size mismatch.
  RenderedImage(int64_t width, int64_t height, std::vector<uint8_t> rgb);

  int64_t width() const { return width_; }
  int64_t height() const { return height_; }
  const std::vector<uint8_t>& rgb() const { return rgb_; }
  uint8_t at(int64_t y, int64_t x, int c) const {
    return rgb_[static_cast<size_t>((y * width_ + x) * 3 + c)];
  }

  friend bool operator==(const RenderedImage&, const RenderedImage&) = default;

 private:
  int64_t width_ = 0;
  int64_t height_ = 0;
  std::vector<uint8_t> rgb_;
};

/// Maps a (1, H, W, 3) network output in (-1, 1) to round((v + 1) / 2 * 255),
/// halves rounded away from zero. Throws kShape for other shapes and
/// kValidation for non-finite values.
RenderedImage render_output(const Tensor& net_out);

/// Binary PPM (P6, maxval 255).
std::vector<uint8_t> encode_ppm(const RenderedImage& image);
RenderedImage decode_ppm(std::span<const uint8_t> bytes);
/// Returns the number of bytes written. Throws kIo.
size_t write_image(const RenderedImage& image, const std::string& path);
RenderedImage read_image(const std::string& path);

/// (1, H, W, 3) tensor with samples scaled to [0, 1].
Tensor image_to_tensor(const RenderedImage& image);

std::vector<uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const uint8_t> bytes);

}  // namespace rawisp

#endif  // RAWISP_RAW_HPP_

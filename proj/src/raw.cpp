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
#include "rawisp/raw.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>

#include "rawisp/error.hpp"

namespace rawisp {
namespace {

struct PnmHeader {
  int64_t width = 0;
  int64_t height = 0;
  int64_t maxval = 0;
  size_t payload_offset = 0;
};

// Parses "<magic> <width> <height> <maxval>" with '#' comments, followed by
// exactly one whitespace byte before the payload.
PnmHeader parse_pnm_header(std::span<const uint8_t> bytes, std::string_view magic) {
  if (bytes.size() < 2 || bytes[0] != static_cast<uint8_t>(magic[0]) ||
      bytes[1] != static_cast<uint8_t>(magic[1])) {
    throw_error(ErrorCode::kFormat, "bad magic: expected " + std::string(magic));
  }
  size_t pos = 2;
  const auto next_token = [&]() -> int64_t {
    for (;;) {
      while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const size_t start = pos;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) ++pos;
    if (start == pos) throw_error(ErrorCode::kFormat, "malformed " + std::string(magic) + " header");
    int64_t value = 0;
    const auto* first = reinterpret_cast<const char*>(bytes.data() + start);
    const auto* last = reinterpret_cast<const char*>(bytes.data() + pos);
    if (std::from_chars(first, last, value).ec != std::errc{}) {
      throw_error(ErrorCode::kFormat, "malformed " + std::string(magic) + " header value");
    }
    return value;
  };
  PnmHeader h;
  h.width = next_token();
  h.height = next_token();
  h.maxval = next_token();
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
    throw_error(ErrorCode::kFormat, "malformed " + std::string(magic) + " header terminator");
  }
  h.payload_offset = pos + 1;
  if (h.width < 1 || h.height < 1) {
    throw_error(ErrorCode::kFormat, std::string(magic) + " image has a zero dimension");
  }
  if (h.maxval < 1 || h.maxval > 65535) {
    throw_error(ErrorCode::kFormat, "maxval out of range");
  }
  return h;
}

void check_payload(size_t have, size_t want, std::string_view what) {
  if (have < want) {
    throw_error(ErrorCode::kTruncation, std::string(what) + " payload truncated: header needs " +
                                            std::to_string(want) + " bytes, found " +
                                            std::to_string(have));
  }
  if (have > want) {
    throw_error(ErrorCode::kFormat, std::string(what) + " payload larger than header dimensions (" +
                                        std::to_string(have) + " bytes, expected " +
                                        std::to_string(want) + ")");
  }
}

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

uint32_t parse_level(const std::string& key, const std::string& value) {
  uint32_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size() || out > 65535) {
    throw_error(ErrorCode::kMetadata, "metadata key '" + key + "' has invalid value '" + value + "'");
  }
  return out;
}

}  // namespace

std::string_view cfa_name(CfaPattern p) {
  switch (p) {
    case CfaPattern::kRGGB: return "RGGB";
    case CfaPattern::kBGGR: return "BGGR";
    case CfaPattern::kGRBG: return "GRBG";
    case CfaPattern::kGBRG: return "GBRG";
  }
  return "RGGB";
}

CfaPattern parse_cfa(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == "RGGB") return CfaPattern::kRGGB;
  if (up == "BGGR") return CfaPattern::kBGGR;
  if (up == "GRBG") return CfaPattern::kGRBG;
  if (up == "GBRG") return CfaPattern::kGBRG;
  throw_error(ErrorCode::kMetadata, "unknown cfa_pattern '" + std::string(name) + "'");
}

void RawFrame::validate() const {
  if (width < 1 || height < 1) throw_error(ErrorCode::kFormat, "raw frame has a zero dimension");
  if (static_cast<int64_t>(samples.size()) != width * height) {
    throw_error(ErrorCode::kFormat, "raw frame sample count does not match its dimensions");
  }
  if (black_level >= white_level) {
    throw_error(ErrorCode::kMetadata, "black_level (" + std::to_string(black_level) +
                                          ") must be below white_level (" +
                                          std::to_string(white_level) + ")");
  }
}

SensorMetadata parse_metadata(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const size_t sep = line.find_first_of("=:");
    if (sep == std::string::npos) {
      throw_error(ErrorCode::kMetadata, "malformed metadata line '" + trim(line) + "'");
    }
    kv[trim(line.substr(0, sep))] = trim(line.substr(sep + 1));
  }
  for (const char* key : {"cfa_pattern", "black_level", "white_level"}) {
    if (!kv.count(key)) throw_error(ErrorCode::kMetadata, std::string("metadata key '") + key + "' missing");
  }
  SensorMetadata meta;
  meta.cfa = parse_cfa(kv["cfa_pattern"]);
  meta.black_level = parse_level("black_level", kv["black_level"]);
  meta.white_level = parse_level("white_level", kv["white_level"]);
  if (meta.black_level >= meta.white_level) {
    throw_error(ErrorCode::kMetadata, "black_level (" + std::to_string(meta.black_level) +
                                          ") must be below white_level (" +
                                          std::to_string(meta.white_level) + ")");
  }
  return meta;
}

std::string format_metadata(const SensorMetadata& meta) {
  std::ostringstream os;
  os << "cfa_pattern = " << cfa_name(meta.cfa) << "\n"
     << "black_level = " << meta.black_level << "\n"
     << "white_level = " << meta.white_level << "\n";
  return os.str();
}

GrayImage16 decode_pgm(std::span<const uint8_t> bytes) {
  const PnmHeader h = parse_pnm_header(bytes, "P5");
  const size_t bps = h.maxval > 255 ? 2 : 1;
  const size_t count = static_cast<size_t>(h.width * h.height);
  check_payload(bytes.size() - h.payload_offset, count * bps, "P5");
  GrayImage16 img{h.width, h.height, std::vector<uint16_t>(count)};
  const uint8_t* p = bytes.data() + h.payload_offset;
  for (size_t i = 0; i < count; ++i) {
    img.samples[i] = bps == 2 ? static_cast<uint16_t>((p[2 * i] << 8) | p[2 * i + 1]) : p[i];
  }
  return img;
}

std::vector<uint8_t> encode_pgm16(const GrayImage16& image) {
  const std::string header =
      "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n65535\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.samples.size() * 2);
  for (uint16_t v : image.samples) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v & 0xFF));
  }
  return out;
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorCode::kIo, "cannot open '" + path + "'");
  return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw_error(ErrorCode::kIo, "write to '" + path + "' failed");
}

RawFrame load_raw(const std::string& mosaic_path, const std::string& metadata_path) {
  const std::vector<uint8_t> meta_bytes = read_file(metadata_path);
  const SensorMetadata meta =
      parse_metadata(std::string_view(reinterpret_cast<const char*>(meta_bytes.data()), meta_bytes.size()));
  GrayImage16 mosaic = decode_pgm(read_file(mosaic_path));
  RawFrame frame{mosaic.width, mosaic.height, std::move(mosaic.samples), meta.cfa,
                 meta.black_level, meta.white_level};
  frame.validate();
  return frame;
}

void save_raw(const RawFrame& frame, const std::string& mosaic_path,
              const std::string& metadata_path) {
  frame.validate();
  write_file(mosaic_path, encode_pgm16(GrayImage16{frame.width, frame.height, frame.samples}));
  const std::string meta = format_metadata({frame.cfa, frame.black_level, frame.white_level});
  write_file(metadata_path, std::span(reinterpret_cast<const uint8_t*>(meta.data()), meta.size()));
}

RawFrame synthesize_raw(int64_t width, int64_t height, CfaPattern cfa, uint32_t black_level,
                        uint32_t white_level, uint64_t seed) {
  RawFrame frame;
  frame.width = width;
  frame.height = height;
  frame.cfa = cfa;
  frame.black_level = black_level;
  frame.white_level = white_level;
  frame.samples.resize(static_cast<size_t>(std::max<int64_t>(width * height, 0)));
  frame.validate();

  // Colour index (0 R, 1 G, 2 B) of each site in the 2x2 cell, row-major.
  std::array<int, 4> sites{};
  switch (cfa) {
    case CfaPattern::kRGGB: sites = {0, 1, 1, 2}; break;
    case CfaPattern::kBGGR: sites = {2, 1, 1, 0}; break;
    case CfaPattern::kGRBG: sites = {1, 0, 2, 1}; break;
    case CfaPattern::kGBRG: sites = {1, 2, 0, 1}; break;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.01);
  const double phase = std::uniform_real_distribution<double>(0.0, 6.283185307179586)(rng);
  const double range = static_cast<double>(white_level) - black_level;
  for (int64_t y = 0; y < height; ++y) {
    for (int64_t x = 0; x < width; ++x) {
      const double u = static_cast<double>(x) / static_cast<double>(width);
      const double v = static_cast<double>(y) / static_cast<double>(height);
      const std::array<double, 3> rgb = {
          0.35 + 0.3 * u + 0.1 * std::sin(12.0 * v + phase),
          0.45 + 0.25 * std::sin(6.0 * u + 4.0 * v + phase),
          0.3 + 0.3 * v + 0.1 * std::cos(9.0 * u - phase),
      };
      const int site = sites[static_cast<size_t>((y % 2) * 2 + (x % 2))];
      const double level = std::clamp(rgb[static_cast<size_t>(site)] + noise(rng), 0.0, 1.0);
      frame.samples[static_cast<size_t>(y * width + x)] =
          static_cast<uint16_t>(std::lround(black_level + level * range));
    }
  }
  return frame;
}

Tensor normalize(const RawFrame& frame) {
  frame.validate();
  // Offset of the first R site.
  int64_t dy = 0;
  int64_t dx = 0;
  switch (frame.cfa) {
    case CfaPattern::kRGGB: break;
    case CfaPattern::kGRBG: dx = 1; break;
    case CfaPattern::kGBRG: dy = 1; break;
    case CfaPattern::kBGGR: dy = 1; dx = 1; break;
  }
  if ((dy && frame.height < 2) || (dx && frame.width < 2)) {
    throw_error(ErrorCode::kFormat, "frame too small to re-phase its CFA pattern");
  }
  // Reflecting about the last sample keeps the colour phase intact.
  const auto src = [](int64_t i, int64_t n) { return i < n ? i : 2 * (n - 1) - i; };
  const double black = frame.black_level;
  const double range = static_cast<double>(frame.white_level) - black;
  Tensor out(Shape{1, frame.height, frame.width, 1});
  for (int64_t y = 0; y < frame.height; ++y) {
    for (int64_t x = 0; x < frame.width; ++x) {
      const double v = frame.at(src(y + dy, frame.height), src(x + dx, frame.width));
      out(0, y, x, 0) = static_cast<float>(std::clamp((v - black) / range, 0.0, 1.0));
    }
  }
  return out;
}

RenderedImage::RenderedImage(int64_t width, int64_t height, std::vector<uint8_t> rgb)
    : width_(width), height_(height), rgb_(std::move(rgb)) {
  if (width < 1 || height < 1) {
    throw_error(ErrorCode::kInvalidShape, "image dimensions must be >= 1");
  }
  if (static_cast<int64_t>(rgb_.size()) != width * height * 3) {
    throw_error(ErrorCode::kInvalidArgument, "image buffer size does not match dimensions");
  }
}

RenderedImage render_output(const Tensor& net_out) {
  const Shape& s = net_out.shape();
  if (s.batch != 1 || s.channels != 3) {
    throw_error(ErrorCode::kShape, "render expects a (1,H,W,3) tensor, got " + s.str());
  }
  std::vector<uint8_t> rgb(static_cast<size_t>(net_out.size()));
  auto src = net_out.data();
  for (size_t i = 0; i < rgb.size(); ++i) {
    const float v = src[i];
    if (!std::isfinite(v)) {
      throw_error(ErrorCode::kValidation, "network output contains a non-finite value");
    }
    const double unit = std::clamp((static_cast<double>(v) + 1.0) / 2.0, 0.0, 1.0);
    rgb[i] = static_cast<uint8_t>(std::round(unit * 255.0));
  }
  return RenderedImage(s.width, s.height, std::move(rgb));
}

std::vector<uint8_t> encode_ppm(const RenderedImage& image) {
  const std::string header =
      "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.rgb().begin(), image.rgb().end());
  return out;
}

RenderedImage decode_ppm(std::span<const uint8_t> bytes) {
  const PnmHeader h = parse_pnm_header(bytes, "P6");
  if (h.maxval != 255) throw_error(ErrorCode::kFormat, "only 8-bit P6 images are supported");
  const size_t count = static_cast<size_t>(h.width * h.height * 3);
  check_payload(bytes.size() - h.payload_offset, count, "P6");
  std::vector<uint8_t> rgb(bytes.begin() + static_cast<std::ptrdiff_t>(h.payload_offset), bytes.end());
  return RenderedImage(h.width, h.height, std::move(rgb));
}

size_t write_image(const RenderedImage& image, const std::string& path) {
  const std::vector<uint8_t> bytes = encode_ppm(image);
  write_file(path, bytes);
  return bytes.size();
}

RenderedImage read_image(const std::string& path) { return decode_ppm(read_file(path)); }

Tensor image_to_tensor(const RenderedImage& image) {
  Tensor t(Shape{1, image.height(), image.width(), 3});
  auto dst = t.data();
  for (size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<float>(image.rgb()[i]) / 255.0f;
  return t;
}

}  // namespace rawisp

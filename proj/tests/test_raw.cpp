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
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include "rawisp/executor.hpp"
#include "rawisp/graph.hpp"
#include "rawisp/raw.hpp"
#include "rawisp/weights.hpp"
#include "test_util.hpp"

namespace rawisp {
namespace {

using testutil::code_of;

std::vector<uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

// P5 header followed by `samples` big-endian 16-bit values.
std::vector<uint8_t> p5(int w, int h, int samples, int maxval = 65535) {
  std::vector<uint8_t> out = bytes_of("P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n" +
                                      std::to_string(maxval) + "\n");
  for (int i = 0; i < samples; ++i) {
    out.push_back(static_cast<uint8_t>((i * 300) >> 8));
    out.push_back(static_cast<uint8_t>((i * 300) & 0xff));
  }
  return out;
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() /
                    ("rawisp_raw_" + std::to_string(std::random_device{}()))) {
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

TEST(Pgm, DecodesBigEndianSamples) {
  const GrayImage16 img = decode_pgm(p5(4, 4, 16));
  ASSERT_EQ(img.samples.size(), 16u);
  EXPECT_EQ(img.samples[1], 300);
  EXPECT_EQ(img.samples[15], 4500);
  const GrayImage16 back = decode_pgm(encode_pgm16(img));
  EXPECT_EQ(back.samples, img.samples);
}

TEST(Pgm, EightBitMaxval) {
  std::vector<uint8_t> b = bytes_of("P5 2 1 255\n");
  b.push_back(7);
  b.push_back(200);
  const GrayImage16 img = decode_pgm(b);
  EXPECT_EQ(img.samples, (std::vector<uint16_t>{7, 200}));
}

TEST(Pgm, CommentsInHeader) {
  std::vector<uint8_t> b = bytes_of("P5\n# sensor dump\n1 1\n65535\n");
  b.push_back(0x12);
  b.push_back(0x34);
  EXPECT_EQ(decode_pgm(b).samples[0], 0x1234);
}

TEST(Pgm, MalformedInputs) {
  EXPECT_EQ(code_of([] { decode_pgm(p5(4, 4, 8)); }), ErrorCode::kTruncation);
  EXPECT_EQ(code_of([] { decode_pgm(p5(4, 4, 20)); }), ErrorCode::kFormat);
  std::vector<uint8_t> bad = p5(4, 4, 16);
  bad[1] = '6';
  EXPECT_EQ(code_of([&] { decode_pgm(bad); }), ErrorCode::kFormat);
  EXPECT_EQ(code_of([] { decode_pgm(bytes_of("P5\n4")); }), ErrorCode::kFormat);
  EXPECT_EQ(code_of([] { decode_pgm(bytes_of("")); }), ErrorCode::kFormat);
  EXPECT_EQ(code_of([] { decode_pgm(p5(0, 4, 0)); }), ErrorCode::kFormat);
}

TEST(Metadata, ParsesBothSeparatorsAndComments) {
  const SensorMetadata m = parse_metadata("# sidecar\ncfa_pattern = GRBG\nblack_level: 256\n\nwhite_level = 4095 # ten bit\n");
  EXPECT_EQ(m.cfa, CfaPattern::kGRBG);
  EXPECT_EQ(m.black_level, 256u);
  EXPECT_EQ(m.white_level, 4095u);
  const SensorMetadata again = parse_metadata(format_metadata(m));
  EXPECT_EQ(again.cfa, m.cfa);
  EXPECT_EQ(again.white_level, m.white_level);
}

TEST(Metadata, Errors) {
  std::string msg;
  EXPECT_EQ(code_of([] { parse_metadata("cfa_pattern = RGGB\nblack_level = 0\n"); }, &msg),
            ErrorCode::kMetadata);
  EXPECT_NE(msg.find("white_level"), std::string::npos) << msg;
  EXPECT_EQ(code_of([] { parse_metadata("cfa_pattern = RGGB\nblack_level = 900\nwhite_level = 900\n"); }),
            ErrorCode::kMetadata);
  EXPECT_EQ(code_of([] { parse_metadata("cfa_pattern = XYZW\nblack_level = 0\nwhite_level = 9\n"); }),
            ErrorCode::kMetadata);
  EXPECT_EQ(code_of([] { parse_metadata("cfa_pattern = RGGB\nblack_level = -4\nwhite_level = 9\n"); }),
            ErrorCode::kMetadata);
}

TEST(LoadRaw, ParseContractAndFixtures) {
  TempDir dir;
  const auto write = [&](const std::string& name, const std::vector<uint8_t>& b) {
    write_file(dir.file(name), b);
    return dir.file(name);
  };
  const std::string good_meta = write("good.meta", bytes_of("cfa_pattern = RGGB\nblack_level = 256\nwhite_level = 4095\n"));
  const RawFrame f = load_raw(write("good.pgm", p5(4, 4, 16)), good_meta);
  EXPECT_EQ(f.samples.size(), 16u);
  EXPECT_EQ(f.black_level, 256u);
  EXPECT_EQ(f.cfa, CfaPattern::kRGGB);

  std::vector<uint8_t> magic = p5(4, 4, 16);
  magic[0] = 'Q';
  EXPECT_EQ(code_of([&] { load_raw(write("magic.pgm", magic), good_meta); }), ErrorCode::kFormat);
  EXPECT_EQ(code_of([&] { load_raw(write("short.pgm", p5(4, 4, 8)), good_meta); }), ErrorCode::kTruncation);
  EXPECT_EQ(code_of([&] {
              load_raw(dir.file("good.pgm"), write("nokey.meta", bytes_of("cfa_pattern = RGGB\nwhite_level = 4095\n")));
            }),
            ErrorCode::kMetadata);
  EXPECT_EQ(code_of([&] {
              load_raw(dir.file("good.pgm"),
                       write("inv.meta", bytes_of("cfa_pattern = RGGB\nblack_level = 5000\nwhite_level = 4095\n")));
            }),
            ErrorCode::kMetadata);
  EXPECT_EQ(code_of([&] { load_raw(dir.file("absent.pgm"), good_meta); }), ErrorCode::kIo);
}

TEST(LoadRaw, SaveLoadRoundTrip) {
  TempDir dir;
  const RawFrame f = synthesize_raw(32, 24, CfaPattern::kBGGR, 64, 1023, 5);
  save_raw(f, dir.file("f.pgm"), dir.file("f.meta"));
  const RawFrame g = load_raw(dir.file("f.pgm"), dir.file("f.meta"));
  EXPECT_EQ(g.samples, f.samples);
  EXPECT_EQ(g.cfa, f.cfa);
  EXPECT_EQ(g.black_level, f.black_level);
  EXPECT_EQ(g.white_level, f.white_level);
}

TEST(Synthesize, DeterministicAndInRange) {
  const RawFrame a = synthesize_raw(64, 48, CfaPattern::kRGGB, 64, 1023, 3);
  const RawFrame b = synthesize_raw(64, 48, CfaPattern::kRGGB, 64, 1023, 3);
  EXPECT_EQ(a.samples, b.samples);
  for (uint16_t v : a.samples) {
    ASSERT_GE(v, 64);
    ASSERT_LE(v, 1023);
  }
}

TEST(Normalize, EndpointsAndClamp) {
  RawFrame f{2, 2, {256, 4095, 100, 5000}, CfaPattern::kRGGB, 256, 4095};
  const Tensor t = normalize(f);
  ASSERT_EQ(t.shape(), (Shape{1, 2, 2, 1}));
  EXPECT_EQ(t.at(0, 0, 0, 0), 0.0f);
  EXPECT_EQ(t.at(0, 0, 1, 0), 1.0f);
  EXPECT_EQ(t.at(0, 1, 0, 0), 0.0f);
  EXPECT_EQ(t.at(0, 1, 1, 0), 1.0f);
}

TEST(Normalize, MonotoneInSampleValue) {
  std::vector<uint16_t> s(4096);
  for (size_t i = 0; i < s.size(); ++i) s[i] = static_cast<uint16_t>(i * 16);
  RawFrame f{64, 64, s, CfaPattern::kRGGB, 1000, 60000};
  const Tensor t = normalize(f);
  for (size_t i = 1; i < s.size(); ++i) ASSERT_LE(t.data()[i - 1], t.data()[i]);
}

TEST(Normalize, CfaPhaseBecomesRggb) {
  // Each site holds its colour code; after normalization (0,0) must be red,
  // (0,1) and (1,0) green, (1,1) blue, at every 2x2 cell.
  constexpr uint16_t kR = 3000, kG = 2000, kB = 1000;
  for (CfaPattern p : {CfaPattern::kRGGB, CfaPattern::kGRBG, CfaPattern::kGBRG, CfaPattern::kBGGR}) {
    const std::string name(cfa_name(p));
    const int64_t w = 8, h = 6;
    RawFrame f{w, h, std::vector<uint16_t>(static_cast<size_t>(w * h)), p, 0, 4000};
    for (int64_t y = 0; y < h; ++y)
      for (int64_t x = 0; x < w; ++x) {
        const char c = name[static_cast<size_t>((y % 2) * 2 + (x % 2))];
        f.samples[static_cast<size_t>(y * w + x)] = c == 'R' ? kR : c == 'G' ? kG : kB;
      }
    const Tensor t = normalize(f);
    ASSERT_EQ(t.shape(), (Shape{1, h, w, 1}));
    for (int64_t y = 0; y < h; ++y)
      for (int64_t x = 0; x < w; ++x) {
        const int site = static_cast<int>((y % 2) * 2 + (x % 2));
        const uint16_t want = site == 0 ? kR : site == 3 ? kB : kG;
        ASSERT_FLOAT_EQ(t.at(0, y, x, 0), want / 4000.0f) << name << " at " << y << "," << x;
      }
  }
}

TEST(Render, MappingRule) {
  Tensor t(Shape{1, 1, 4, 3});
  const float vals[4] = {0.0f, 0.99999994f, -0.99999994f, 0.5f};
  for (int64_t x = 0; x < 4; ++x)
    for (int64_t c = 0; c < 3; ++c) t.set(0, 0, x, c, vals[x]);
  const RenderedImage img = render_output(t);
  EXPECT_EQ(img.at(0, 0, 0), 128);
  EXPECT_EQ(img.at(0, 1, 1), 255);
  EXPECT_EQ(img.at(0, 2, 2), 0);
  EXPECT_EQ(img.at(0, 3, 0), 191);  // 0.75 * 255 = 191.25
}

TEST(Render, ConstantOutputGivesUniformImage) {
  const RenderedImage img = render_output(Tensor::filled({1, 5, 7, 3}, -0.2f));
  for (uint8_t v : img.rgb()) ASSERT_EQ(v, 102);  // 0.4 * 255 = 102
}

TEST(Render, Errors) {
  Tensor t = Tensor::filled({1, 2, 2, 3}, 0.0f);
  t.set(0, 1, 1, 2, std::numeric_limits<float>::quiet_NaN());
  EXPECT_EQ(code_of([&] { render_output(t); }), ErrorCode::kValidation);
  EXPECT_EQ(code_of([] { render_output(Tensor::filled({1, 2, 2, 4}, 0.0f)); }), ErrorCode::kShape);
  EXPECT_EQ(code_of([] { RenderedImage(0, 0, {}); }), ErrorCode::kInvalidShape);
}

TEST(Ppm, WhitePixelBytes) {
  const RenderedImage img(1, 1, {255, 255, 255});
  const std::vector<uint8_t> b = encode_ppm(img);
  const std::string header = "P6\n1 1\n255\n";
  ASSERT_EQ(b.size(), header.size() + 3);
  EXPECT_EQ(std::string(b.begin(), b.begin() + static_cast<long>(header.size())), header);
  EXPECT_EQ(b[header.size()], 255);
  EXPECT_EQ(b[header.size() + 2], 255);
}

TEST(Ppm, RoundTrip) {
  std::mt19937_64 rng(8);
  std::vector<uint8_t> rgb(13 * 9 * 3);
  for (auto& v : rgb) v = static_cast<uint8_t>(rng());
  const RenderedImage img(13, 9, rgb);
  EXPECT_EQ(decode_ppm(encode_ppm(img)), img);
  TempDir dir;
  write_image(img, dir.file("x.ppm"));
  EXPECT_EQ(read_image(dir.file("x.ppm")), img);
  EXPECT_EQ(code_of([&] { write_image(img, dir.file("missing/dir/x.ppm")); }), ErrorCode::kIo);
}

TEST(Pipeline, AlignedFrameKeepsDimensions) {
  ModelConfig c;
  c.base_width = 8;
  const Graph g = build_model(c);
  const WeightStore ws = random_init(g, 1);
  for (CfaPattern p : {CfaPattern::kRGGB, CfaPattern::kGBRG}) {
    const RawFrame f = synthesize_raw(48, 32, p, 64, 1023, 2);
    const RenderedImage img = render_output(run_inference(g, ws, normalize(f)));
    EXPECT_EQ(img.width(), 48);
    EXPECT_EQ(img.height(), 32);
  }
}

}  // namespace
}  // namespace rawisp

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
#include "rawisp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "rawisp/executor.hpp"
#include "rawisp/graph.hpp"
#include "rawisp/kernels.hpp"
#include "rawisp/weights.hpp"

namespace rawisp {
namespace {

using Rng = std::mt19937_64;

uint64_t mix(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Tensor random_tensor(Rng& rng, const Shape& s, float lo = -1.0f, float hi = 1.0f) {
  std::uniform_real_distribution<float> dist(lo, hi);
  Tensor t(s);
  for (float& v : t.data()) v = dist(rng);
  return t;
}

std::vector<float> random_vector(Rng& rng, int64_t n, float lo = -1.0f, float hi = 1.0f) {
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> v(static_cast<size_t>(n));
  for (float& x : v) x = dist(rng);
  return v;
}

struct Comparison {
  double max_abs = 0.0;
  double worst_ratio = 0.0;
};

Comparison compare(const Tensor& ref, const Tensor& opt, double abs_tol, double rel_tol) {
  Comparison c;
  if (ref.shape() != opt.shape()) {
    c.max_abs = c.worst_ratio = std::numeric_limits<double>::infinity();
    return c;
  }
  auto r = ref.data();
  auto o = opt.data();
  for (size_t i = 0; i < r.size(); ++i) {
    const double d = std::abs(static_cast<double>(o[i]) - static_cast<double>(r[i]));
    const double ratio = std::isfinite(d) ? d / (abs_tol + rel_tol * std::abs(static_cast<double>(r[i])))
                                          : std::numeric_limits<double>::infinity();
    c.max_abs = std::max(c.max_abs, std::isfinite(d) ? d : std::numeric_limits<double>::infinity());
    c.worst_ratio = std::max(c.worst_ratio, ratio);
  }
  return c;
}

void corrupt(Tensor& t) { t.data()[0] += 0.01f; }

struct KernelCase {
  Tensor ref;
  Tensor opt;
};

using CaseFn = std::function<KernelCase(Rng&, int threads)>;

Shape random_shape(Rng& rng, int max_spatial = 12, int max_channels = 16) {
  return Shape{uniform_int(rng, 1, 2), uniform_int(rng, 1, max_spatial),
               uniform_int(rng, 1, max_spatial), uniform_int(rng, 1, max_channels)};
}

KernelCase conv_case(Rng& rng, int threads) {
  ConvParams p;
  const int k = std::array<int, 3>{1, 3, 5}[static_cast<size_t>(uniform_int(rng, 0, 2))];
  p.kernel_height = p.kernel_width = k;
  p.stride = uniform_int(rng, 1, 3);
  p.groups = uniform_int(rng, 1, 4);
  const int icg = uniform_int(rng, 1, 6);
  const int ocg = uniform_int(rng, 1, 6);
  const int lead = uniform_int(rng, 0, 2);
  const int trail = uniform_int(rng, 0, 2);
  p.channel_offset = lead;
  p.channel_count = p.groups * icg;
  Shape s{uniform_int(rng, 1, 2), uniform_int(rng, 1, 12), uniform_int(rng, 1, 12),
          lead + p.channel_count + trail};
  p.padding = Padding::kSameZero;
  if (s.height >= k && s.width >= k && uniform_int(rng, 0, 3) == 0) p.padding = Padding::kValid;
  const Tensor input = random_tensor(rng, s);
  const float bound = std::sqrt(3.0f / static_cast<float>(k * k * icg));
  const Tensor w = random_tensor(rng, Shape{p.groups * ocg, k, k, icg}, -bound, bound);
  const std::vector<float> bias = random_vector(rng, p.groups * ocg);
  return {kernels::conv2d(input, w, bias, p, {KernelPath::kReference, 1}),
          kernels::conv2d(input, w, bias, p, {KernelPath::kOptimized, threads})};
}

KernelCase depthwise_case(Rng& rng, int threads) {
  const Shape s = random_shape(rng);
  const int k = std::array<int, 3>{1, 3, 5}[static_cast<size_t>(uniform_int(rng, 0, 2))];
  const int stride = uniform_int(rng, 1, 3);
  const Tensor input = random_tensor(rng, s);
  const float bound = std::sqrt(3.0f / static_cast<float>(k * k));
  const Tensor w = random_tensor(rng, Shape{s.channels, k, k, 1}, -bound, bound);
  const std::vector<float> bias = random_vector(rng, s.channels);
  return {kernels::depthwise_conv2d(input, w, bias, stride, {KernelPath::kReference, 1}),
          kernels::depthwise_conv2d(input, w, bias, stride, {KernelPath::kOptimized, threads})};
}

std::vector<std::pair<std::string, CaseFn>> kernel_suite() {
  const ExecPolicy ref{KernelPath::kReference, 1};
  const auto opt = [](int threads) { return ExecPolicy{KernelPath::kOptimized, threads}; };
  std::vector<std::pair<std::string, CaseFn>> suite;
  suite.emplace_back("conv2d", conv_case);
  suite.emplace_back("depthwise_conv2d", depthwise_case);
  suite.emplace_back("prelu", [=](Rng& rng, int t) {
    const Tensor x = random_tensor(rng, random_shape(rng));
    const auto slopes = random_vector(rng, x.channels(), 0.0f, 1.0f);
    return KernelCase{kernels::prelu(x, slopes, ref), kernels::prelu(x, slopes, opt(t))};
  });
  suite.emplace_back("tanh", [=](Rng& rng, int t) {
    const Tensor x = random_tensor(rng, random_shape(rng), -25.0f, 25.0f);
    return KernelCase{kernels::activation(ActivationKind::kTanh, x, ref),
                      kernels::activation(ActivationKind::kTanh, x, opt(t))};
  });
  suite.emplace_back("sigmoid", [=](Rng& rng, int t) {
    const Tensor x = random_tensor(rng, random_shape(rng), -25.0f, 25.0f);
    return KernelCase{kernels::activation(ActivationKind::kSigmoid, x, ref),
                      kernels::activation(ActivationKind::kSigmoid, x, opt(t))};
  });
  suite.emplace_back("instance_norm", [=](Rng& rng, int t) {
    const Tensor x = random_tensor(rng, random_shape(rng), -2.0f, 3.0f);
    const auto gamma = random_vector(rng, x.channels(), 0.5f, 1.5f);
    const auto beta = random_vector(rng, x.channels());
    const NormParams p{1e-5f, gamma, beta};
    return KernelCase{kernels::instance_norm(x, p, ref), kernels::instance_norm(x, p, opt(t))};
  });
  suite.emplace_back("bilinear_upsample_x2", [=](Rng& rng, int t) {
    const Tensor x = random_tensor(rng, random_shape(rng));
    return KernelCase{kernels::bilinear_upsample_x2(x, ref), kernels::bilinear_upsample_x2(x, opt(t))};
  });
  suite.emplace_back("space_to_depth", [=](Rng& rng, int t) {
    Shape s = random_shape(rng, 6, 8);
    s.height *= 2;
    s.width *= 2;
    const Tensor x = random_tensor(rng, s);
    return KernelCase{kernels::space_to_depth(x, 2, ref), kernels::space_to_depth(x, 2, opt(t))};
  });
  suite.emplace_back("depth_to_space", [=](Rng& rng, int t) {
    Shape s = random_shape(rng, 8, 4);
    s.channels *= 4;
    const Tensor x = random_tensor(rng, s);
    return KernelCase{kernels::depth_to_space(x, 2, ref), kernels::depth_to_space(x, 2, opt(t))};
  });
  suite.emplace_back("max_pool_2x2", [=](Rng& rng, int t) {
    Shape s = random_shape(rng, 6);
    s.height *= 2;
    s.width *= 2;
    const Tensor x = random_tensor(rng, s);
    return KernelCase{kernels::max_pool_2x2(x, ref), kernels::max_pool_2x2(x, opt(t))};
  });
  suite.emplace_back("global_avg_pool", [=](Rng& rng, int t) {
    const Tensor x = random_tensor(rng, random_shape(rng));
    return KernelCase{kernels::global_avg_pool(x, ref), kernels::global_avg_pool(x, opt(t))};
  });
  suite.emplace_back("concat_channels", [=](Rng& rng, int t) {
    const Shape base = random_shape(rng);
    std::vector<Tensor> parts;
    const int n = uniform_int(rng, 1, 3);
    for (int i = 0; i < n; ++i) {
      Shape s = base;
      s.channels = uniform_int(rng, 1, 8);
      parts.push_back(random_tensor(rng, s));
    }
    std::vector<const Tensor*> ptrs;
    for (const Tensor& p : parts) ptrs.push_back(&p);
    return KernelCase{kernels::concat_channels(ptrs, ref), kernels::concat_channels(ptrs, opt(t))};
  });
  for (const auto kind : {ElementwiseKind::kAdd, ElementwiseKind::kMul}) {
    suite.emplace_back(kind == ElementwiseKind::kAdd ? "add" : "mul", [=](Rng& rng, int t) {
      const Shape s = random_shape(rng);
      Shape bs = s;
      switch (uniform_int(rng, 0, 3)) {
        case 1: bs = Shape{1, 1, 1, s.channels}; break;
        case 2: bs = Shape{1, s.height, s.width, 1}; break;
        case 3: bs = Shape{s.batch, 1, 1, s.channels}; break;
        default: break;
      }
      const Tensor a = random_tensor(rng, s);
      const Tensor b = random_tensor(rng, bs);
      return KernelCase{kernels::elementwise(kind, a, b, ref), kernels::elementwise(kind, a, b, opt(t))};
    });
  }
  return suite;
}

}  // namespace

bool VerifyReport::ok() const {
  return std::all_of(ops.begin(), ops.end(), [](const OpDeviation& d) { return d.ok; });
}

std::string VerifyReport::str() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-22s %6s %14s %12s %22s %s\n", "op", "cases", "max_abs",
                "worst_ratio", "worst_seed", "status");
  os << line;
  for (const OpDeviation& d : ops) {
    std::snprintf(line, sizeof(line), "%-22s %6d %14.6e %12.6f %22llu %s\n", d.op.c_str(), d.cases,
                  d.max_abs, d.worst_ratio, static_cast<unsigned long long>(d.worst_case_seed),
                  d.ok ? "ok" : "FAIL");
    os << line;
  }
  return os.str();
}

VerifyReport verify_kernels(uint64_t seed, int cases_per_op, std::string_view fault_op) {
  VerifyReport report;
  const auto suite = kernel_suite();
  for (size_t op = 0; op < suite.size(); ++op) {
    const auto& [name, fn] = suite[op];
    OpDeviation dev;
    dev.op = name;
    for (int i = 0; i < cases_per_op; ++i) {
      const uint64_t case_seed = mix(seed ^ mix(op * 1000003ull + static_cast<uint64_t>(i)));
      Rng rng(case_seed);
      // Alternate worker counts so partitioning is exercised as well.
      KernelCase c = fn(rng, 1 + i % 4);
      if (name == fault_op) corrupt(c.opt);
      const Comparison cmp = compare(c.ref, c.opt, kKernelAbsTol, kKernelRelTol);
      ++dev.cases;
      dev.max_abs = std::max(dev.max_abs, cmp.max_abs);
      if (cmp.worst_ratio > dev.worst_ratio || i == 0) {
        dev.worst_ratio = std::max(dev.worst_ratio, cmp.worst_ratio);
        dev.worst_case_seed = case_seed;
      }
    }
    dev.ok = dev.worst_ratio <= 1.0;
    report.ops.push_back(dev);
  }
  return report;
}

VerifyReport verify_graph(uint64_t seed, int seeds, std::string_view fault_op, int64_t size) {
  VerifyReport report;
  for (const Variant v : {Variant::kBase, Variant::kNoNorm, Variant::kSlim, Variant::kSlimPlus}) {
    const Graph g = build_model(ModelConfig::for_variant(v));
    OpDeviation dev;
    dev.op = "network/" + std::string(variant_name(v));
    for (int i = 0; i < seeds; ++i) {
      const uint64_t case_seed = mix(seed + static_cast<uint64_t>(i));
      const WeightStore w = random_init(g, case_seed);
      Rng rng(case_seed);
      const Tensor input = random_tensor(rng, Shape{1, size, size, 1}, 0.0f, 1.0f);
      const Tensor ref = run_inference(g, w, input, {KernelPath::kReference, 1});
      Tensor opt = run_inference(g, w, input, {KernelPath::kOptimized, 1 + i % 2});
      if (fault_op == "network") corrupt(opt);
      const Comparison cmp = compare(ref, opt, kNetworkTol, 0.0);
      ++dev.cases;
      if (cmp.max_abs > dev.max_abs || i == 0) {
        dev.max_abs = std::max(dev.max_abs, cmp.max_abs);
        dev.worst_case_seed = case_seed;
      }
    }
    dev.worst_ratio = dev.max_abs / kNetworkTol;
    dev.ok = dev.max_abs < kNetworkTol;
    report.ops.push_back(dev);
  }
  return report;
}

}  // namespace rawisp

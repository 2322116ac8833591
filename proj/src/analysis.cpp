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
#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "rawisp/graph.hpp"

namespace rawisp {
namespace {

int64_t node_params(const Node& n) {
  int64_t total = 0;
  for (const ParamSlot& s : n.params) total += s.elements();
  return total;
}

int64_t node_macs(const Node& n, const std::vector<Shape>& shapes) {
  const Shape& out = shapes[static_cast<size_t>(n.id)];
  const int64_t taps = static_cast<int64_t>(n.conv.kernel_height) * n.conv.kernel_width;
  if (n.kind == NodeKind::kConv2d) {
    const int64_t in_per_group = n.params.front().dims.back();
    return out.elements() * taps * in_per_group;
  }
  if (n.kind == NodeKind::kDepthwiseConv2d) return out.elements() * taps;
  return 0;
}

constexpr std::array<NodeKind, 14> kAllowlist = {
    NodeKind::kConv2d,        NodeKind::kDepthwiseConv2d, NodeKind::kPRelu,
    NodeKind::kTanh,          NodeKind::kSigmoid,         NodeKind::kInstanceNorm,
    NodeKind::kGlobalAvgPool, NodeKind::kMaxPool,         NodeKind::kResizeBilinear,
    NodeKind::kSpaceToDepth,  NodeKind::kDepthToSpace,    NodeKind::kConcat,
    NodeKind::kAdd,           NodeKind::kMul,
};

}  // namespace

int64_t count_params(const Graph& g) {
  int64_t total = 0;
  for (const Node& n : g.nodes()) total += node_params(n);
  return total;
}

int64_t count_macs(const Graph& g, int64_t height, int64_t width) {
  const std::vector<Shape> shapes = g.infer_shapes(height, width);
  int64_t total = 0;
  for (const Node& n : g.nodes()) total += node_macs(n, shapes);
  return total;
}

MemoryEstimate estimate_peak_memory(const Graph& g, int64_t height, int64_t width) {
  const std::vector<Shape> shapes = g.infer_shapes(height, width);
  const auto& nodes = g.nodes();
  std::vector<int> remaining(nodes.size(), 0);
  for (const Node& n : nodes)
    for (int in : n.inputs) ++remaining[static_cast<size_t>(in)];
  remaining[static_cast<size_t>(g.output_id())] += 1;  // the result outlives execution

  const auto bytes = [&](int id) {
    return shapes[static_cast<size_t>(id)].elements() * static_cast<int64_t>(sizeof(float));
  };
  int64_t live = 0;
  int64_t peak = 0;
  for (const Node& n : nodes) {
    live += bytes(n.id);
    peak = std::max(peak, live);
    for (int in : n.inputs) {
      if (--remaining[static_cast<size_t>(in)] == 0) live -= bytes(in);
    }
    if (remaining[static_cast<size_t>(n.id)] == 0) live -= bytes(n.id);
  }
  return MemoryEstimate{peak, count_params(g) * static_cast<int64_t>(sizeof(float))};
}

std::vector<std::string> lint_opset(const Graph& g) {
  std::vector<std::string> violations;
  for (const Node& n : g.nodes()) {
    if (n.kind == NodeKind::kInput) continue;
    if (std::find(kAllowlist.begin(), kAllowlist.end(), n.kind) != kAllowlist.end()) continue;
    violations.push_back(n.kind == NodeKind::kCustom && !n.custom_op.empty()
                             ? n.custom_op
                             : std::string(node_kind_name(n.kind)));
  }
  return violations;
}

GraphReport analyze(const Graph& g, int64_t height, int64_t width) {
  GraphReport r;
  r.parameter_count = count_params(g);
  r.mac_count = count_macs(g, height, width);
  const MemoryEstimate mem = estimate_peak_memory(g, height, width);
  r.peak_activation_bytes = mem.peak_activation_bytes;
  r.weight_bytes = mem.weight_bytes;
  r.opset_violations = lint_opset(g);
  return r;
}

std::string format_summary(const Graph& g, int64_t height, int64_t width) {
  const std::vector<Shape> shapes = g.infer_shapes(height, width);
  const GraphReport r = analyze(g, height, width);
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-4s %-17s %-30s %-22s %10s %14s\n", "id", "kind", "name",
                "shape", "params", "macs");
  os << line;
  for (const Node& n : g.nodes()) {
    std::snprintf(line, sizeof(line), "%-4d %-17s %-30s %-22s %10lld %14lld\n", n.id,
                  std::string(node_kind_name(n.kind)).c_str(), n.name.c_str(),
                  shapes[static_cast<size_t>(n.id)].str().c_str(),
                  static_cast<long long>(node_params(n)),
                  static_cast<long long>(node_macs(n, shapes)));
    os << line;
  }
  os << "variant: " << g.label() << "\n";
  os << "input: " << width << "x" << height << " (alignment " << g.alignment() << ")\n";
  os << "nodes: " << g.nodes().size() << "\n";
  os << "parameters: " << r.parameter_count << " (" << r.weight_bytes << " bytes fp32)\n";
  os << "macs: " << r.mac_count << "\n";
  os << "peak activation bytes: " << r.peak_activation_bytes << "\n";
  os << "opset violations: ";
  if (r.opset_violations.empty()) {
    os << "none";
  } else {
    for (size_t i = 0; i < r.opset_violations.size(); ++i) {
      os << (i ? ", " : "") << r.opset_violations[i];
    }
  }
  os << "\n";
  return os.str();
}

}  // namespace rawisp

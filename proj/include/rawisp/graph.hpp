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
#ifndef RAWISP_GRAPH_HPP_
#define RAWISP_GRAPH_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rawisp/kernels.hpp"
#include "rawisp/tensor.hpp"

namespace rawisp {

enum class Variant { kBase, kNoNorm, kSlim, kSlimPlus };

/// "base", "nonorm", "slim", "slim+".
std::string_view variant_name(Variant v);
/// Accepts the names above plus "slim_plus". Throws kConfig otherwise.
Variant parse_variant(std::string_view name);

enum class Downsample { kMaxPool, kStridedConv };
enum class Attention { kNone, kChannel, kSpatial };

/// Finest-scale channel count selected by the size calibration (see README):
/// the width whose FP32 parameter payload is nearest 3.6 MB.
inline constexpr int kDefaultBaseWidth = 32;

/// Structural constants of the three-scale network. Per-scale arrays are
/// ordered coarse -> fine.
struct ModelConfig {
  int base_width = kDefaultBaseWidth;
  std::array<int, 3> blocks_per_scale{4, 2, 2};
  std::array<int, 3> groups_per_scale{4, 2, 2};
  std::array<Attention, 3> attention{Attention::kChannel, Attention::kChannel, Attention::kSpatial};
  Variant variant = Variant::kBase;
  Downsample downsample = Downsample::kMaxPool;
  float instance_norm_epsilon = 1e-5f;

  static ModelConfig for_variant(Variant v);

  /// Throws kConfig on any violated invariant.
  void validate() const;
  /// Trunk width at `scale` (0 = finest, 2 = coarsest), including the slim
  /// doubling.
  int scale_width(int scale) const;
  /// Input height/width must be a multiple of this (8, or 16 for slim variants).
  int alignment() const;
  bool slim() const { return variant == Variant::kSlim || variant == Variant::kSlimPlus; }
  bool with_norm() const { return variant != Variant::kNoNorm; }
};

enum class NodeKind {
  kInput,
  kConv2d,
  kDepthwiseConv2d,
  kPRelu,
  kTanh,
  kSigmoid,
  kInstanceNorm,
  kGlobalAvgPool,
  kMaxPool,
  kResizeBilinear,
  kSpaceToDepth,
  kDepthToSpace,
  kConcat,
  kAdd,
  kMul,
  /// Placeholder for ops the executor does not implement; exists so foreign
  /// graphs can be described and linted.
  kCustom,
};

/// Op-set name of a node kind, e.g. "conv2d", "resize_bilinear".
std::string_view node_kind_name(NodeKind kind);

struct ParamSlot {
  std::string name;
  std::vector<int64_t> dims;

  int64_t elements() const;
};

struct Node {
  int id = -1;
  NodeKind kind = NodeKind::kInput;
  std::string name;
  std::vector<int> inputs;
  int channels = 0;  // output channels, static
  ConvParams conv;   // conv2d; depthwise uses kernel size and stride only
  float epsilon = 1e-5f;
  int block = 2;     // space_to_depth / depth_to_space
  std::string custom_op;
  std::vector<ParamSlot> params;
};

/// Topologically ordered operator list. Nodes may only consume earlier nodes,
/// so insertion order is an execution order.
class Graph {
 public:
  Graph() = default;
  Graph(int alignment, std::string label);

  int add_input(std::string name, int channels);
  /// Appends `node`, assigning its id. Throws kConfig if an input id does not
  /// precede it or a parameter slot name is already taken.
  int add(Node node);
  void set_output(int id);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int id) const { return nodes_.at(static_cast<size_t>(id)); }
  int input_id() const { return input_; }
  int output_id() const { return output_; }
  int alignment() const { return alignment_; }
  const std::string& label() const { return label_; }

  std::vector<ParamSlot> param_slots() const;

  /// Throws kAlignment when height/width are not multiples of alignment().
  void check_input_dims(int64_t height, int64_t width) const;
  /// Static output shape of every node for a (batch, height, width, 1) input.
  std::vector<Shape> infer_shapes(int64_t height, int64_t width, int64_t batch = 1) const;

 private:
  std::vector<Node> nodes_;
  int input_ = -1;
  int output_ = -1;
  int alignment_ = 1;
  std::string label_;
};

Graph build_model(const ModelConfig& config);

// Sub-graph builders. Each appends nodes under `prefix` and returns the id of
// the block output.
int add_grouped_residual_block(Graph& g, const std::string& prefix, int input, int width,
                               int groups, bool with_norm, float epsilon);
int add_cam_block(Graph& g, const std::string& prefix, int input, int width);
int add_sam_block(Graph& g, const std::string& prefix, int input, int width);

// --- analysis ---

int64_t count_params(const Graph& g);
int64_t count_macs(const Graph& g, int64_t height, int64_t width);

struct MemoryEstimate {
  int64_t peak_activation_bytes = 0;
  int64_t weight_bytes = 0;
};

/// Simulates execution in node order with reference-counted buffers: a node's
/// output is allocated while its inputs are still live, and inputs are freed
/// after their last consumer ran. The graph input counts as an activation.
MemoryEstimate estimate_peak_memory(const Graph& g, int64_t height, int64_t width);

/// Node kinds outside the mobile op allowlist, one entry per offending node.
std::vector<std::string> lint_opset(const Graph& g);

struct GraphReport {
  int64_t parameter_count = 0;
  int64_t mac_count = 0;
  int64_t peak_activation_bytes = 0;
  int64_t weight_bytes = 0;
  std::vector<std::string> opset_violations;
};

GraphReport analyze(const Graph& g, int64_t height, int64_t width);

/// Plain-text node table (id, kind, name, shape, params, MACs) plus totals.
std::string format_summary(const Graph& g, int64_t height, int64_t width);

}  // namespace rawisp

#endif  // RAWISP_GRAPH_HPP_

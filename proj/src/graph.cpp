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
#include <set>
#include <sstream>

#include "rawisp/error.hpp"
#include "rawisp/graph.hpp"

namespace rawisp {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kBase: return "base";
    case Variant::kNoNorm: return "nonorm";
    case Variant::kSlim: return "slim";
    case Variant::kSlimPlus: return "slim+";
  }
  return "base";
}

Variant parse_variant(std::string_view name) {
  if (name == "base") return Variant::kBase;
  if (name == "nonorm") return Variant::kNoNorm;
  if (name == "slim") return Variant::kSlim;
  if (name == "slim+" || name == "slim_plus") return Variant::kSlimPlus;
  throw_error(ErrorCode::kConfig, "unknown variant '" + std::string(name) +
                                      "' (expected base, nonorm, slim or slim+)");
}

std::string_view node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::kInput: return "input";
    case NodeKind::kConv2d: return "conv2d";
    case NodeKind::kDepthwiseConv2d: return "depthwise_conv2d";
    case NodeKind::kPRelu: return "prelu";
    case NodeKind::kTanh: return "tanh";
    case NodeKind::kSigmoid: return "sigmoid";
    case NodeKind::kInstanceNorm: return "instance_norm";
    case NodeKind::kGlobalAvgPool: return "avg_pool";
    case NodeKind::kMaxPool: return "max_pool";
    case NodeKind::kResizeBilinear: return "resize_bilinear";
    case NodeKind::kSpaceToDepth: return "space_to_depth";
    case NodeKind::kDepthToSpace: return "depth_to_space";
    case NodeKind::kConcat: return "concat";
    case NodeKind::kAdd: return "add";
    case NodeKind::kMul: return "mul";
    case NodeKind::kCustom: return "custom";
  }
  return "custom";
}

int64_t ParamSlot::elements() const {
  int64_t n = 1;
  for (int64_t d : dims) n *= d;
  return n;
}

// --- ModelConfig ---

ModelConfig ModelConfig::for_variant(Variant v) {
  ModelConfig c;
  c.variant = v;
  return c;
}

void ModelConfig::validate() const {
  if (base_width < 1) throw_error(ErrorCode::kConfig, "base_width must be >= 1");
  if (!(instance_norm_epsilon > 0.0f)) {
    throw_error(ErrorCode::kConfig, "instance_norm_epsilon must be > 0");
  }
  for (int i = 0; i < 3; ++i) {
    const int scale = 2 - i;
    if (blocks_per_scale[i] < 0) {
      throw_error(ErrorCode::kConfig, "blocks_per_scale entries must be >= 0");
    }
    const int groups = groups_per_scale[i];
    if (groups < 2 || groups > 4) {
      throw_error(ErrorCode::kConfig, "groups_per_scale entries must be in {2,3,4}, got " +
                                          std::to_string(groups));
    }
    if (scale_width(scale) % groups != 0) {
      throw_error(ErrorCode::kConfig, "scale width " + std::to_string(scale_width(scale)) +
                                          " not divisible by " + std::to_string(groups) +
                                          " groups");
    }
  }
}

int ModelConfig::scale_width(int scale) const {
  return base_width * (1 << scale) * (slim() ? 2 : 1);
}

int ModelConfig::alignment() const { return slim() ? 16 : 8; }

// --- Graph ---

Graph::Graph(int alignment, std::string label) : alignment_(alignment), label_(std::move(label)) {}

int Graph::add_input(std::string name, int channels) {
  Node n;
  n.kind = NodeKind::kInput;
  n.name = std::move(name);
  n.channels = channels;
  input_ = add(std::move(n));
  return input_;
}

int Graph::add(Node node) {
  node.id = static_cast<int>(nodes_.size());
  for (int in : node.inputs) {
    if (in < 0 || in >= node.id) {
      throw_error(ErrorCode::kConfig, "node '" + node.name + "' consumes node " +
                                          std::to_string(in) + " which does not precede it");
    }
  }
  for (const ParamSlot& slot : node.params) {
    for (const Node& other : nodes_) {
      for (const ParamSlot& taken : other.params) {
        if (taken.name == slot.name) {
          throw_error(ErrorCode::kConfig, "duplicate parameter slot '" + slot.name + "'");
        }
      }
    }
  }
  nodes_.push_back(std::move(node));
  output_ = nodes_.back().id;
  return nodes_.back().id;
}

void Graph::set_output(int id) {
  if (id < 0 || id >= static_cast<int>(nodes_.size())) {
    throw_error(ErrorCode::kConfig, "output id out of range");
  }
  output_ = id;
}

std::vector<ParamSlot> Graph::param_slots() const {
  std::vector<ParamSlot> out;
  for (const Node& n : nodes_) out.insert(out.end(), n.params.begin(), n.params.end());
  return out;
}

void Graph::check_input_dims(int64_t height, int64_t width) const {
  if (height < 1 || width < 1 || height % alignment_ != 0 || width % alignment_ != 0) {
    std::ostringstream os;
    os << "input " << width << "x" << height << " not aligned: variant " << label_
       << " requires multiple of " << alignment_ << " in both dimensions";
    throw_error(ErrorCode::kAlignment, os.str());
  }
}

std::vector<Shape> Graph::infer_shapes(int64_t height, int64_t width, int64_t batch) const {
  check_input_dims(height, width);
  std::vector<Shape> shapes(nodes_.size());
  for (const Node& n : nodes_) {
    const auto in = [&](size_t i) { return shapes[static_cast<size_t>(n.inputs.at(i))]; };
    Shape s;
    switch (n.kind) {
      case NodeKind::kInput:
        s = Shape{batch, height, width, n.channels};
        break;
      case NodeKind::kConv2d: {
        const Shape x = in(0);
        s = Shape{x.batch,
                  conv_output_extent(x.height, n.conv.kernel_height, n.conv.stride, n.conv.padding),
                  conv_output_extent(x.width, n.conv.kernel_width, n.conv.stride, n.conv.padding),
                  n.channels};
        break;
      }
      case NodeKind::kDepthwiseConv2d: {
        const Shape x = in(0);
        s = Shape{x.batch, conv_output_extent(x.height, 0, n.conv.stride, Padding::kSameZero),
                  conv_output_extent(x.width, 0, n.conv.stride, Padding::kSameZero), x.channels};
        break;
      }
      case NodeKind::kPRelu:
      case NodeKind::kTanh:
      case NodeKind::kSigmoid:
      case NodeKind::kInstanceNorm:
      case NodeKind::kCustom:
        s = in(0);
        break;
      case NodeKind::kGlobalAvgPool: {
        const Shape x = in(0);
        s = Shape{x.batch, 1, 1, x.channels};
        break;
      }
      case NodeKind::kMaxPool:
        s = kernels::check_max_pool_2x2(in(0));
        break;
      case NodeKind::kResizeBilinear: {
        const Shape x = in(0);
        s = Shape{x.batch, x.height * 2, x.width * 2, x.channels};
        break;
      }
      case NodeKind::kSpaceToDepth:
        s = kernels::check_space_to_depth(in(0), n.block);
        break;
      case NodeKind::kDepthToSpace:
        s = kernels::check_depth_to_space(in(0), n.block);
        break;
      case NodeKind::kConcat: {
        std::vector<Shape> parts;
        for (size_t i = 0; i < n.inputs.size(); ++i) parts.push_back(in(i));
        s = kernels::check_concat_channels(parts);
        break;
      }
      case NodeKind::kAdd:
      case NodeKind::kMul:
        s = kernels::check_elementwise(in(0), in(1));
        break;
    }
    shapes[static_cast<size_t>(n.id)] = s;
  }
  return shapes;
}

// --- builders ---

namespace {

int add_conv(Graph& g, const std::string& name, int input, int in_channels, int out_channels,
             int kernel, int stride = 1, int channel_offset = 0, int channel_count = 0) {
  Node n;
  n.kind = NodeKind::kConv2d;
  n.name = name;
  n.inputs = {input};
  n.channels = out_channels;
  n.conv.kernel_height = kernel;
  n.conv.kernel_width = kernel;
  n.conv.stride = stride;
  n.conv.channel_offset = channel_offset;
  n.conv.channel_count = channel_count;
  const int reads = channel_count == 0 ? in_channels - channel_offset : channel_count;
  n.params = {{name + ".weight", {out_channels, kernel, kernel, reads}},
              {name + ".bias", {out_channels}}};
  return g.add(std::move(n));
}

int add_depthwise(Graph& g, const std::string& name, int input, int channels, int kernel) {
  Node n;
  n.kind = NodeKind::kDepthwiseConv2d;
  n.name = name;
  n.inputs = {input};
  n.channels = channels;
  n.conv.kernel_height = kernel;
  n.conv.kernel_width = kernel;
  n.params = {{name + ".weight", {channels, kernel, kernel}}, {name + ".bias", {channels}}};
  return g.add(std::move(n));
}

int add_prelu(Graph& g, const std::string& name, int input, int channels) {
  Node n;
  n.kind = NodeKind::kPRelu;
  n.name = name;
  n.inputs = {input};
  n.channels = channels;
  n.params = {{name + ".slope", {channels}}};
  return g.add(std::move(n));
}

int add_norm(Graph& g, const std::string& name, int input, int channels, float epsilon) {
  Node n;
  n.kind = NodeKind::kInstanceNorm;
  n.name = name;
  n.inputs = {input};
  n.channels = channels;
  n.epsilon = epsilon;
  n.params = {{name + ".gamma", {channels}}, {name + ".beta", {channels}}};
  return g.add(std::move(n));
}

int add_simple(Graph& g, NodeKind kind, const std::string& name, std::vector<int> inputs,
               int channels, int block = 2) {
  Node n;
  n.kind = kind;
  n.name = name;
  n.inputs = std::move(inputs);
  n.channels = channels;
  n.block = block;
  return g.add(std::move(n));
}

int conv_prelu(Graph& g, const std::string& name, int input, int in_channels, int out_channels,
               int kernel, int stride = 1) {
  const int c = add_conv(g, name + ".conv", input, in_channels, out_channels, kernel, stride);
  return add_prelu(g, name + ".prelu", c, out_channels);
}

}  // namespace

int add_grouped_residual_block(Graph& g, const std::string& prefix, int input, int width,
                               int groups, bool with_norm, float epsilon) {
  if (groups < 1 || width % groups != 0) {
    throw_error(ErrorCode::kConfig, prefix + ": width " + std::to_string(width) +
                                        " not divisible by " + std::to_string(groups) + " groups");
  }
  const int branch_width = width / groups;
  std::vector<int> branches;
  for (int j = 0; j < groups; ++j) {
    const std::string name = prefix + ".branch" + std::to_string(j);
    int x = add_conv(g, name + ".conv", input, width, branch_width, 3, 1, j * branch_width,
                     branch_width);
    // Every second branch (1-based even index) is instance-normalized.
    if (with_norm && j % 2 == 1) x = add_norm(g, name + ".norm", x, branch_width, epsilon);
    branches.push_back(add_prelu(g, name + ".prelu", x, branch_width));
  }
  const int merged = add_simple(g, NodeKind::kConcat, prefix + ".concat", branches, width);
  return add_simple(g, NodeKind::kAdd, prefix + ".add", {merged, input}, width);
}

int add_cam_block(Graph& g, const std::string& prefix, int input, int width) {
  const int trunk = conv_prelu(g, prefix + ".trunk", input, width, width, 3);
  int x = conv_prelu(g, prefix + ".squeeze", trunk, width, width, 1);
  x = conv_prelu(g, prefix + ".reduce", x, width, width, 3, 3);
  x = add_simple(g, NodeKind::kGlobalAvgPool, prefix + ".pool", {x}, width);
  x = conv_prelu(g, prefix + ".fc1", x, width, width, 1);
  x = add_conv(g, prefix + ".fc2.conv", x, width, width, 1);
  x = add_simple(g, NodeKind::kSigmoid, prefix + ".sigmoid", {x}, width);
  return add_simple(g, NodeKind::kMul, prefix + ".mul", {trunk, x}, width);
}

int add_sam_block(Graph& g, const std::string& prefix, int input, int width) {
  int x = conv_prelu(g, prefix + ".mask", input, width, width, 3);
  x = add_depthwise(g, prefix + ".dw", x, width, 5);
  x = add_simple(g, NodeKind::kSigmoid, prefix + ".sigmoid", {x}, width);
  return add_simple(g, NodeKind::kMul, prefix + ".mul", {input, x}, width);
}

// Layout, with scale 0 the finest (half sensor resolution for base, quarter
// for slim) and widths doubling towards scale 2:
//
//   bayer -> space_to_depth -> stem conv -> f0 -> [pool, conv] -> f1 -> [pool, conv] -> f2
//   o2 = attn(blocks(f2))
//   o1 = attn(blocks(fuse(f1, up(o2))))
//   o0 = attn(blocks(fuse(f0, up(o1))))
//   out = tanh(depth_to_space(conv12(o0)))   (slim: one more conv12 + depth_to_space)
Graph build_model(const ModelConfig& config) {
  config.validate();
  Graph g(config.alignment(), std::string(variant_name(config.variant)));
  const bool slim = config.slim();
  const auto width = [&](int scale) { return config.scale_width(scale); };
  const auto scale_name = [](int scale) { return "s" + std::to_string(scale + 1); };
  const auto cfg_index = [](int scale) { return 2 - scale; };

  const int bayer = g.add_input("bayer", 1);
  const int packed = add_simple(g, NodeKind::kSpaceToDepth, "stem.space_to_depth", {bayer}, 4);
  std::array<int, 3> features{};
  features[0] = conv_prelu(g, "stem", packed, 4, width(0), 3, slim ? 2 : 1);
  for (int scale = 1; scale < 3; ++scale) {
    const std::string name = scale_name(scale) + ".entry";
    if (config.downsample == Downsample::kMaxPool) {
      const int pooled = add_simple(g, NodeKind::kMaxPool, scale_name(scale) + ".pool",
                                    {features[scale - 1]}, width(scale - 1));
      features[scale] = conv_prelu(g, name, pooled, width(scale - 1), width(scale), 3);
    } else {
      features[scale] =
          conv_prelu(g, name, features[scale - 1], width(scale - 1), width(scale), 3, 2);
    }
  }

  int carried = -1;
  for (int scale = 2; scale >= 0; --scale) {
    const std::string sn = scale_name(scale);
    const int w = width(scale);
    int x = features[scale];
    if (carried >= 0) {
      const int up_width = width(scale + 1);
      int up = add_simple(g, NodeKind::kResizeBilinear, sn + ".fuse.upsample", {carried}, up_width);
      if (config.variant == Variant::kSlimPlus) {
        up = add_depthwise(g, sn + ".fuse.dw", up, up_width, 5);
        up = add_prelu(g, sn + ".fuse.dw.prelu", up, up_width);
        const int cat = add_simple(g, NodeKind::kConcat, sn + ".fuse.concat", {x, up}, w + up_width);
        x = conv_prelu(g, sn + ".fuse.merge", cat, w + up_width, w, 1);
      } else {
        const int cat = add_simple(g, NodeKind::kConcat, sn + ".fuse.concat", {x, up}, w + up_width);
        x = conv_prelu(g, sn + ".fuse", cat, w + up_width, w, 3);
      }
    }
    const int idx = cfg_index(scale);
    for (int b = 0; b < config.blocks_per_scale[idx]; ++b) {
      x = add_grouped_residual_block(g, sn + ".block" + std::to_string(b), x, w,
                                     config.groups_per_scale[idx], config.with_norm(),
                                     config.instance_norm_epsilon);
    }
    switch (config.attention[idx]) {
      case Attention::kChannel: x = add_cam_block(g, sn + ".cam", x, w); break;
      case Attention::kSpatial: x = add_sam_block(g, sn + ".sam", x, w); break;
      case Attention::kNone: break;
    }
    carried = x;
  }

  int head = add_conv(g, "head.conv", carried, width(0), 12, 3);
  if (slim) {
    head = add_prelu(g, "head.prelu", head, 12);
    head = add_simple(g, NodeKind::kDepthToSpace, "head.shuffle", {head}, 3);
    head = add_conv(g, "head2.conv", head, 3, 12, 3);
    head = add_simple(g, NodeKind::kDepthToSpace, "head2.shuffle", {head}, 3);
  } else {
    head = add_simple(g, NodeKind::kDepthToSpace, "head.shuffle", {head}, 3);
  }
  const int out = add_simple(g, NodeKind::kTanh, "head.tanh", {head}, 3);
  g.set_output(out);
  return g;
}

}  // namespace rawisp

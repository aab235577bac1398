#pragma once

#include <string>
#include <vector>

#include "seafarm/nn/tensor.hpp"

namespace seafarm::nn {

/// Inverted-bottleneck fusion block configuration. The input is expanded
/// N times (N = kernel sequence length) by a 1×1 convolution, split into N
/// contiguous groups, each group run through a depth-wise kernel of the
/// matching sequence size in an additive cascade, concatenated, summed with
/// the expanded maps, and projected back to the input width. The block
/// preserves shape (in channels = out channels).
struct MffConfig {
    int channels = 0;                 ///< C, in = out
    std::vector<int> kernel_sequence; ///< e.g. {3,5,7} or {3,5,7,9}

    std::vector<float> expand_weight; ///< [N·C][C] row-major (out, in)
    std::vector<float> expand_bias;   ///< [N·C]
    std::vector<std::vector<float>> branch_weight;  ///< per branch: [C][k][k]
    std::vector<std::vector<float>> branch_bias;    ///< per branch: [C]
    std::vector<float> proj_weight;   ///< [C][N·C]
    std::vector<float> proj_bias;     ///< [C]

    int expansion() const { return static_cast<int>(kernel_sequence.size()); }
    int expanded_channels() const { return expansion() * channels; }

    static MffConfig zeros(int channels, std::vector<int> kernel_sequence);

    /// Throws unless every weight container matches the declared shapes.
    void validate() const;
};

/// y = x + Proj(Concat(cascade branches) + Expand(x)). Depth-wise branches
/// use zero same-padding; spatial dims are unchanged.
Tensor4 mff_forward(const Tensor4& x, const MffConfig& cfg);

/// Exact scalar-parameter count of the block (weights + biases).
long long param_count(const MffConfig& cfg);

struct BackboneStage {
    std::string name;
    int blocks = 0;
    std::vector<int> kernel_sequence;
    int channels = 0;
};

/// Stage layout of the downsampling trunk: fusion blocks grouped into four
/// stages. Channel widths are caller-supplied.
struct BackboneDescriptor {
    std::vector<BackboneStage> stages;

    /// Four stages (stage2..stage5) with the standard sequences: [3,5,7] for
    /// the first three, [3,5,7,9] for the last, `blocks` summing to 8.
    static BackboneDescriptor standard_profile(const std::vector<int>& widths,
                                               const std::vector<int>& blocks = {2, 2, 2, 2});
};

struct BackboneReport {
    struct StageReport {
        std::string name;
        int blocks = 0;
        std::vector<int> kernel_sequence;
        int channels = 0;
        long long params_per_block = 0;
        long long params = 0;
    };
    std::vector<StageReport> stages;
    int total_blocks = 0;
    long long total_params = 0;
};

/// Structural report over the descriptor. Enforces the trunk invariants:
/// exactly 8 fusion blocks over 4 stages, last-stage sequence [3,5,7,9],
/// earlier stages [3,5,7]. Throws on violation.
BackboneReport describe_backbone(const BackboneDescriptor& desc);

std::string backbone_report_to_json(const BackboneReport& report);

}  // namespace seafarm::nn

#pragma once

#include <vector>

#include "seafarm/nn/tensor.hpp"

namespace seafarm::nn {

/// Normalized separable blur filter. The 2-D weights are the outer product
/// of the 1-D vector with itself and sum to 1.
struct BlurKernel {
    int size = 0;
    std::vector<double> vec;        // normalized 1-D taps
    std::vector<double> weights2d;  // size×size
    std::vector<int> raw;           // integer taps before normalization

    double weight(int y, int x) const {
        return weights2d[static_cast<std::size_t>(y) * size + x];
    }
};

/// Supported taps: Triangle-3 [1,2,1], Binomial-5 [1,4,6,4,1],
/// Binomial-7 [1,6,15,20,15,6,1]. Throws on any other size.
BlurKernel make_blur_kernel(int size);

/// Multi-scale blur downsampling: 2×2 stride-1 max-pool (replicate padding
/// at the right/bottom edge), then the channels split in order into
/// `n_groups` contiguous groups (remainder to the earliest groups), group i
/// blurred with the kernel of size (3,5,7)[i] at stride 2 under reflect
/// padding, and the groups concatenated back. Output spatial dims are
/// ceil(input / 2); the channel count is unchanged.
Tensor4 mbp_forward(const Tensor4& x, int n_groups = 3);

/// Contiguous channel-group sizes, as equal as possible, remainder first.
std::vector<int> split_channels(int channels, int n_groups);

}  // namespace seafarm::nn

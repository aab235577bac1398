#include "seafarm/nn/blur.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace seafarm::nn {

namespace {

// Reflect index into [0, n) without repeating the edge sample.
int reflect(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

}  // namespace

BlurKernel make_blur_kernel(int size) {
    BlurKernel k;
    k.size = size;
    switch (size) {
        case 3: k.raw = {1, 2, 1}; break;
        case 5: k.raw = {1, 4, 6, 4, 1}; break;
        case 7: k.raw = {1, 6, 15, 20, 15, 6, 1}; break;
        default:
            throw std::invalid_argument("make_blur_kernel: unsupported size " +
                                        std::to_string(size));
    }
    const double sum = std::accumulate(k.raw.begin(), k.raw.end(), 0.0);
    k.vec.resize(size);
    for (int i = 0; i < size; ++i) k.vec[i] = k.raw[i] / sum;
    k.weights2d.resize(static_cast<std::size_t>(size) * size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            k.weights2d[static_cast<std::size_t>(y) * size + x] = k.vec[y] * k.vec[x];
    return k;
}

std::vector<int> split_channels(int channels, int n_groups) {
    std::vector<int> sizes(n_groups, channels / n_groups);
    for (int i = 0; i < channels % n_groups; ++i) ++sizes[i];
    return sizes;
}

Tensor4 mbp_forward(const Tensor4& x, int n_groups) {
    if (n_groups < 1 || n_groups > 3)
        throw std::invalid_argument("mbp_forward: n_groups must be in [1, 3]");
    if (x.c < n_groups)
        throw std::invalid_argument("mbp_forward: need at least one channel per group");

    // 2×2 stride-1 max-pool; the right/bottom edge replicates.
    Tensor4 pooled(x.n, x.c, x.h, x.w);
    for (int n = 0; n < x.n; ++n)
        for (int c = 0; c < x.c; ++c)
            for (int y = 0; y < x.h; ++y) {
                const int y1 = std::min(y + 1, x.h - 1);
                for (int xx = 0; xx < x.w; ++xx) {
                    const int x1 = std::min(xx + 1, x.w - 1);
                    pooled.at(n, c, y, xx) =
                        std::max(std::max(x.at(n, c, y, xx), x.at(n, c, y, x1)),
                                 std::max(x.at(n, c, y1, xx), x.at(n, c, y1, x1)));
                }
            }

    const int out_h = (x.h + 1) / 2;
    const int out_w = (x.w + 1) / 2;
    Tensor4 out(x.n, x.c, out_h, out_w);

    const std::vector<int> sizes = split_channels(x.c, n_groups);
    const int kernel_sizes[3] = {3, 5, 7};

    int c_begin = 0;
    for (int g = 0; g < n_groups; ++g) {
        const BlurKernel kernel = make_blur_kernel(kernel_sizes[g]);
        const int pad = kernel.size / 2;
        for (int c = c_begin; c < c_begin + sizes[g]; ++c)
            for (int n = 0; n < x.n; ++n)
                for (int oy = 0; oy < out_h; ++oy)
                    for (int ox = 0; ox < out_w; ++ox) {
                        double acc = 0.0;
                        for (int ky = 0; ky < kernel.size; ++ky) {
                            const int iy = reflect(2 * oy + ky - pad, x.h);
                            for (int kx = 0; kx < kernel.size; ++kx) {
                                const int ix = reflect(2 * ox + kx - pad, x.w);
                                acc += kernel.weight(ky, kx) * pooled.at(n, c, iy, ix);
                            }
                        }
                        out.at(n, c, oy, ox) = static_cast<float>(acc);
                    }
        c_begin += sizes[g];
    }
    return out;
}

}  // namespace seafarm::nn

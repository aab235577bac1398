#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace seafarm::nn {

/// NCHW float tensor for the reference kernels. Forward-only; no autodiff.
struct Tensor4 {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<float> data;

    Tensor4() = default;
    Tensor4(int n_, int c_, int h_, int w_, float fill = 0.0f)
        : n(n_), c(c_), h(h_), w(w_),
          data(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {
        if (n_ <= 0 || c_ <= 0 || h_ <= 0 || w_ <= 0)
            throw std::invalid_argument("Tensor4: non-positive dims");
    }

    float& at(int in, int ic, int iy, int ix) {
        return data[((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix];
    }
    float at(int in, int ic, int iy, int ix) const {
        return data[((static_cast<std::size_t>(in) * c + ic) * h + iy) * w + ix];
    }

    bool same_shape(const Tensor4& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }
};

}  // namespace seafarm::nn

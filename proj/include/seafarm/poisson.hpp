#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "seafarm/crop.hpp"
#include "seafarm/image.hpp"

namespace seafarm::poisson {

/// Guidance-field construction for the clone solve.
/// SourceGradients is classic seamless cloning (gradients of the crop);
/// MixedGradients keeps, per pixel pair, whichever of crop/background
/// gradient has larger magnitude.
enum class GuidanceMode { SourceGradients, MixedGradients };

/// Divergence of the guidance field, one plane per channel. Stored at full
/// crop size; entries are meaningful wherever the 5-point stencil fits
/// (everywhere except the outer ring) which covers any legal clone interior.
struct GuidanceDivergence {
    int height = 0, width = 0, channels = 0;
    std::vector<double> data;  // H×W×C, row-major like ImageBuffer

    double at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
};

/// Binary mask of pixels to be re-solved. The interior never touches the
/// patch border, so a 1-pixel ring of known values always exists.
struct CloneMask {
    int height = 0, width = 0;
    std::vector<std::uint8_t> interior;  // H×W, 1 = interior

    bool is_interior(int y, int x) const {
        return y >= 0 && y < height && x >= 0 && x < width &&
               interior[static_cast<std::size_t>(y) * width + x] != 0;
    }
    int interior_count() const;

    /// Threshold alpha at 0.5, then erode once with the 3×3 element
    /// (out-of-bounds counts as exterior). An all-ones rectangle therefore
    /// becomes the rectangle minus its border ring.
    static CloneMask from_alpha(const std::vector<double>& alpha, int height, int width);
};

struct SolverParams {
    double tolerance = 1e-8;  ///< relative residual target
    int max_iterations = 0;   ///< 0 = auto: max(200, 10·sqrt(interior size))

    int effective_max_iterations(int interior_size) const {
        if (max_iterations > 0) return max_iterations;
        const int scaled = static_cast<int>(10.0 * std::sqrt(static_cast<double>(interior_size)));
        return scaled > 200 ? scaled : 200;
    }
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double achieved_residual)
        : std::runtime_error(what), achieved_residual_(achieved_residual) {}
    double achieved_residual() const { return achieved_residual_; }

private:
    double achieved_residual_;
};

/// Divergence of the guidance field for the crop against the background
/// region it will cover. Both buffers must have identical dims and channels.
GuidanceDivergence build_guidance(const ImageBuffer& crop, const ImageBuffer& background_region,
                                  GuidanceMode mode);

/// Solves Δf = div on the mask interior with Dirichlet data from `boundary`,
/// channel by channel, using unpreconditioned conjugate gradient on the SPD
/// 5-point system. Returns a copy of `boundary` with interior pixels replaced
/// by the solution (no clamping). Throws SolverError on non-convergence.
ImageBuffer solve_dirichlet(const GuidanceDivergence& div, const ImageBuffer& boundary,
                            const CloneMask& mask, const SolverParams& params = {},
                            SolveStats* stats = nullptr);

/// Gradient-domain composite of `crop` into `background` with its top-left
/// corner at (x, y). The crop must lie fully inside with a 1-pixel margin.
/// Only mask-interior pixels change; they are clamped to [0,1] at the end.
ImageBuffer seamless_clone(const ImageBuffer& background, const ObjectCrop& crop,
                           int x, int y,
                           GuidanceMode mode = GuidanceMode::SourceGradients,
                           const SolverParams& params = {});

}  // namespace seafarm::poisson

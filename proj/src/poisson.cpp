#include "seafarm/poisson.hpp"

#include <algorithm>
#include <sstream>

namespace seafarm::poisson {

namespace {

constexpr int kDy[4] = {-1, 1, 0, 0};
constexpr int kDx[4] = {0, 0, -1, 1};

}  // namespace

int CloneMask::interior_count() const {
    int n = 0;
    for (std::uint8_t v : interior) n += (v != 0);
    return n;
}

CloneMask CloneMask::from_alpha(const std::vector<double>& alpha, int height, int width) {
    if (alpha.size() != static_cast<std::size_t>(height) * width)
        throw std::invalid_argument("CloneMask: alpha dims mismatch");
    std::vector<std::uint8_t> on(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) on[i] = alpha[i] > 0.5 ? 1 : 0;

    CloneMask m;
    m.height = height;
    m.width = width;
    m.interior.assign(alpha.size(), 0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            bool keep = true;
            for (int dy = -1; dy <= 1 && keep; ++dy)
                for (int dx = -1; dx <= 1 && keep; ++dx) {
                    const int ny = y + dy, nx = x + dx;
                    if (ny < 0 || ny >= height || nx < 0 || nx >= width ||
                        on[static_cast<std::size_t>(ny) * width + nx] == 0)
                        keep = false;
                }
            m.interior[static_cast<std::size_t>(y) * width + x] = keep ? 1 : 0;
        }
    }
    return m;
}

GuidanceDivergence build_guidance(const ImageBuffer& crop, const ImageBuffer& background_region,
                                  GuidanceMode mode) {
    if (!crop.same_shape(background_region))
        throw std::invalid_argument("build_guidance: crop/background dims mismatch");
    GuidanceDivergence div;
    div.height = crop.height();
    div.width = crop.width();
    div.channels = crop.channels();
    div.data.assign(static_cast<std::size_t>(div.height) * div.width * div.channels, 0.0);

    for (int y = 1; y + 1 < div.height; ++y) {
        for (int x = 1; x + 1 < div.width; ++x) {
            for (int c = 0; c < div.channels; ++c) {
                double d = 0.0;
                if (mode == GuidanceMode::SourceGradients) {
                    d = crop.at(y - 1, x, c) + crop.at(y + 1, x, c) +
                        crop.at(y, x - 1, c) + crop.at(y, x + 1, c) -
                        4.0 * crop.at(y, x, c);
                } else {
                    for (int k = 0; k < 4; ++k) {
                        const int ny = y + kDy[k], nx = x + kDx[k];
                        const double gs = crop.at(ny, nx, c) - crop.at(y, x, c);
                        const double gb = background_region.at(ny, nx, c) -
                                          background_region.at(y, x, c);
                        d += std::abs(gs) >= std::abs(gb) ? gs : gb;
                    }
                }
                div.at(y, x, c) = d;
            }
        }
    }
    return div;
}

ImageBuffer solve_dirichlet(const GuidanceDivergence& div, const ImageBuffer& boundary,
                            const CloneMask& mask, const SolverParams& params,
                            SolveStats* stats) {
    if (boundary.height() != mask.height || boundary.width() != mask.width)
        throw std::invalid_argument("solve_dirichlet: boundary/mask dims mismatch");
    if (div.height != mask.height || div.width != mask.width ||
        div.channels != boundary.channels())
        throw std::invalid_argument("solve_dirichlet: divergence dims mismatch");
    if (!(params.tolerance > 0.0))
        throw std::invalid_argument("solve_dirichlet: tolerance must be > 0");

    const int h = mask.height, w = mask.width, nch = boundary.channels();

    // Index interior pixels in row-major order.
    std::vector<int> index(static_cast<std::size_t>(h) * w, -1);
    std::vector<int> ys, xs;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (mask.is_interior(y, x)) {
                index[static_cast<std::size_t>(y) * w + x] = static_cast<int>(ys.size());
                ys.push_back(y);
                xs.push_back(x);
            }
    const int n = static_cast<int>(ys.size());
    if (n == 0) throw std::invalid_argument("solve_dirichlet: empty clone interior");
    for (int k = 0; k < n; ++k)
        if (ys[k] == 0 || ys[k] == h - 1 || xs[k] == 0 || xs[k] == w - 1)
            throw std::invalid_argument("solve_dirichlet: interior touches patch border");

    const int max_iter = params.effective_max_iterations(n);

    // 4 f_p − Σ_{q∈interior} f_q  applied to a packed interior vector.
    auto apply_laplacian = [&](const std::vector<double>& v, std::vector<double>& out) {
        for (int k = 0; k < n; ++k) {
            double acc = 4.0 * v[k];
            const int y = ys[k], x = xs[k];
            for (int d = 0; d < 4; ++d) {
                const int j = index[static_cast<std::size_t>(y + kDy[d]) * w + (x + kDx[d])];
                if (j >= 0) acc -= v[j];
            }
            out[k] = acc;
        }
    };

    ImageBuffer result = boundary;
    std::vector<double> b(n), x0(n), r(n), p(n), ap(n);

    for (int c = 0; c < nch; ++c) {
        for (int k = 0; k < n; ++k) {
            const int y = ys[k], x = xs[k];
            double rhs = -div.at(y, x, c);
            for (int d = 0; d < 4; ++d) {
                const int ny = y + kDy[d], nx = x + kDx[d];
                if (index[static_cast<std::size_t>(ny) * w + nx] < 0)
                    rhs += boundary.at(ny, nx, c);
            }
            b[k] = rhs;
            x0[k] = boundary.at(y, x, c);  // warm start from the covered pixels
        }

        double bnorm2 = 0.0;
        for (int k = 0; k < n; ++k) bnorm2 += b[k] * b[k];
        const double bnorm = std::sqrt(bnorm2);
        // With a zero RHS the tolerance is absolute; otherwise relative.
        const double stop = bnorm > 0.0 ? params.tolerance * bnorm : params.tolerance;

        apply_laplacian(x0, ap);
        double rs = 0.0;
        for (int k = 0; k < n; ++k) {
            r[k] = b[k] - ap[k];
            rs += r[k] * r[k];
        }
        p = r;

        int it = 0;
        while (std::sqrt(rs) > stop && it < max_iter) {
            apply_laplacian(p, ap);
            double pap = 0.0;
            for (int k = 0; k < n; ++k) pap += p[k] * ap[k];
            if (pap <= 0.0) break;  // SPD breakdown, only reachable via rounding
            const double alpha = rs / pap;
            for (int k = 0; k < n; ++k) {
                x0[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
            }
            double rs_new = 0.0;
            for (int k = 0; k < n; ++k) rs_new += r[k] * r[k];
            const double beta = rs_new / rs;
            for (int k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
            rs = rs_new;
            ++it;
        }

        const double rel = bnorm > 0.0 ? std::sqrt(rs) / bnorm : std::sqrt(rs);
        if (std::sqrt(rs) > stop) {
            std::ostringstream msg;
            msg << "conjugate gradient did not converge: channel " << c << ", " << it
                << " iterations, relative residual " << rel << " > " << params.tolerance;
            throw SolverError(msg.str(), rel);
        }
        if (stats) {
            stats->iterations = std::max(stats->iterations, it);
            stats->relative_residual = std::max(stats->relative_residual, rel);
        }

        for (int k = 0; k < n; ++k) result.at(ys[k], xs[k], c) = x0[k];
    }
    return result;
}

ImageBuffer seamless_clone(const ImageBuffer& background, const ObjectCrop& crop,
                           int x, int y, GuidanceMode mode, const SolverParams& params) {
    const int ch = crop.patch.height(), cw = crop.patch.width();
    if (crop.patch.channels() != background.channels())
        throw std::invalid_argument("seamless_clone: channel count mismatch");
    if (!crop.alpha_matches_patch())
        throw std::invalid_argument("seamless_clone: alpha dims mismatch");
    if (x < 1 || y < 1 || x + cw > background.width() - 1 || y + ch > background.height() - 1)
        throw std::out_of_range("seamless_clone: placement violates 1-pixel margin");

    const CloneMask mask = CloneMask::from_alpha(crop.alpha, ch, cw);
    if (mask.interior_count() == 0)
        throw std::invalid_argument("seamless_clone: clone interior is empty after erosion");

    const ImageBuffer region = background.crop_rect(x, y, cw, ch);
    const GuidanceDivergence div = build_guidance(crop.patch, region, mode);
    const ImageBuffer solved = solve_dirichlet(div, region, mask, params);

    ImageBuffer out = background;
    for (int ry = 0; ry < ch; ++ry)
        for (int rx = 0; rx < cw; ++rx)
            if (mask.is_interior(ry, rx))
                for (int c = 0; c < out.channels(); ++c)
                    out.at(y + ry, x + rx, c) = std::clamp(solved.at(ry, rx, c), 0.0, 1.0);
    return out;
}

}  // namespace seafarm::poisson

#include "seafarm/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seafarm::augment {

namespace {

void zero_rect(ImageBuffer& img, int x0, int y0, int x1, int y1) {
    x0 = std::max(0, x0);
    y0 = std::max(0, y0);
    x1 = std::min(img.width(), x1);
    y1 = std::min(img.height(), y1);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            for (int c = 0; c < img.channels(); ++c) img.at(y, x, c) = 0.0;
}

}  // namespace

BaselineResult baseline_augment(const ImageBuffer& image,
                                const std::vector<Annotation>& annotations,
                                const AugmentSpec& spec, Rng& rng) {
    BaselineResult res;
    res.flipped = rng.uniform() < spec.flip_prob;
    res.scale = rng.uniform(spec.scale_lo, spec.scale_hi);

    std::vector<Annotation> anns = annotations;
    ImageBuffer img = image;

    if (res.flipped) {
        ImageBuffer flipped(img.height(), img.width(), img.channels());
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x)
                for (int c = 0; c < img.channels(); ++c)
                    flipped.at(y, x, c) = img.at(y, img.width() - 1 - x, c);
        img = std::move(flipped);
        for (auto& a : anns) a.box.x = image.width() - a.box.x - a.box.w;
    }

    const int sh = std::max(1, static_cast<int>(std::llround(img.height() * res.scale)));
    const int sw = std::max(1, static_cast<int>(std::llround(img.width() * res.scale)));
    // Boxes scale by the realized (rounded) factors so they stay bound to pixels.
    const double fy = static_cast<double>(sh) / img.height();
    const double fx = static_cast<double>(sw) / img.width();
    img = bilinear_resize(img, sh, sw);
    for (auto& a : anns) {
        a.box.x *= fx;
        a.box.w *= fx;
        a.box.y *= fy;
        a.box.h *= fy;
    }

    if (spec.crop_size) {
        const int th = spec.crop_size->first, tw = spec.crop_size->second;
        if (th > img.height() || tw > img.width())
            throw std::runtime_error("baseline_augment: crop larger than scaled image");
        res.crop_x = static_cast<int>(rng.uniform_int(
            static_cast<std::uint64_t>(img.width() - tw) + 1));
        res.crop_y = static_cast<int>(rng.uniform_int(
            static_cast<std::uint64_t>(img.height() - th) + 1));
        img = img.crop_rect(res.crop_x, res.crop_y, tw, th);

        std::vector<Annotation> kept;
        for (auto a : anns) {
            const double orig_area = a.box.area();
            const double x0 = std::max(a.box.x - res.crop_x, 0.0);
            const double y0 = std::max(a.box.y - res.crop_y, 0.0);
            const double x1 = std::min(a.box.x + a.box.w - res.crop_x,
                                       static_cast<double>(tw));
            const double y1 = std::min(a.box.y + a.box.h - res.crop_y,
                                       static_cast<double>(th));
            if (x1 <= x0 || y1 <= y0) continue;
            if ((x1 - x0) * (y1 - y0) < spec.min_box_area_ratio * orig_area) continue;
            a.box.x = x0;
            a.box.y = y0;
            a.box.w = x1 - x0;
            a.box.h = y1 - y0;
            kept.push_back(a);
        }
        anns = std::move(kept);
    }

    if (!spec.channel_means.empty()) {
        if (static_cast<int>(spec.channel_means.size()) != img.channels())
            throw std::invalid_argument("baseline_augment: channel mean count mismatch");
        for (int y = 0; y < img.height(); ++y)
            for (int x = 0; x < img.width(); ++x)
                for (int c = 0; c < img.channels(); ++c)
                    img.at(y, x, c) -= spec.channel_means[c];
    }

    res.image = std::move(img);
    res.annotations = std::move(anns);
    return res;
}

ImageBuffer cutout(const ImageBuffer& image, const AugmentSpec& spec, Rng& rng) {
    ImageBuffer out = image;
    const int side = std::max(
        1, static_cast<int>(std::llround(spec.cutout_side_fraction *
                                         std::min(image.height(), image.width()))));
    // Center anywhere in the image; the square clips at the borders.
    const int cx = static_cast<int>(rng.uniform_int(image.width()));
    const int cy = static_cast<int>(rng.uniform_int(image.height()));
    zero_rect(out, cx - side / 2, cy - side / 2, cx - side / 2 + side, cy - side / 2 + side);
    return out;
}

ImageBuffer random_erase(const ImageBuffer& image, const AugmentSpec& spec, Rng& rng) {
    ImageBuffer out = image;
    const double img_area = static_cast<double>(image.height()) * image.width();
    for (int attempt = 0; attempt < 100; ++attempt) {
        const double area = img_area * rng.uniform(spec.erase_area_lo, spec.erase_area_hi);
        const double aspect = rng.uniform(spec.erase_aspect_lo, spec.erase_aspect_hi);
        const int eh = static_cast<int>(std::llround(std::sqrt(area * aspect)));
        const int ew = static_cast<int>(std::llround(std::sqrt(area / aspect)));
        if (eh < 1 || ew < 1 || eh > image.height() || ew > image.width()) continue;
        const int x0 = static_cast<int>(rng.uniform_int(
            static_cast<std::uint64_t>(image.width() - ew) + 1));
        const int y0 = static_cast<int>(rng.uniform_int(
            static_cast<std::uint64_t>(image.height() - eh) + 1));
        for (int y = y0; y < y0 + eh; ++y)
            for (int x = x0; x < x0 + ew; ++x)
                for (int c = 0; c < image.channels(); ++c) out.at(y, x, c) = rng.uniform();
        return out;
    }
    return out;  // no rectangle fit; untouched
}

ImageBuffer gridmask(const ImageBuffer& image, const AugmentSpec& spec, Rng& rng) {
    const int d = spec.grid_unit > 0
                      ? spec.grid_unit
                      : std::max(2, std::min(image.height(), image.width()) / 4);
    if (!(spec.grid_ratio >= 0.0 && spec.grid_ratio < 1.0))
        throw std::invalid_argument("gridmask: ratio must be in [0, 1)");
    const int drop = static_cast<int>(std::llround(spec.grid_ratio * d));
    const int off_x = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d)));
    const int off_y = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(d)));

    ImageBuffer out = image;
    for (int y = 0; y < image.height(); ++y) {
        const int uy = ((y - off_y) % d + d) % d;
        for (int x = 0; x < image.width(); ++x) {
            const int ux = ((x - off_x) % d + d) % d;
            if (uy < drop || ux < drop)
                for (int c = 0; c < image.channels(); ++c) out.at(y, x, c) = 0.0;
        }
    }
    return out;
}

ImageBuffer hide_and_seek(const ImageBuffer& image, const AugmentSpec& spec, Rng& rng) {
    if (spec.has_grid < 1) throw std::invalid_argument("hide_and_seek: grid must be >= 1");
    ImageBuffer out = image;
    const int S = spec.has_grid;
    for (int gy = 0; gy < S; ++gy)
        for (int gx = 0; gx < S; ++gx) {
            const bool hide = rng.uniform() < spec.has_hide_prob;
            if (!hide) continue;
            const int y0 = gy * image.height() / S;
            const int y1 = (gy + 1) * image.height() / S;
            const int x0 = gx * image.width() / S;
            const int x1 = (gx + 1) * image.width() / S;
            zero_rect(out, x0, y0, x1, y1);
        }
    return out;
}

MixupResult mixup(const ImageBuffer& image_a, const std::vector<Annotation>& annotations_a,
                  const ImageBuffer& image_b, const std::vector<Annotation>& annotations_b,
                  double lambda) {
    if (!image_a.same_shape(image_b))
        throw std::invalid_argument("mixup: image dims mismatch");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("mixup: lambda must be in [0, 1]");

    MixupResult res;
    res.image = image_a;
    for (std::size_t i = 0; i < res.image.data().size(); ++i)
        res.image.data()[i] = lambda * image_a.data()[i] + (1.0 - lambda) * image_b.data()[i];
    for (auto a : annotations_a) {
        a.weight = lambda;
        res.annotations.push_back(std::move(a));
    }
    for (auto b : annotations_b) {
        b.weight = 1.0 - lambda;
        res.annotations.push_back(std::move(b));
    }
    return res;
}

double sample_mixup_lambda(double alpha, Rng& rng) {
    if (!(alpha > 0.0)) throw std::invalid_argument("sample_mixup_lambda: alpha must be > 0");
    // Johnk's generator: uses only uniforms, so the stream stays portable.
    for (;;) {
        const double x = std::pow(rng.uniform(), 1.0 / alpha);
        const double y = std::pow(rng.uniform(), 1.0 / alpha);
        if (x + y > 0.0 && x + y <= 1.0) return x / (x + y);
    }
}

}  // namespace seafarm::augment

#include "seafarm/nn/mff.hpp"

#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace seafarm::nn {

MffConfig MffConfig::zeros(int channels, std::vector<int> kernel_sequence) {
    MffConfig cfg;
    cfg.channels = channels;
    cfg.kernel_sequence = std::move(kernel_sequence);
    const int nc = cfg.expanded_channels();
    cfg.expand_weight.assign(static_cast<std::size_t>(nc) * channels, 0.0f);
    cfg.expand_bias.assign(nc, 0.0f);
    for (int k : cfg.kernel_sequence) {
        cfg.branch_weight.emplace_back(static_cast<std::size_t>(channels) * k * k, 0.0f);
        cfg.branch_bias.emplace_back(channels, 0.0f);
    }
    cfg.proj_weight.assign(static_cast<std::size_t>(channels) * nc, 0.0f);
    cfg.proj_bias.assign(channels, 0.0f);
    return cfg;
}

void MffConfig::validate() const {
    if (channels <= 0) throw std::invalid_argument("MffConfig: channels must be > 0");
    if (kernel_sequence.empty())
        throw std::invalid_argument("MffConfig: empty kernel sequence");
    for (int k : kernel_sequence)
        if (k < 1 || k % 2 == 0)
            throw std::invalid_argument("MffConfig: kernel sizes must be odd and positive");
    const std::size_t nc = static_cast<std::size_t>(expanded_channels());
    if (expand_weight.size() != nc * channels || expand_bias.size() != nc)
        throw std::invalid_argument("MffConfig: expansion weight dims mismatch");
    if (branch_weight.size() != kernel_sequence.size() ||
        branch_bias.size() != kernel_sequence.size())
        throw std::invalid_argument("MffConfig: branch count != kernel sequence length");
    for (std::size_t i = 0; i < kernel_sequence.size(); ++i) {
        const std::size_t k = static_cast<std::size_t>(kernel_sequence[i]);
        if (branch_weight[i].size() != static_cast<std::size_t>(channels) * k * k ||
            branch_bias[i].size() != static_cast<std::size_t>(channels))
            throw std::invalid_argument("MffConfig: branch kernel does not match its sequence entry");
    }
    if (proj_weight.size() != static_cast<std::size_t>(channels) * nc ||
        proj_bias.size() != static_cast<std::size_t>(channels))
        throw std::invalid_argument("MffConfig: projection weight dims mismatch");
}

namespace {

// 1×1 convolution, row-major [out][in] weights.
Tensor4 conv1x1(const Tensor4& x, const std::vector<float>& weight,
                const std::vector<float>& bias, int out_channels) {
    Tensor4 y(x.n, out_channels, x.h, x.w);
    for (int n = 0; n < x.n; ++n)
        for (int oc = 0; oc < out_channels; ++oc)
            for (int yy = 0; yy < x.h; ++yy)
                for (int xx = 0; xx < x.w; ++xx) {
                    double acc = bias[oc];
                    for (int ic = 0; ic < x.c; ++ic)
                        acc += static_cast<double>(
                                   weight[static_cast<std::size_t>(oc) * x.c + ic]) *
                               x.at(n, ic, yy, xx);
                    y.at(n, oc, yy, xx) = static_cast<float>(acc);
                }
    return y;
}

// Depth-wise convolution with zero same-padding over a C-channel group.
Tensor4 depthwise(const Tensor4& x, const std::vector<float>& weight,
                  const std::vector<float>& bias, int ksize) {
    const int pad = ksize / 2;
    Tensor4 y(x.n, x.c, x.h, x.w);
    for (int n = 0; n < x.n; ++n)
        for (int c = 0; c < x.c; ++c) {
            const float* kw = weight.data() + static_cast<std::size_t>(c) * ksize * ksize;
            for (int yy = 0; yy < x.h; ++yy)
                for (int xx = 0; xx < x.w; ++xx) {
                    double acc = bias[c];
                    for (int ky = 0; ky < ksize; ++ky) {
                        const int iy = yy + ky - pad;
                        if (iy < 0 || iy >= x.h) continue;
                        for (int kx = 0; kx < ksize; ++kx) {
                            const int ix = xx + kx - pad;
                            if (ix < 0 || ix >= x.w) continue;
                            acc += static_cast<double>(kw[ky * ksize + kx]) *
                                   x.at(n, c, iy, ix);
                        }
                    }
                    y.at(n, c, yy, xx) = static_cast<float>(acc);
                }
        }
    return y;
}

Tensor4 slice_channels(const Tensor4& x, int c_begin, int count) {
    Tensor4 y(x.n, count, x.h, x.w);
    for (int n = 0; n < x.n; ++n)
        for (int c = 0; c < count; ++c)
            for (int yy = 0; yy < x.h; ++yy)
                for (int xx = 0; xx < x.w; ++xx)
                    y.at(n, c, yy, xx) = x.at(n, c_begin + c, yy, xx);
    return y;
}

}  // namespace

Tensor4 mff_forward(const Tensor4& x, const MffConfig& cfg) {
    cfg.validate();
    if (x.c != cfg.channels)
        throw std::invalid_argument("mff_forward: input channels do not match config");

    const int N = cfg.expansion();
    const int C = cfg.channels;
    const Tensor4 expanded = conv1x1(x, cfg.expand_weight, cfg.expand_bias,
                                     cfg.expanded_channels());

    // Additive cascade: G'_1 = K_1(G_1), G'_i = K_i(G_i + G'_{i-1}).
    Tensor4 fused(x.n, cfg.expanded_channels(), x.h, x.w);
    Tensor4 prev;
    for (int i = 0; i < N; ++i) {
        Tensor4 group = slice_channels(expanded, i * C, C);
        if (i > 0)
            for (std::size_t k = 0; k < group.data.size(); ++k)
                group.data[k] += prev.data[k];
        prev = depthwise(group, cfg.branch_weight[i], cfg.branch_bias[i],
                         cfg.kernel_sequence[i]);
        for (int n = 0; n < x.n; ++n)
            for (int c = 0; c < C; ++c)
                for (int yy = 0; yy < x.h; ++yy)
                    for (int xx = 0; xx < x.w; ++xx)
                        fused.at(n, i * C + c, yy, xx) = prev.at(n, c, yy, xx);
    }

    // Second residual: the expanded maps rejoin after the cascade.
    for (std::size_t k = 0; k < fused.data.size(); ++k) fused.data[k] += expanded.data[k];

    Tensor4 y = conv1x1(fused, cfg.proj_weight, cfg.proj_bias, C);
    for (std::size_t k = 0; k < y.data.size(); ++k) y.data[k] += x.data[k];
    return y;
}

long long param_count(const MffConfig& cfg) {
    cfg.validate();
    const long long C = cfg.channels;
    const long long NC = cfg.expanded_channels();
    long long total = C * NC + NC;  // expansion
    for (int k : cfg.kernel_sequence) total += static_cast<long long>(k) * k * C + C;
    total += NC * C + C;  // projection
    return total;
}

BackboneDescriptor BackboneDescriptor::standard_profile(const std::vector<int>& widths,
                                                        const std::vector<int>& blocks) {
    if (widths.size() != 4 || blocks.size() != 4)
        throw std::invalid_argument("standard_profile: need 4 widths and 4 block counts");
    BackboneDescriptor d;
    for (int i = 0; i < 4; ++i) {
        BackboneStage s;
        s.name = "stage" + std::to_string(i + 2);
        s.blocks = blocks[i];
        s.kernel_sequence = (i == 3) ? std::vector<int>{3, 5, 7, 9}
                                     : std::vector<int>{3, 5, 7};
        s.channels = widths[i];
        d.stages.push_back(std::move(s));
    }
    return d;
}

BackboneReport describe_backbone(const BackboneDescriptor& desc) {
    if (desc.stages.size() != 4)
        throw std::invalid_argument("describe_backbone: expected 4 stages (stage2..stage5)");
    int total_blocks = 0;
    for (const auto& s : desc.stages) total_blocks += s.blocks;
    if (total_blocks != 8) {
        std::ostringstream msg;
        msg << "describe_backbone: trunk must contain exactly 8 fusion blocks, got "
            << total_blocks;
        throw std::invalid_argument(msg.str());
    }
    const std::vector<int> early{3, 5, 7}, last{3, 5, 7, 9};
    for (std::size_t i = 0; i < desc.stages.size(); ++i) {
        const auto& want = (i == 3) ? last : early;
        if (desc.stages[i].kernel_sequence != want)
            throw std::invalid_argument("describe_backbone: stage '" + desc.stages[i].name +
                                        "' has a non-standard kernel sequence");
        if (desc.stages[i].channels <= 0)
            throw std::invalid_argument("describe_backbone: non-positive channel width");
        if (desc.stages[i].blocks < 0)
            throw std::invalid_argument("describe_backbone: negative block count");
    }

    BackboneReport report;
    for (const auto& s : desc.stages) {
        BackboneReport::StageReport sr;
        sr.name = s.name;
        sr.blocks = s.blocks;
        sr.kernel_sequence = s.kernel_sequence;
        sr.channels = s.channels;
        sr.params_per_block = param_count(MffConfig::zeros(s.channels, s.kernel_sequence));
        sr.params = sr.params_per_block * s.blocks;
        report.total_blocks += s.blocks;
        report.total_params += sr.params;
        report.stages.push_back(std::move(sr));
    }
    return report;
}

std::string backbone_report_to_json(const BackboneReport& report) {
    nlohmann::json j;
    j["total_blocks"] = report.total_blocks;
    j["total_params"] = report.total_params;
    j["stages"] = nlohmann::json::array();
    for (const auto& s : report.stages)
        j["stages"].push_back({{"name", s.name},
                               {"blocks", s.blocks},
                               {"kernel_sequence", s.kernel_sequence},
                               {"channels", s.channels},
                               {"params_per_block", s.params_per_block},
                               {"params", s.params}});
    return j.dump(2) + "\n";
}

}  // namespace seafarm::nn

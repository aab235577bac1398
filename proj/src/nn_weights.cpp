#include "seafarm/nn/weights.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace seafarm::nn {

namespace {

constexpr char kMagic[4] = {'S', 'F', 'W', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff),
                           static_cast<char>((v >> 24) & 0xff)};
    out.write(bytes, 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in) throw std::runtime_error("weights container truncated");
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void put_f32(std::ostream& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(out, bits);
}

float get_f32(std::istream& in) {
    const std::uint32_t bits = get_u32(in);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

}  // namespace

void save_weights(const std::string& path, const std::vector<NamedTensor>& tensors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot create weights file: " + path);
    out.write(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& t : tensors) {
        if (t.data.size() != t.element_count())
            throw std::invalid_argument("tensor '" + t.name + "' data does not match dims");
        put_u32(out, static_cast<std::uint32_t>(t.name.size()));
        out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
        put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
        for (auto d : t.dims) put_u32(out, d);
    }
    for (const auto& t : tensors)
        for (float v : t.data) put_f32(out, v);
    if (!out) throw std::runtime_error("failed to write weights file: " + path);
}

std::vector<NamedTensor> load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open weights file: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("not a weights container: " + path);
    const std::uint32_t count = get_u32(in);
    std::vector<NamedTensor> tensors(count);
    for (auto& t : tensors) {
        const std::uint32_t name_len = get_u32(in);
        t.name.resize(name_len);
        in.read(t.name.data(), name_len);
        const std::uint32_t ndim = get_u32(in);
        t.dims.resize(ndim);
        for (auto& d : t.dims) d = get_u32(in);
    }
    for (auto& t : tensors) {
        t.data.resize(t.element_count());
        for (auto& v : t.data) v = get_f32(in);
    }
    if (!in) throw std::runtime_error("weights container truncated: " + path);
    return tensors;
}

std::vector<NamedTensor> mff_to_tensors(const MffConfig& cfg) {
    cfg.validate();
    const auto u = [](int v) { return static_cast<std::uint32_t>(v); };
    std::vector<NamedTensor> out;
    out.push_back({"expand.weight", {u(cfg.expanded_channels()), u(cfg.channels)},
                   cfg.expand_weight});
    out.push_back({"expand.bias", {u(cfg.expanded_channels())}, cfg.expand_bias});
    for (std::size_t i = 0; i < cfg.kernel_sequence.size(); ++i) {
        const std::string base = "branch" + std::to_string(i);
        const int k = cfg.kernel_sequence[i];
        out.push_back({base + ".weight", {u(cfg.channels), u(k), u(k)}, cfg.branch_weight[i]});
        out.push_back({base + ".bias", {u(cfg.channels)}, cfg.branch_bias[i]});
    }
    out.push_back({"proj.weight", {u(cfg.channels), u(cfg.expanded_channels())},
                   cfg.proj_weight});
    out.push_back({"proj.bias", {u(cfg.channels)}, cfg.proj_bias});
    return out;
}

MffConfig mff_from_tensors(const std::vector<NamedTensor>& tensors) {
    const auto find = [&](const std::string& name) -> const NamedTensor& {
        for (const auto& t : tensors)
            if (t.name == name) return t;
        throw std::runtime_error("weights container missing tensor '" + name + "'");
    };

    const NamedTensor& ew = find("expand.weight");
    if (ew.dims.size() != 2) throw std::runtime_error("expand.weight must be 2-D");
    MffConfig cfg;
    cfg.channels = static_cast<int>(ew.dims[1]);
    const int nc = static_cast<int>(ew.dims[0]);
    if (cfg.channels <= 0 || nc % cfg.channels != 0)
        throw std::runtime_error("expand.weight dims are not an integer expansion");
    const int n = nc / cfg.channels;

    cfg.expand_weight = ew.data;
    cfg.expand_bias = find("expand.bias").data;
    for (int i = 0; i < n; ++i) {
        const NamedTensor& bw = find("branch" + std::to_string(i) + ".weight");
        if (bw.dims.size() != 3 || bw.dims[1] != bw.dims[2])
            throw std::runtime_error("branch weight must be [C][k][k]");
        cfg.kernel_sequence.push_back(static_cast<int>(bw.dims[1]));
        cfg.branch_weight.push_back(bw.data);
        cfg.branch_bias.push_back(find("branch" + std::to_string(i) + ".bias").data);
    }
    cfg.proj_weight = find("proj.weight").data;
    cfg.proj_bias = find("proj.bias").data;
    cfg.validate();
    return cfg;
}

}  // namespace seafarm::nn

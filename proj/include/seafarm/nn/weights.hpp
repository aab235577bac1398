#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seafarm/nn/mff.hpp"

namespace seafarm::nn {

/// One named tensor of the flat binary weights container.
struct NamedTensor {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<float> data;  // product(dims) elements

    std::size_t element_count() const {
        std::size_t n = 1;
        for (auto d : dims) n *= d;
        return n;
    }
};

/// Container layout (documented in docs/formats.md): magic "SFW1", then a
/// little-endian u32 tensor count, per-tensor headers (u32 name length,
/// name bytes, u32 ndim, u32 dims[ndim]), then the raw float32
/// little-endian data blocks in header order.
void save_weights(const std::string& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> load_weights(const std::string& path);

/// MffConfig packing uses the names expand.weight/expand.bias,
/// branch<i>.weight/branch<i>.bias, proj.weight/proj.bias.
std::vector<NamedTensor> mff_to_tensors(const MffConfig& cfg);
MffConfig mff_from_tensors(const std::vector<NamedTensor>& tensors);

}  // namespace seafarm::nn

#pragma once

// Generator inference from exported weights.
//
// Interchange format:
//   manifest.json  JSON array of layer records, in execution order:
//     { "name": str, "kind": "conv_transpose" | "batch_norm" | "relu" | "tanh",
//       "stride": int, "padding": int,           (conv_transpose only)
//       "eps": real,                             (batch_norm only, default 1e-5)
//       "tensors": [ { "role": str, "shape": [int...], "offset": bytes, "count": int } ] }
//     conv_transpose roles: weight [in, out, k, k], bias [out] (optional)
//     batch_norm roles: scale, shift, running_mean, running_var, each [channels]
//   weights.bin    little-endian float32 values, row-major per tensor, at the
//                  byte offsets given in the manifest.

#include "lrqd/error.hpp"
#include "lrqd/level.hpp"
#include "lrqd/volume.hpp"

#include "json.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace lrqd {

inline constexpr int kLatentSize = 10;

/// Ten latent components, each in [-1, 1].
class LatentVector {
public:
    using Values = std::array<double, kLatentSize>;

    LatentVector() { values_.fill(0.0); }
    explicit LatentVector(const Values& values)
        : values_(values)
    {
        for (double v : values_) {
            if (!(v >= -1.0 && v <= 1.0)) {
                throw Error(ErrorCode::InvalidConfig, "latent component out of [-1, 1]: " + std::to_string(v));
            }
        }
    }

    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] const Values& values() const noexcept { return values_; }

    friend bool operator==(const LatentVector&, const LatentVector&) = default;

private:
    Values values_ {};
};

enum class LayerKind { ConvTranspose, BatchNorm, Relu, Tanh };

struct Layer {
    std::string name;
    LayerKind kind = LayerKind::Relu;

    // conv_transpose
    int in_channels = 0;
    int out_channels = 0;
    int kernel = 0;
    int stride = 1;
    int padding = 0;
    std::vector<float> weight; // [in][out][k][k]
    std::vector<float> bias;   // [out], empty when absent

    // batch_norm
    double eps = 1e-5;
    std::vector<float> scale;
    std::vector<float> shift;
    std::vector<float> running_mean;
    std::vector<float> running_var;
};

struct Shape3 {
    int channels = 0;
    int height = 0;
    int width = 0;

    friend bool operator==(const Shape3&, const Shape3&) = default;
};

inline constexpr Shape3 kLatentShape { kLatentSize, 1, 1 };
inline constexpr Shape3 kOutputShape { kTileTypeCount, 32, 32 };

/// A validated layer stack whose shape chain runs 10x1x1 -> 7x32x32 and ends in tanh.
class GeneratorWeights {
public:
    explicit GeneratorWeights(std::vector<Layer> layers)
        : layers_(std::move(layers))
    {
        validate();
    }

    [[nodiscard]] const std::vector<Layer>& layers() const noexcept { return layers_; }

    /// Output shape of each layer, in order.
    [[nodiscard]] std::vector<Shape3> shape_chain() const
    {
        std::vector<Shape3> chain;
        Shape3 s = kLatentShape;
        for (const auto& layer : layers_) {
            if (layer.kind == LayerKind::ConvTranspose) {
                s = { layer.out_channels, (s.height - 1) * layer.stride - 2 * layer.padding + layer.kernel,
                    (s.width - 1) * layer.stride - 2 * layer.padding + layer.kernel };
            }
            chain.push_back(s);
        }
        return chain;
    }

private:
    void validate() const
    {
        if (layers_.empty()) {
            throw Error(ErrorCode::MalformedManifest, "generator has no layers");
        }
        Shape3 s = kLatentShape;
        for (const auto& layer : layers_) {
            switch (layer.kind) {
            case LayerKind::ConvTranspose: {
                if (layer.in_channels != s.channels) {
                    throw Error(ErrorCode::ShapeMismatch,
                        layer.name + ": expects " + std::to_string(layer.in_channels) + " input channels, got "
                            + std::to_string(s.channels));
                }
                if (layer.kernel <= 0 || layer.stride <= 0 || layer.padding < 0 || layer.out_channels <= 0) {
                    throw Error(ErrorCode::MalformedManifest, layer.name + ": invalid kernel/stride/padding");
                }
                const auto expected = static_cast<std::size_t>(layer.in_channels) * layer.out_channels * layer.kernel
                    * layer.kernel;
                if (layer.weight.size() != expected) {
                    throw Error(ErrorCode::ShapeMismatch, layer.name + ": weight tensor has wrong element count");
                }
                if (!layer.bias.empty() && layer.bias.size() != static_cast<std::size_t>(layer.out_channels)) {
                    throw Error(ErrorCode::ShapeMismatch, layer.name + ": bias tensor has wrong element count");
                }
                const int h = (s.height - 1) * layer.stride - 2 * layer.padding + layer.kernel;
                const int w = (s.width - 1) * layer.stride - 2 * layer.padding + layer.kernel;
                if (h <= 0 || w <= 0) {
                    throw Error(ErrorCode::ShapeMismatch, layer.name + ": produces an empty output");
                }
                s = { layer.out_channels, h, w };
                break;
            }
            case LayerKind::BatchNorm: {
                const auto c = static_cast<std::size_t>(s.channels);
                if (layer.scale.size() != c || layer.shift.size() != c || layer.running_mean.size() != c
                    || layer.running_var.size() != c) {
                    throw Error(ErrorCode::ShapeMismatch,
                        layer.name + ": batch-norm parameters must have " + std::to_string(c) + " entries");
                }
                break;
            }
            case LayerKind::Relu:
            case LayerKind::Tanh: break;
            }
        }
        if (s != kOutputShape) {
            throw Error(ErrorCode::ShapeMismatch,
                "generator output is " + std::to_string(s.channels) + "x" + std::to_string(s.height) + "x"
                    + std::to_string(s.width) + ", expected 7x32x32");
        }
        if (layers_.back().kind != LayerKind::Tanh) {
            throw Error(ErrorCode::MalformedManifest, "final layer must be tanh");
        }
    }

    std::vector<Layer> layers_;
};

namespace detail {

    inline std::string_view kind_name(LayerKind k)
    {
        switch (k) {
        case LayerKind::ConvTranspose: return "conv_transpose";
        case LayerKind::BatchNorm: return "batch_norm";
        case LayerKind::Relu: return "relu";
        case LayerKind::Tanh: return "tanh";
        }
        return "";
    }

    inline float read_f32_le(const std::uint8_t* p)
    {
        std::uint32_t bits = 0;
        std::memcpy(&bits, p, sizeof bits);
        if constexpr (std::endian::native == std::endian::big) {
            bits = __builtin_bswap32(bits);
        }
        return std::bit_cast<float>(bits);
    }

    inline void append_f32_le(std::vector<std::uint8_t>& out, float v)
    {
        auto bits = std::bit_cast<std::uint32_t>(v);
        if constexpr (std::endian::native == std::endian::big) {
            bits = __builtin_bswap32(bits);
        }
        std::uint8_t bytes[4];
        std::memcpy(bytes, &bits, 4);
        out.insert(out.end(), bytes, bytes + 4);
    }

    inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw Error(ErrorCode::Io, "cannot open " + path.string());
        }
        return { std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>() };
    }

    template <class T>
    T require(const nlohmann::json& j, const char* key, const std::string& where)
    {
        if (!j.is_object() || !j.contains(key)) {
            throw Error(ErrorCode::MalformedManifest, where + ": missing '" + key + "'");
        }
        try {
            return j.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorCode::MalformedManifest, where + ": bad value for '" + key + "'");
        }
    }

} // namespace detail

/// Builds validated weights from a parsed manifest and the raw blob bytes.
inline GeneratorWeights parse_weights(const nlohmann::json& manifest, std::span<const std::uint8_t> blob)
{
    if (!manifest.is_array()) {
        throw Error(ErrorCode::MalformedManifest, "manifest must be a JSON array of layer records");
    }

    std::vector<Layer> layers;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const auto& rec = manifest[i];
        const std::string where = "layer " + std::to_string(i);
        Layer layer;
        layer.name = detail::require<std::string>(rec, "name", where);
        const auto kind = detail::require<std::string>(rec, "kind", where);

        std::map<std::string, std::pair<std::vector<int>, std::vector<float>>> tensors;
        const auto records = rec.value("tensors", nlohmann::json::array());
        if (!records.is_array()) {
            throw Error(ErrorCode::MalformedManifest, where + ": 'tensors' must be an array");
        }
        for (const auto& t : records) {
            const auto role = detail::require<std::string>(t, "role", where);
            const auto shape = detail::require<std::vector<int>>(t, "shape", where + "/" + role);
            const auto offset = detail::require<std::uint64_t>(t, "offset", where + "/" + role);
            const auto count = detail::require<std::uint64_t>(t, "count", where + "/" + role);
            std::uint64_t product = 1;
            for (int d : shape) {
                if (d <= 0) {
                    throw Error(ErrorCode::MalformedManifest, where + "/" + role + ": non-positive dimension");
                }
                product *= static_cast<std::uint64_t>(d);
            }
            if (product != count) {
                throw Error(ErrorCode::MalformedManifest, where + "/" + role + ": count does not match shape");
            }
            if (offset + count * 4 > blob.size()) {
                throw Error(ErrorCode::TruncatedBlob,
                    where + "/" + role + ": needs bytes up to " + std::to_string(offset + count * 4) + ", blob has "
                        + std::to_string(blob.size()));
            }
            std::vector<float> values(count);
            for (std::uint64_t k = 0; k < count; ++k) {
                values[k] = detail::read_f32_le(blob.data() + offset + k * 4);
            }
            tensors[role] = { shape, std::move(values) };
        }

        auto take = [&](const std::string& role, std::size_t rank) -> std::pair<std::vector<int>, std::vector<float>> {
            auto it = tensors.find(role);
            if (it == tensors.end()) {
                throw Error(ErrorCode::MalformedManifest, where + ": missing tensor '" + role + "'");
            }
            if (it->second.first.size() != rank) {
                throw Error(ErrorCode::ShapeMismatch, where + "/" + role + ": expected rank " + std::to_string(rank));
            }
            return it->second;
        };

        if (kind == "conv_transpose") {
            layer.kind = LayerKind::ConvTranspose;
            layer.stride = detail::require<int>(rec, "stride", where);
            layer.padding = detail::require<int>(rec, "padding", where);
            auto [shape, values] = take("weight", 4);
            if (shape[2] != shape[3]) {
                throw Error(ErrorCode::ShapeMismatch, where + ": only square kernels are supported");
            }
            layer.in_channels = shape[0];
            layer.out_channels = shape[1];
            layer.kernel = shape[2];
            layer.weight = std::move(values);
            if (tensors.contains("bias")) {
                auto [bshape, bvalues] = take("bias", 1);
                layer.bias = std::move(bvalues);
            }
        } else if (kind == "batch_norm") {
            layer.kind = LayerKind::BatchNorm;
            layer.eps = rec.value("eps", 1e-5);
            layer.scale = take("scale", 1).second;
            layer.shift = take("shift", 1).second;
            layer.running_mean = take("running_mean", 1).second;
            layer.running_var = take("running_var", 1).second;
        } else if (kind == "relu") {
            layer.kind = LayerKind::Relu;
        } else if (kind == "tanh") {
            layer.kind = LayerKind::Tanh;
        } else {
            throw Error(ErrorCode::MalformedManifest, where + ": unknown layer kind '" + kind + "'");
        }
        layers.push_back(std::move(layer));
    }
    return GeneratorWeights(std::move(layers));
}

inline GeneratorWeights load_weights(const std::filesystem::path& manifest_path, const std::filesystem::path& blob_path)
{
    std::ifstream in(manifest_path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + manifest_path.string());
    }
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedManifest, manifest_path.string() + ": " + e.what());
    }
    const auto blob = detail::read_file_bytes(blob_path);
    return parse_weights(manifest, blob);
}

struct SerializedWeights {
    nlohmann::json manifest;
    std::vector<std::uint8_t> blob;
};

/// Inverse of parse_weights.
inline SerializedWeights serialize_weights(const GeneratorWeights& weights)
{
    SerializedWeights out { nlohmann::json::array(), {} };
    auto add_tensor = [&](nlohmann::json& rec, const std::string& role, std::vector<int> shape,
                          const std::vector<float>& values) {
        rec["tensors"].push_back({ { "role", role }, { "shape", shape }, { "offset", out.blob.size() },
            { "count", values.size() } });
        for (float v : values) {
            detail::append_f32_le(out.blob, v);
        }
    };
    for (const auto& layer : weights.layers()) {
        nlohmann::json rec { { "name", layer.name }, { "kind", detail::kind_name(layer.kind) },
            { "tensors", nlohmann::json::array() } };
        if (layer.kind == LayerKind::ConvTranspose) {
            rec["stride"] = layer.stride;
            rec["padding"] = layer.padding;
            add_tensor(rec, "weight", { layer.in_channels, layer.out_channels, layer.kernel, layer.kernel },
                layer.weight);
            if (!layer.bias.empty()) {
                add_tensor(rec, "bias", { layer.out_channels }, layer.bias);
            }
        } else if (layer.kind == LayerKind::BatchNorm) {
            const int c = static_cast<int>(layer.scale.size());
            rec["eps"] = layer.eps;
            add_tensor(rec, "scale", { c }, layer.scale);
            add_tensor(rec, "shift", { c }, layer.shift);
            add_tensor(rec, "running_mean", { c }, layer.running_mean);
            add_tensor(rec, "running_var", { c }, layer.running_var);
        }
        out.manifest.push_back(std::move(rec));
    }
    return out;
}

inline void save_weights(const GeneratorWeights& weights, const std::filesystem::path& manifest_path,
    const std::filesystem::path& blob_path)
{
    const auto s = serialize_weights(weights);
    std::ofstream m(manifest_path);
    std::ofstream b(blob_path, std::ios::binary);
    if (!m || !b) {
        throw Error(ErrorCode::Io, "cannot write weights to " + manifest_path.string());
    }
    m << s.manifest.dump(2) << '\n';
    b.write(reinterpret_cast<const char*>(s.blob.data()), static_cast<std::streamsize>(s.blob.size()));
}

/// The four-stage DCGAN-style generator: 10x1x1 -> 256x4x4 -> 128x8x8 ->
/// 64x16x16 -> 7x32x32, kernel 4, with batch norm + ReLU after the first three
/// stages and tanh at the end. Parameters are drawn from N(0, 0.02) (batch
/// norm scale from N(1, 0.02)), which is only useful for tests and smoke runs.
inline GeneratorWeights make_reference_weights(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> init(0.0f, 0.02f);
    auto fill = [&](std::size_t n, float mean) {
        std::vector<float> v(n);
        for (auto& x : v) {
            x = mean + init(rng);
        }
        return v;
    };

    constexpr std::array<int, 5> channels { kLatentSize, 256, 128, 64, kTileTypeCount };
    constexpr std::array<int, 4> strides { 1, 2, 2, 2 };
    constexpr std::array<int, 4> paddings { 0, 1, 1, 1 };

    std::vector<Layer> layers;
    for (std::size_t stage = 0; stage < 4; ++stage) {
        Layer conv;
        conv.name = "deconv" + std::to_string(stage + 1);
        conv.kind = LayerKind::ConvTranspose;
        conv.in_channels = channels[stage];
        conv.out_channels = channels[stage + 1];
        conv.kernel = 4;
        conv.stride = strides[stage];
        conv.padding = paddings[stage];
        conv.weight = fill(static_cast<std::size_t>(conv.in_channels) * conv.out_channels * 16, 0.0f);
        layers.push_back(std::move(conv));

        const auto c = static_cast<std::size_t>(channels[stage + 1]);
        if (stage < 3) {
            Layer bn;
            bn.name = "bn" + std::to_string(stage + 1);
            bn.kind = LayerKind::BatchNorm;
            bn.scale = fill(c, 1.0f);
            bn.shift = fill(c, 0.0f);
            bn.running_mean = fill(c, 0.0f);
            bn.running_var = std::vector<float>(c, 1.0f);
            layers.push_back(std::move(bn));
            Layer relu;
            relu.name = "relu" + std::to_string(stage + 1);
            relu.kind = LayerKind::Relu;
            layers.push_back(std::move(relu));
        } else {
            Layer tanh;
            tanh.name = "tanh";
            tanh.kind = LayerKind::Tanh;
            layers.push_back(std::move(tanh));
        }
    }
    return GeneratorWeights(std::move(layers));
}

/// Transposed 2D convolution. Products of single-precision operands are
/// accumulated in double precision and rounded to float once per output.
inline Volume conv_transpose(const Volume& in, const Layer& layer)
{
    const int k = layer.kernel;
    const int s = layer.stride;
    const int p = layer.padding;
    const int in_h = static_cast<int>(in.height());
    const int in_w = static_cast<int>(in.width());
    const int out_h = (in_h - 1) * s - 2 * p + k;
    const int out_w = (in_w - 1) * s - 2 * p + k;
    const auto out_c = static_cast<std::size_t>(layer.out_channels);

    std::vector<double> acc(out_c * static_cast<std::size_t>(out_h * out_w), 0.0);
    for (std::size_t i = 0; i < in.channels(); ++i) {
        for (int iy = 0; iy < in_h; ++iy) {
            for (int ix = 0; ix < in_w; ++ix) {
                const double v = in(i, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix));
                if (v == 0.0) {
                    continue;
                }
                for (std::size_t o = 0; o < out_c; ++o) {
                    const float* w = &layer.weight[((i * out_c + o) * static_cast<std::size_t>(k)) * static_cast<std::size_t>(k)];
                    double* plane = &acc[o * static_cast<std::size_t>(out_h * out_w)];
                    for (int ky = 0; ky < k; ++ky) {
                        const int y = iy * s - p + ky;
                        if (y < 0 || y >= out_h) {
                            continue;
                        }
                        for (int kx = 0; kx < k; ++kx) {
                            const int x = ix * s - p + kx;
                            if (x < 0 || x >= out_w) {
                                continue;
                            }
                            plane[y * out_w + x] += v * static_cast<double>(w[ky * k + kx]);
                        }
                    }
                }
            }
        }
    }

    Volume out(out_c, static_cast<std::size_t>(out_h), static_cast<std::size_t>(out_w));
    auto data = out.data();
    const auto plane_size = static_cast<std::size_t>(out_h * out_w);
    for (std::size_t o = 0; o < out_c; ++o) {
        const double b = layer.bias.empty() ? 0.0 : static_cast<double>(layer.bias[o]);
        for (std::size_t j = 0; j < plane_size; ++j) {
            data[o * plane_size + j] = static_cast<float>(acc[o * plane_size + j] + b);
        }
    }
    return out;
}

inline void batch_norm_inplace(Volume& v, const Layer& layer)
{
    const auto plane = v.height() * v.width();
    auto data = v.data();
    for (std::size_t c = 0; c < v.channels(); ++c) {
        const double inv = 1.0 / std::sqrt(static_cast<double>(layer.running_var[c]) + layer.eps);
        const double mean = layer.running_mean[c];
        const double scale = layer.scale[c];
        const double shift = layer.shift[c];
        for (std::size_t j = 0; j < plane; ++j) {
            auto& x = data[c * plane + j];
            x = static_cast<float>((static_cast<double>(x) - mean) * inv * scale + shift);
        }
    }
}

inline Volume forward(const GeneratorWeights& weights, const LatentVector& z)
{
    Volume v(kLatentSize, 1, 1);
    for (std::size_t i = 0; i < kLatentSize; ++i) {
        v(i, 0, 0) = static_cast<float>(z[i]);
    }
    for (const auto& layer : weights.layers()) {
        switch (layer.kind) {
        case LayerKind::ConvTranspose: v = conv_transpose(v, layer); break;
        case LayerKind::BatchNorm: batch_norm_inplace(v, layer); break;
        case LayerKind::Relu:
            for (auto& x : v.data()) {
                x = x > 0.0f ? x : 0.0f;
            }
            break;
        case LayerKind::Tanh:
            for (auto& x : v.data()) {
                x = std::tanh(x);
            }
            break;
        }
    }
    return v;
}

inline Level generate_level(const GeneratorWeights& weights, const LatentVector& z)
{
    return decode_one_hot(forward(weights, z));
}

/// Anything that maps a latent vector to a level.
class LevelGenerator {
public:
    virtual ~LevelGenerator() = default;
    [[nodiscard]] virtual Level generate(const LatentVector& z) const = 0;
    [[nodiscard]] virtual std::string describe() const = 0;
};

class NetworkGenerator final : public LevelGenerator {
public:
    explicit NetworkGenerator(GeneratorWeights weights)
        : weights_(std::move(weights))
    {
    }

    [[nodiscard]] Level generate(const LatentVector& z) const override { return generate_level(weights_, z); }
    [[nodiscard]] std::string describe() const override
    {
        return "network(" + std::to_string(weights_.layers().size()) + " layers)";
    }
    [[nodiscard]] const GeneratorWeights& weights() const noexcept { return weights_; }

private:
    GeneratorWeights weights_;
};

} // namespace lrqd

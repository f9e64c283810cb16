#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lrqd {

/// Dense channel-major 3D tensor (C x H x W) of single-precision values.
class Volume {
public:
    Volume() = default;
    Volume(std::size_t channels, std::size_t height, std::size_t width, float fill = 0.0f)
        : channels_(channels)
        , height_(height)
        , width_(width)
        , data_(channels * height * width, fill)
    {
    }

    [[nodiscard]] std::size_t channels() const noexcept { return channels_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    float& operator()(std::size_t c, std::size_t y, std::size_t x) noexcept
    {
        return data_[(c * height_ + y) * width_ + x];
    }
    float operator()(std::size_t c, std::size_t y, std::size_t x) const noexcept
    {
        return data_[(c * height_ + y) * width_ + x];
    }

    [[nodiscard]] std::span<float> data() noexcept { return data_; }
    [[nodiscard]] std::span<const float> data() const noexcept { return data_; }

    friend bool operator==(const Volume&, const Volume&) = default;

private:
    std::size_t channels_ = 0;
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<float> data_;
};

} // namespace lrqd

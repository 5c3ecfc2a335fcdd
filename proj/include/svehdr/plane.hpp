#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "svehdr/error.hpp"

namespace svehdr {

/// Axis-aligned rectangle in pixel coordinates of whatever plane it is
/// applied to.
struct Rect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    bool empty() const { return width <= 0 || height <= 0; }
    long long area() const { return empty() ? 0 : static_cast<long long>(width) * height; }
    bool fits_in(int plane_width, int plane_height) const {
        return x >= 0 && y >= 0 && width >= 0 && height >= 0 && x + width <= plane_width &&
               y + height <= plane_height;
    }
    bool operator==(const Rect&) const = default;
};

/// Rectangle of the given size centered in a plane.
inline Rect centered_rect(int plane_width, int plane_height, int width, int height) {
    return Rect{(plane_width - width) / 2, (plane_height - height) / 2, width, height};
}

/// Row-major 2-D array.
template <typename T>
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, T fill = T{}) : width_(width), height_(height) {
        if (width < 0 || height < 0) throw InvalidArgument("plane dimensions must be non-negative");
        data_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(int x, int y) { return data_[index(x, y)]; }
    const T& operator()(int x, int y) const { return data_[index(x, y)]; }

    std::span<T> pixels() { return data_; }
    std::span<const T> pixels() const { return data_; }
    std::span<T> row(int y) { return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)}; }
    std::span<const T> row(int y) const {
        return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }

    bool same_shape(int width, int height) const { return width_ == width && height_ == height; }
    template <typename U>
    bool same_shape(const Plane<U>& other) const {
        return width_ == other.width() && height_ == other.height();
    }

    bool operator==(const Plane&) const = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

}  // namespace svehdr

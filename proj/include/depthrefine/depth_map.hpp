#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace depthrefine {

// Row-major grid of camera-frame z values in meters. 0.0 marks an invalid
// pixel; every other stored value is finite and strictly positive.
class DepthMap {
 public:
  static constexpr float kInvalid = 0.0f;

  DepthMap() = default;
  DepthMap(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float at(int row, int col) const { return data_[index(row, col)]; }
  float& at(int row, int col) { return data_[index(row, col)]; }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }
  std::span<float> row(int r) { return std::span<float>(data_).subspan(index(r, 0), static_cast<std::size_t>(width_)); }

  // Throws InvalidArgument when a value is negative, NaN or infinite.
  void validate() const;

  friend bool operator==(const DepthMap&, const DepthMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

// Sorted, duplicate-free set of row-major pixel indices.
struct PixelSet {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> indices;

  std::size_t size() const { return indices.size(); }
  bool empty() const { return indices.empty(); }
  bool contains(std::uint32_t index) const;
  // One byte per pixel, 1 for members.
  std::vector<std::uint8_t> to_mask() const;

  friend bool operator==(const PixelSet&, const PixelSet&) = default;
};

// Pixels holding a valid depth.
PixelSet pixel_support(const DepthMap& map);

// |a \ b| + |b \ a|
std::size_t symmetric_difference_size(const PixelSet& a, const PixelSet& b);

}  // namespace depthrefine

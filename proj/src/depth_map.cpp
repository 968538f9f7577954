#include "depthrefine/depth_map.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "depthrefine/error.hpp"

namespace depthrefine {

DepthMap::DepthMap(int width, int height) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw Error(ErrorCode::InvalidArgument, "negative depth map size");
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), kInvalid);
}

void DepthMap::validate() const {
  for (float v : data_) {
    if (!std::isfinite(v) || v < 0.0f) {
      throw Error(ErrorCode::InvalidArgument, "depth values must be 0 (invalid) or finite positive");
    }
  }
}

bool PixelSet::contains(std::uint32_t index) const {
  return std::binary_search(indices.begin(), indices.end(), index);
}

std::vector<std::uint8_t> PixelSet::to_mask() const {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  for (auto i : indices) mask[i] = 1;
  return mask;
}

PixelSet pixel_support(const DepthMap& map) {
  PixelSet set{map.width(), map.height(), {}};
  const auto data = map.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i] != DepthMap::kInvalid) set.indices.push_back(static_cast<std::uint32_t>(i));
  }
  return set;
}

std::size_t symmetric_difference_size(const PixelSet& a, const PixelSet& b) {
  std::vector<std::uint32_t> diff;
  std::set_symmetric_difference(a.indices.begin(), a.indices.end(), b.indices.begin(), b.indices.end(),
                                std::back_inserter(diff));
  return diff.size();
}

}  // namespace depthrefine

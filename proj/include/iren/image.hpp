#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iren/errors.hpp"

namespace iren {

/// Value domain an image's intensities live in. Raw is only used at
/// ingestion, before the pipeline normalizes to Unit.
enum class Domain {
  Raw,      // unconstrained finite reals
  Unit,     // [0, 1]
  Byte255,  // [0, 255]
};

/// Dense single-channel image of doubles, row-major. Immutable after
/// construction; all pipeline stages produce fresh images. The constructor
/// enforces finiteness and the domain's value range.
class Image {
 public:
  Image() = default;
  Image(int height, int width, Domain domain, double fill = 0.0);
  Image(int height, int width, Domain domain, std::vector<double> data);

  int height() const { return height_; }
  int width() const { return width_; }
  Domain domain() const { return domain_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double operator()(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  std::span<const double> pixels() const { return data_; }

  bool same_shape(const Image& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  /// Same pixel grid, different values. Validates against `domain`.
  Image with_data(std::vector<double> data, Domain domain) const {
    return Image(height_, width_, domain, std::move(data));
  }

 private:
  int height_ = 0;
  int width_ = 0;
  Domain domain_ = Domain::Raw;
  std::vector<double> data_;
};

struct ImageStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std_dev = 0.0;  // population
};

/// Exact min/max/mean/population-std over all pixels. Image must be non-empty.
ImageStats stats(const Image& img);

/// Affine map of [observed min, observed max] onto the target domain's range.
/// Constant images map to the range midpoint. `target` must be Unit or Byte255.
Image normalize(const Image& img, Domain target);

/// Top of the value range for a domain (1.0 for Unit, 255.0 for Byte255).
double domain_top(Domain d);

/// Round half-to-even, as used by every quantization step in the library.
double round_half_even(double v);

}  // namespace iren

#include "iren/image.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace iren {

namespace {

void validate(int height, int width, Domain domain,
              const std::vector<double>& data) {
  if (height <= 0 || width <= 0) {
    throw std::invalid_argument("Image: dimensions must be positive");
  }
  if (data.size() != static_cast<std::size_t>(height) * width) {
    throw std::invalid_argument("Image: data length does not match height*width");
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  if (domain == Domain::Unit) {
    lo = 0.0;
    hi = 1.0;
  } else if (domain == Domain::Byte255) {
    lo = 0.0;
    hi = 255.0;
  }
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Image: non-finite pixel value");
    }
    if (v < lo || v > hi) {
      throw std::invalid_argument("Image: pixel value " + std::to_string(v) +
                                  " outside domain range");
    }
  }
}

}  // namespace

Image::Image(int height, int width, Domain domain, double fill)
    : Image(height, width, domain,
            std::vector<double>(static_cast<std::size_t>(height) * width, fill)) {}

Image::Image(int height, int width, Domain domain, std::vector<double> data)
    : height_(height), width_(width), domain_(domain), data_(std::move(data)) {
  validate(height_, width_, domain_, data_);
}

double domain_top(Domain d) {
  switch (d) {
    case Domain::Unit:
      return 1.0;
    case Domain::Byte255:
      return 255.0;
    case Domain::Raw:
      break;
  }
  throw std::invalid_argument("domain_top: Raw domain has no range");
}

double round_half_even(double v) {
  // nearbyint honors the default round-to-nearest-even FP mode.
  return std::nearbyint(v);
}

ImageStats stats(const Image& img) {
  if (img.empty()) {
    throw std::invalid_argument("stats: empty image");
  }
  auto px = img.pixels();
  double mn = px[0], mx = px[0];
  double sum = 0.0;
  for (double v : px) {
    mn = std::min(mn, v);
    mx = std::max(mx, v);
    sum += v;
  }
  const double mean = sum / static_cast<double>(px.size());
  double ss = 0.0;
  for (double v : px) {
    const double d = v - mean;
    ss += d * d;
  }
  ImageStats s;
  s.min = mn;
  s.max = mx;
  s.mean = mean;
  s.std_dev = std::sqrt(ss / static_cast<double>(px.size()));
  return s;
}

Image normalize(const Image& img, Domain target) {
  if (target == Domain::Raw) {
    throw std::invalid_argument("normalize: target must be Unit or Byte255");
  }
  if (img.empty()) {
    throw std::invalid_argument("normalize: empty image");
  }
  const double top = domain_top(target);
  const ImageStats s = stats(img);
  std::vector<double> out(img.size());
  auto px = img.pixels();
  if (s.max == s.min) {
    // Degenerate range: a constant frame maps to the range midpoint so
    // batch runs never abort on flat inputs.
    std::fill(out.begin(), out.end(), 0.5 * top);
  } else {
    const double span = s.max - s.min;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = (px[i] - s.min) / span * top;
    }
  }
  return img.with_data(std::move(out), target);
}

}  // namespace iren

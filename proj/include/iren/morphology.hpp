#pragma once

#include <string>
#include <utility>
#include <vector>

#include "iren/image.hpp"

namespace iren {

/// Neighborhood used by geodesic unit steps and reconstruction.
enum class Connectivity { Four, Eight };

/// Flat structuring element: a duplicate-free set of (row, col) offsets
/// anchored at the origin.
class StructuringElement {
 public:
  StructuringElement(std::vector<std::pair<int, int>> offsets, std::string label);

  const std::vector<std::pair<int, int>>& offsets() const { return offsets_; }
  const std::string& label() const { return label_; }

  /// The SE mirrored through the origin; pairs dilation and erosion in the
  /// duality identity erode(f, b) == -dilate(-f, b.reflected()).
  StructuringElement reflected() const;

 private:
  std::vector<std::pair<int, int>> offsets_;
  std::string label_;
};

/// n x n square anchored at its top-left offset (0,0). Even sizes have no
/// center pixel, so a fixed anchor keeps results reproducible.
StructuringElement make_square_se(int n);

/// Side length of the large SE for an h x w frame: floor(min(h,w)/5),
/// clamped to at least 3.
int large_se_side(int height, int width);

/// Flat dilation: per pixel, max of f(x-s, y-t) over the SE domain.
/// Out-of-bounds samples do not contribute; a fully out-of-bounds window
/// leaves the input pixel unchanged.
Image dilate(const Image& f, const StructuringElement& b);

/// Flat erosion: per pixel, min of f(x+s, y+t) over the SE domain.
Image erode(const Image& f, const StructuringElement& b);

/// One geodesic dilation step: unit dilation of the marker over the
/// connectivity neighborhood (center included), clipped from above by the
/// mask. Requires marker <= mask pointwise.
Image geodesic_dilate_unit(const Image& marker, const Image& mask, Connectivity conn);

/// One geodesic erosion step: unit erosion clipped from below by the mask.
/// Requires marker >= mask pointwise.
Image geodesic_erode_unit(const Image& marker, const Image& mask, Connectivity conn);

/// Morphological reconstruction by dilation: the fixpoint of iterated unit
/// geodesic dilation. Fast hybrid algorithm (raster/anti-raster sweeps plus
/// FIFO propagation); exact, matches naive iteration on the lattice.
Image reconstruct_by_dilation(const Image& marker, const Image& mask, Connectivity conn);

/// Morphological reconstruction by erosion, the order-dual of the above.
Image reconstruct_by_erosion(const Image& marker, const Image& mask, Connectivity conn);

/// Two-stage reconstruction chain: opening-by-reconstruction
/// S = R^dilate(erode(t,b) | t) followed by closing-by-reconstruction
/// R^erode(dilate(S,b) | S). Removes bright and dark connected structures
/// smaller than b while preserving contours.
Image gmr(const Image& t, const StructuringElement& b, Connectivity conn);

}  // namespace iren

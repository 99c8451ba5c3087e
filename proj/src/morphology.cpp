#include "iren/morphology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace iren {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_shape(const Image& a, const Image& b, const char* who) {
  if (!a.same_shape(b)) {
    throw ShapeMismatchError(std::string(who) + ": images differ in shape");
  }
}

}  // namespace

StructuringElement::StructuringElement(std::vector<std::pair<int, int>> offsets,
                                       std::string label)
    : offsets_(std::move(offsets)), label_(std::move(label)) {
  if (offsets_.empty()) {
    throw std::invalid_argument("StructuringElement: empty offset set");
  }
  std::set<std::pair<int, int>> seen(offsets_.begin(), offsets_.end());
  if (seen.size() != offsets_.size()) {
    throw std::invalid_argument("StructuringElement: duplicate offsets");
  }
}

StructuringElement StructuringElement::reflected() const {
  std::vector<std::pair<int, int>> refl;
  refl.reserve(offsets_.size());
  for (auto [s, t] : offsets_) refl.emplace_back(-s, -t);
  return StructuringElement(std::move(refl), label_ + "_reflected");
}

StructuringElement make_square_se(int n) {
  if (n < 1) {
    throw std::invalid_argument("make_square_se: side must be >= 1");
  }
  std::vector<std::pair<int, int>> offsets;
  offsets.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) offsets.emplace_back(i, j);
  }
  return StructuringElement(std::move(offsets), "square" + std::to_string(n));
}

int large_se_side(int height, int width) {
  return std::max(3, std::min(height, width) / 5);
}

namespace {

struct SeBox {
  int smin, smax, tmin, tmax;
  bool full_rect_with_origin;
};

SeBox analyze(const StructuringElement& b) {
  SeBox box{0, 0, 0, 0, false};
  bool first = true;
  for (auto [s, t] : b.offsets()) {
    if (first) {
      box = {s, s, t, t, false};
      first = false;
    } else {
      box.smin = std::min(box.smin, s);
      box.smax = std::max(box.smax, s);
      box.tmin = std::min(box.tmin, t);
      box.tmax = std::max(box.tmax, t);
    }
  }
  const std::size_t area =
      static_cast<std::size_t>(box.smax - box.smin + 1) * (box.tmax - box.tmin + 1);
  // offsets are duplicate-free, so a matching count means the box is full
  box.full_rect_with_origin = area == b.offsets().size() && box.smin <= 0 &&
                              box.smax >= 0 && box.tmin <= 0 && box.tmax >= 0;
  return box;
}

// 1D sliding extreme over window [i+lo, i+hi] (lo <= 0 <= hi), clamped to
// the line. Monotonic-deque, O(len) amortized.
template <bool Max>
void sliding_extreme(const double* src, double* dst, int len, int stride,
                     int lo, int hi) {
  std::deque<int> q;  // indices, values monotone from the front
  auto worse = [](double a, double b) { return Max ? a <= b : a >= b; };
  // pre-fill [0+lo, 0+hi) minus the element added at i=0
  for (int j = 0; j < std::min(hi, len); ++j) {
    while (!q.empty() && worse(src[q.back() * stride], src[j * stride])) q.pop_back();
    q.push_back(j);
  }
  for (int i = 0; i < len; ++i) {
    const int enter = i + hi;
    if (enter < len) {
      while (!q.empty() && worse(src[q.back() * stride], src[enter * stride]))
        q.pop_back();
      q.push_back(enter);
    }
    while (!q.empty() && q.front() < i + lo) q.pop_front();
    dst[i * stride] = src[q.front() * stride];
  }
}

// Separable dilation/erosion for full-rectangle SEs containing the origin.
template <bool Max>
std::vector<double> rect_extreme(const Image& f, const SeBox& box) {
  const int h = f.height(), w = f.width();
  // window offsets per axis; for dilation the window is the reflected box
  const int row_lo = Max ? -box.smax : box.smin;
  const int row_hi = Max ? -box.smin : box.smax;
  const int col_lo = Max ? -box.tmax : box.tmin;
  const int col_hi = Max ? -box.tmin : box.tmax;

  std::vector<double> tmp(f.size()), out(f.size());
  auto px = f.pixels();
  for (int r = 0; r < h; ++r) {
    sliding_extreme<Max>(px.data() + static_cast<std::size_t>(r) * w,
                         tmp.data() + static_cast<std::size_t>(r) * w, w, 1,
                         col_lo, col_hi);
  }
  for (int c = 0; c < w; ++c) {
    sliding_extreme<Max>(tmp.data() + c, out.data() + c, h, w, row_lo, row_hi);
  }
  return out;
}

template <bool Max>
std::vector<double> generic_extreme(const Image& f, const StructuringElement& b) {
  const int h = f.height(), w = f.width();
  std::vector<double> out(f.size());
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double best = Max ? -kInf : kInf;
      bool any = false;
      for (auto [s, t] : b.offsets()) {
        const int rr = Max ? r - s : r + s;
        const int cc = Max ? c - t : c + t;
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
        const double v = f(rr, cc);
        best = Max ? std::max(best, v) : std::min(best, v);
        any = true;
      }
      out[static_cast<std::size_t>(r) * w + c] = any ? best : f(r, c);
    }
  }
  return out;
}

template <bool Max>
Image extreme_filter(const Image& f, const StructuringElement& b) {
  if (f.empty()) {
    throw std::invalid_argument("morphology: empty image");
  }
  const SeBox box = analyze(b);
  std::vector<double> out = box.full_rect_with_origin ? rect_extreme<Max>(f, box)
                                                      : generic_extreme<Max>(f, b);
  return f.with_data(std::move(out), f.domain());
}

}  // namespace

Image dilate(const Image& f, const StructuringElement& b) {
  return extreme_filter<true>(f, b);
}

Image erode(const Image& f, const StructuringElement& b) {
  return extreme_filter<false>(f, b);
}

namespace {

template <bool Dilation>
Image geodesic_unit(const Image& marker, const Image& mask, Connectivity conn) {
  require_same_shape(marker, mask, "geodesic step");
  const int h = marker.height(), w = marker.width();
  for (std::size_t i = 0; i < marker.size(); ++i) {
    if (Dilation ? marker.pixels()[i] > mask.pixels()[i]
                 : marker.pixels()[i] < mask.pixels()[i]) {
      if (Dilation) throw MarkerExceedsMaskError("geodesic dilation: marker > mask");
      throw MarkerBelowMaskError("geodesic erosion: marker < mask");
    }
  }
  std::vector<double> out(marker.size());
  const bool eight = conn == Connectivity::Eight;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double v = marker(r, c);
      auto take = [&](int rr, int cc) {
        if (rr < 0 || rr >= h || cc < 0 || cc >= w) return;
        const double u = marker(rr, cc);
        v = Dilation ? std::max(v, u) : std::min(v, u);
      };
      take(r - 1, c);
      take(r + 1, c);
      take(r, c - 1);
      take(r, c + 1);
      if (eight) {
        take(r - 1, c - 1);
        take(r - 1, c + 1);
        take(r + 1, c - 1);
        take(r + 1, c + 1);
      }
      const double m = mask(r, c);
      out[static_cast<std::size_t>(r) * w + c] =
          Dilation ? std::min(v, m) : std::max(v, m);
    }
  }
  return marker.with_data(std::move(out), marker.domain());
}

// Fast hybrid reconstruction: one raster sweep, one anti-raster sweep that
// seeds a FIFO queue, then queue-driven propagation. Works on a 1-pixel
// padded grid whose border carries the lattice neutral so neighbor access
// needs no bounds checks; padded cells never enter the queue because their
// marker and mask values agree.
template <bool Dilation>
std::vector<double> reconstruct_core(const Image& marker, const Image& mask,
                                     Connectivity conn) {
  const int h = marker.height(), w = marker.width();
  const int W2 = w + 2, H2 = h + 2;
  const double neutral = Dilation ? -kInf : kInf;
  auto clip = [](double v, double m) {
    return Dilation ? std::min(v, m) : std::max(v, m);
  };
  auto improves = [](double a, double b) {  // a strictly closer to neutral than b
    return Dilation ? a < b : a > b;
  };

  std::vector<double> J(static_cast<std::size_t>(H2) * W2, neutral);
  std::vector<double> I(static_cast<std::size_t>(H2) * W2, neutral);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      J[static_cast<std::size_t>(r + 1) * W2 + (c + 1)] = marker(r, c);
      I[static_cast<std::size_t>(r + 1) * W2 + (c + 1)] = mask(r, c);
    }
  }

  const bool eight = conn == Connectivity::Eight;
  const int plus4[] = {-1, -W2};
  const int plus8[] = {-1, -W2, -W2 - 1, -W2 + 1};
  const int minus4[] = {1, W2};
  const int minus8[] = {1, W2, W2 - 1, W2 + 1};
  const int full4[] = {-1, 1, -W2, W2};
  const int full8[] = {-1, 1, -W2, W2, -W2 - 1, -W2 + 1, W2 - 1, W2 + 1};
  const int* nplus = eight ? plus8 : plus4;
  const int* nminus = eight ? minus8 : minus4;
  const int* nfull = eight ? full8 : full4;
  const int nn = eight ? 4 : 2;
  const int nf = eight ? 8 : 4;

  auto sweep_extreme = [&](int p, const int* nbr) {
    double v = J[p];
    for (int k = 0; k < nn; ++k) {
      const double u = J[p + nbr[k]];
      v = Dilation ? std::max(v, u) : std::min(v, u);
    }
    return v;
  };

  for (int r = 1; r <= h; ++r) {
    for (int c = 1; c <= w; ++c) {
      const int p = r * W2 + c;
      J[p] = clip(sweep_extreme(p, nplus), I[p]);
    }
  }

  std::queue<int> fifo;
  for (int r = h; r >= 1; --r) {
    for (int c = w; c >= 1; --c) {
      const int p = r * W2 + c;
      J[p] = clip(sweep_extreme(p, nminus), I[p]);
      for (int k = 0; k < nn; ++k) {
        const int q = p + nminus[k];
        if (improves(J[q], J[p]) && improves(J[q], I[q])) {
          fifo.push(p);
          break;
        }
      }
    }
  }

  while (!fifo.empty()) {
    const int p = fifo.front();
    fifo.pop();
    for (int k = 0; k < nf; ++k) {
      const int q = p + nfull[k];
      if (improves(J[q], J[p]) && J[q] != I[q]) {
        J[q] = clip(J[p], I[q]);
        fifo.push(q);
      }
    }
  }

  std::vector<double> out(static_cast<std::size_t>(h) * w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out[static_cast<std::size_t>(r) * w + c] =
          J[static_cast<std::size_t>(r + 1) * W2 + (c + 1)];
    }
  }
  return out;
}

}  // namespace

Image geodesic_dilate_unit(const Image& marker, const Image& mask, Connectivity conn) {
  return geodesic_unit<true>(marker, mask, conn);
}

Image geodesic_erode_unit(const Image& marker, const Image& mask, Connectivity conn) {
  return geodesic_unit<false>(marker, mask, conn);
}

Image reconstruct_by_dilation(const Image& marker, const Image& mask,
                              Connectivity conn) {
  require_same_shape(marker, mask, "reconstruct_by_dilation");
  for (std::size_t i = 0; i < marker.size(); ++i) {
    if (marker.pixels()[i] > mask.pixels()[i]) {
      throw MarkerExceedsMaskError("reconstruct_by_dilation: marker > mask");
    }
  }
  return marker.with_data(reconstruct_core<true>(marker, mask, conn),
                          marker.domain());
}

Image reconstruct_by_erosion(const Image& marker, const Image& mask,
                             Connectivity conn) {
  require_same_shape(marker, mask, "reconstruct_by_erosion");
  for (std::size_t i = 0; i < marker.size(); ++i) {
    if (marker.pixels()[i] < mask.pixels()[i]) {
      throw MarkerBelowMaskError("reconstruct_by_erosion: marker < mask");
    }
  }
  return marker.with_data(reconstruct_core<false>(marker, mask, conn),
                          marker.domain());
}

Image gmr(const Image& t, const StructuringElement& b, Connectivity conn) {
  // Stage 1 removes bright structures smaller than b, stage 2 dark ones.
  // Markers are clipped against the mask so SEs that do not contain the
  // origin still satisfy the reconstruction preconditions.
  Image eroded = erode(t, b);
  std::vector<double> m1(eroded.size());
  for (std::size_t i = 0; i < m1.size(); ++i) {
    m1[i] = std::min(eroded.pixels()[i], t.pixels()[i]);
  }
  const Image s = reconstruct_by_dilation(t.with_data(std::move(m1), t.domain()),
                                          t, conn);

  Image dilated = dilate(s, b);
  std::vector<double> m2(dilated.size());
  for (std::size_t i = 0; i < m2.size(); ++i) {
    m2[i] = std::max(dilated.pixels()[i], s.pixels()[i]);
  }
  return reconstruct_by_erosion(s.with_data(std::move(m2), s.domain()), s, conn);
}

}  // namespace iren

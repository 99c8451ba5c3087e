#pragma once

#include <fftw3.h>

#include <span>
#include <vector>

namespace iren::detail {

/// Solves (c0*Id + c1*DtD) x = rhs on an h x w grid, where D is the periodic
/// forward-difference gradient. Diagonal in the DFT basis, so one real FFT
/// pair per solve. Plans use FFTW_ESTIMATE: deterministic and cheap to build.
/// Instances are not thread-safe; create one per concurrent solve.
class ScreenedPoissonSolver {
 public:
  ScreenedPoissonSolver(int height, int width);
  ~ScreenedPoissonSolver();

  ScreenedPoissonSolver(const ScreenedPoissonSolver&) = delete;
  ScreenedPoissonSolver& operator=(const ScreenedPoissonSolver&) = delete;

  void solve(std::span<const double> rhs, double c0, double c1,
             std::span<double> out);

 private:
  int h_, w_, wc_;
  std::vector<double> laplacian_symbol_;  // |dx|^2 + |dy|^2 per frequency
  double* real_ = nullptr;
  fftw_complex* freq_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

}  // namespace iren::detail

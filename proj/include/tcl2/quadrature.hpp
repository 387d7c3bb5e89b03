#pragma once

#include <complex>
#include <functional>

namespace tcl2::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15/31 point) on a finite interval.  Throws
/// NumericalFailure when the error estimate stays above
/// max(rel_tol * |value|, abs_tol).
Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol = 0.0);

/// Same as integrate() but the interval is first cut into pieces no longer
/// than `max_piece`, which keeps oscillatory integrands well resolved.
Result integrate_pieces(const std::function<double(double)>& f, double a, double b,
                        double max_piece, double rel_tol, double abs_tol = 0.0);

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double max_piece, double rel_tol,
                                       double abs_tol = 0.0);

}  // namespace tcl2::quad

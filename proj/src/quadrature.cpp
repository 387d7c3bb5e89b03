#include "tcl2/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tcl2/errors.hpp"

namespace tcl2::quad {

namespace {

constexpr unsigned kMaxDepth = 15;

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol) {
  if (a == b) return {};
  double err = 0.0;
  double l1 = 0.0;
  // Boost 1.74 compares an unscaled per-interval error against a scaled
  // tolerance, which never converges on short intervals.  Integrating over
  // [0, 1] keeps the two on the same footing.
  const double h = b - a;
  const auto g = [&](double u) { return h * f(a + h * u); };
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      g, 0.0, 1.0, kMaxDepth, rel_tol, &err, &l1);
  l1 = std::abs(l1);
  // Boost stops once err <= rel_tol * L1; anything well above that means the
  // depth budget ran out.
  const double allowed = 10.0 * std::max(rel_tol * l1, abs_tol);
  if (!std::isfinite(value) || err > allowed) {
    std::ostringstream msg;
    msg << "quadrature on [" << a << ", " << b << "] did not converge: estimate " << value
        << ", error " << err;
    throw NumericalFailure(msg.str(), err);
  }
  return {value, err};
}

Result integrate_pieces(const std::function<double(double)>& f, double a, double b,
                        double max_piece, double rel_tol, double abs_tol) {
  Result total;
  if (a == b) return total;
  const auto pieces = static_cast<int>(std::ceil(std::abs(b - a) / max_piece));
  const double h = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + k * h;
    const double hi = (k + 1 == pieces) ? b : a + (k + 1) * h;
    const Result r = integrate(f, lo, hi, rel_tol, abs_tol / pieces);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double max_piece, double rel_tol,
                                       double abs_tol) {
  const auto re = integrate_pieces([&](double x) { return f(x).real(); }, a, b, max_piece,
                                   rel_tol, abs_tol);
  const auto im = integrate_pieces([&](double x) { return f(x).imag(); }, a, b, max_piece,
                                   rel_tol, abs_tol);
  return {re.value, im.value};
}

}  // namespace tcl2::quad

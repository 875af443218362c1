#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace clustertet {

using cplx = std::complex<double>;

struct QuadratureResult {
    cplx value;
    double error_estimate = 0.0;
    std::size_t nodes = 0;
};

// Globally adaptive panel Gauss-Legendre quadrature of a complex integrand on
// [a, b].  Each panel is estimated by a 16-point rule on the whole panel and
// on its two halves; the difference is the panel's error estimate.  The panel
// with the largest estimate is bisected until the summed estimate drops below
// abs_tol.  Throws QuadratureNotConverged once max_nodes integrand
// evaluations have been spent.
QuadratureResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                                    std::size_t max_nodes, std::size_t initial_panels = 16);

}  // namespace clustertet

#ifndef VMORT_KERNELS_HPP
#define VMORT_KERNELS_HPP

#include <utility>

#include "vmort/grid.hpp"

namespace vmort {

// Volterra convolution kernels
//
//              Constant   Fractional              Exponential      Gamma
//   K(t)       c          c t^(a-1)/Gamma(a)      c e^(-l t)       c e^(-l t) t^(a-1)/Gamma(a)
//   R(t)       c e^(-ct)  c t^(a-1) E_aa(-c t^a)  c e^(-l t-c t)   c e^(-l t) t^(a-1) E_aa(-c t^a)
//
// where R is the resolvent of the second kind (K*R = R*K = K - R) and
// E_ab is the Mittag-Leffler function. alpha = H + 1/2 links the
// fractional order to the Hurst index; alpha > 1 gives long memory.

enum class KernelFamily { constant, fractional, exponential, gamma };

struct KernelSpec {
    KernelFamily family = KernelFamily::constant;
    double c = 1.0;      // scale, > 0
    double alpha = 1.0;  // fractional order in (0.5, 2); ignored by constant/exponential
    double lambda = 0.0; // decay rate >= 0; ignored by constant/fractional

    void validate() const;
    bool uses_alpha() const {
        return family == KernelFamily::fractional || family == KernelFamily::gamma;
    }
    // Singular at t=0 when the power t^(alpha-1) has negative exponent.
    bool singular_at_zero() const { return uses_alpha() && alpha < 1.0; }
};

KernelSpec constant_kernel(double c = 1.0);
KernelSpec fractional_kernel(double c, double alpha);
KernelSpec exponential_kernel(double c, double lambda);
KernelSpec gamma_kernel(double c, double alpha, double lambda);

// E_{alpha,beta}(z) = sum_n z^n / Gamma(alpha n + beta), to ~1e-10 relative.
// Power series with term-ratio stopping for z >= -15, asymptotic expansion
// -sum_{k>=1} z^-k / Gamma(beta - alpha k) below that.
double mittag_leffler(double alpha, double beta, double z);

// Closed forms from the table above. t = 0 is a domain error for kernels
// singular there.
double eval_kernel(const KernelSpec& spec, double t);
double eval_resolvent(const KernelSpec& spec, double t);

// Exact antiderivative I(t) = int_0^t K(s) ds; exists for all four
// families (regularised incomplete gamma for the gamma family). Used for
// the product-integration cell weights.
double kernel_integral(const KernelSpec& spec, double t);

// Cell weights W[m] = int_{(m-1)dt}^{m dt} K(s) ds for m = 1..n.
std::vector<double> kernel_cell_weights(const KernelSpec& spec, double dt, std::size_t n);

// Samples K on the grid {0, dt, ..., n dt}. K(0) is taken as the limit for
// regular families and is a domain error for singular ones.
GridFunction sample_kernel(const KernelSpec& spec, double dt, std::size_t n);
GridFunction sample_resolvent(const KernelSpec& spec, double dt, std::size_t n);

// (f*g)(t_i) = int_0^{t_i} f(t_i - s) g(s) ds by product-trapezoidal
// quadrature. Both grids must start at 0 and share dt.
GridFunction convolve(const GridFunction& f, const GridFunction& g);

// Solves R = F - F*R (Volterra equation of the second kind) by forward
// stepping with trapezoidal weights.
GridFunction resolvent_second_kind(const GridFunction& F);

// R_B = resolvent of -K B, E_B = K - R_B*K, both tabulated on
// {0, dt, ..., horizon}. These drive the conditional-mean formula.
struct ResolventPair {
    GridFunction r_b;
    GridFunction e_b;
};
ResolventPair e_b(const KernelSpec& spec, double B, double horizon, double dt);

} // namespace vmort

#endif

#ifndef VMORT_MORTALITY_HPP
#define VMORT_MORTALITY_HPP

#include <string>

#include "vmort/kernels.hpp"
#include "vmort/path.hpp"
#include "vmort/riccati.hpp"

namespace vmort {

// Baseline hazard m(t) as a piecewise-linear table over age in years.
// Empty table means m = 0. Values are clamped to the endpoints outside the
// table range.
struct HazardCurve {
    std::vector<double> ages;
    std::vector<double> rates;

    bool empty() const { return ages.empty(); }
    double value(double t) const;
    double integral(double a, double b) const; // exact for the linear interpolant
    void validate() const;
};

// Makeham-style generator m(t) = a + b c^t, tabulated yearly; stands in
// for an external life table.
HazardCurve gompertz_makeham_curve(double a, double b, double c, double age_max = 120.0,
                                   double step = 1.0);

// Two-column CSV (age_years, hazard_per_year), header optional.
HazardCurve load_hazard_csv(const std::string& path);

// Mortality state: mu_t = m(t) + eta X_t where X solves the stochastic
// Volterra integral equation
//
//   X_t = X_0 + int_0^t K(t-s) b(s, X_s) ds + int_0^t K(t-s) sigma(X_s) dW_s
//
// with affine coefficients b(s,x) = b0(s) + b_x x and a(x) = sigma(x)^2 =
// A0 + A1 x. A mean-reverting lam (theta - x) drift maps to b0 = lam*theta,
// b_x = -lam.
struct AffineVolterraModel {
    double x0 = 0.0;
    StepFunction b0 = StepFunction::constant(0.0);
    double b_x = 0.0;
    double A0 = 0.0;
    double A1 = 0.0;
    double eta = 0.0;
    HazardCurve m;
    KernelSpec kernel;

    void validate() const; // affine structure: A0 >= 0, A1 >= 0
    double drift(double t, double x) const { return b0.value(t) + b_x * x; }
    double sigma(double x) const;
    double mu(double t, double x) const { return m.value(t) + eta * x; }

    RiccatiSolution solve_psi(double horizon, double dt) const;
    std::uint64_t psi_id() const { return riccati_model_id(kernel, eta, b_x, A1); }
};

struct SurvivalQuery {
    double t = 0.0;
    double T = 0.0;
};

// Precomputed resolvent machinery shared across evaluations of one model
// on one grid (the O(n^2) part of an evaluator); optional fast path for
// batch work.
struct MeanKit {
    GridFunction e_b;
    GridFunction cum_r_b;
    GridFunction cum_e_b;
};
MeanKit make_mean_kit(const AffineVolterraModel& model, double horizon, double dt);

// Conditional-mean / survival machinery for one realized history.
//
//   E[X_s | F_t] = (1 - int_0^s R_B) X_0 + int_0^s E_B(s-u) b0(u) du
//                  + sum_{u <= t} E_B(s-u) sigma(X_u) dW_u
//
//   g(t,T) = exp( -int_t^T m - eta int_t^T E[X_s|F_t] ds
//                 + 1/2 int_t^T psi(T-s)^2 a(E[X_s|F_t]) ds )
//
// The exp(int_0^t mu) factor of the transform cancels against the realized
// part of the mean integral, so only [t, T] integrals are evaluated.
// future_drift_shift adds a constant to b0 on (t, s] only (Girsanov-tilted
// future dynamics with the realized window unchanged).
class SurvivalEvaluator {
public:
    SurvivalEvaluator(const AffineVolterraModel& model, const RiccatiSolution* psi,
                      const SamplePath& path, double t, double t_max,
                      double future_drift_shift = 0.0, const MeanKit* kit = nullptr);

    double conditional_mean(double s) const; // realized value for s <= t
    double y_value(double T) const;
    double survival(double T) const; // g(t,T)

    double t() const { return t_; }
    double t_max() const { return t_max_; }

private:
    void require_psi() const;
    double mean_integral(double T) const;   // int_t^T E[X_s|F_t] ds
    double psi_quadratic(double T) const;   // 1/2 int_t^T psi(T-s)^2 a(mean) ds

    const AffineVolterraModel& model_;
    const RiccatiSolution* psi_;
    const SamplePath& path_;
    double t_, t_max_, dt_;
    std::size_t it_;                 // grid index of t
    std::size_t n_;                  // grid index of t_max
    std::vector<double> mean_;       // E[X_s|F_t] on s-grid [t, t_max]
    std::vector<double> cum_mean_;   // int_t^{s} mean
    GridFunction psi_sq_cum_;        // int_0^tau psi^2 (when psi given)
    double cum_x_to_t_ = 0.0;        // int_0^t X (realized)
};

// E[X_s | F_t] (single-shot convenience over the evaluator).
double conditional_mean(const AffineVolterraModel& model, const SamplePath& path, double t,
                        double s);

// Y_t(T) of the exponential transform.
double y_value(const AffineVolterraModel& model, const RiccatiSolution& psi,
               const SamplePath& path, double t, double T);

// Survival probability g(t,T).
double survival_probability(const AffineVolterraModel& model, const RiccatiSolution& psi,
                            const SamplePath& path, const SurvivalQuery& query);

} // namespace vmort

#endif

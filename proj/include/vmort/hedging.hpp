#ifndef VMORT_HEDGING_HPP
#define VMORT_HEDGING_HPP

#include <span>

#include "vmort/pricing.hpp"
#include "vmort/simulation.hpp"

namespace vmort {

// Mean-variance hedging of a pension book with a longevity bond and a
// zero-coupon bond over [0, T0], instruments maturing at T > T0.
//
// The value-process pair behind the feedback control:
//
//   P(t) = e^{-int_t^T0 (theta^2 + phi^2)} / E^hat[e^{-2 int_t^T0 r} | F_t]
//   Q(t) = -P(t) [ Q0(t) + c Bac(t,T0) ]
//   Q0(t) = int_t^T0 Bac(t,s) ( k1 E[z] E^ac[mu_s | H_t]
//                               + k2 E^ac[e^{-int_0^s mu} | H_t] ) ds
//
// where Bac is the acute-measure bond and E^ac the acute-measure
// (risk-price-tilted) mortality expectations.
struct HedgePlanParams {
    AffineVolterraModel mortality; // VV with mu = X (eta = 1, no baseline)
    AffineRateModel rates;
    double phi = 0.1;      // market price of mortality risk
    double vartheta = 0.1; // market price of rate risk
    double k1 = 1.0;       // claim intensity scale
    double k2 = 10.0;      // annuity outflow scale
    ClaimLaw claim_law{ClaimLaw::Kind::exponential, 2.0};
    double phi_ra = 3000.0; // risk aversion
    double T0 = 5.0;        // hedge horizon
    double T = 15.0;        // instrument maturity
    double m0 = 2000.0;     // initial wealth

    void validate() const;
};

// Parameters plus every deterministic grid the per-step quantities need,
// prepared once at a fixed dt.
struct HedgePlan {
    HedgePlanParams p;
    double dt = 1.0 / 250.0;
    double sigma_mu = 0.0; // sqrt(A0), constant by the VV restriction

    GridFunction psi1;        // psi1 = psi2: psi = (-1 - b1 psi) * K on [0, T]
    GridFunction e_b_grid;    // E_B on [0, T0]
    GridFunction cum_e_b;     // int_0^tau E_B
    GridFunction cum_r_b;     // int_0^tau R_B
    GridFunction cum_psi_sq;  // int_0^tau psi^2
    std::vector<double> base_mean; // deterministic part of E[X_s] on [0, T0]
    std::vector<double> alpha1, beta1; // double-discount coefficients per tau
    std::vector<double> alpha2, beta2; // acute-bond coefficients per tau
    std::vector<double> sigma_l_grid;  // -psi1(T - t) sigma_mu per t in [0, T0]
    std::vector<double> sigma_b_grid;  // -beta~(t, T) sigma_r per t in [0, T0]

    std::size_t n_steps() const { return alpha1.size() - 1; }
};

HedgePlan prepare_hedge_plan(const HedgePlanParams& params, double dt);

struct HedgeQuantities {
    double P = 1.0;
    double Q0 = 0.0;
    double Q = 0.0;
    double b_acute_T0 = 1.0;
    double eta12 = 0.0; // eta1 = (0, eta12)
    double eta21 = 0.0, eta22 = 0.0;
    double sigma_l = 0.0, sigma_b = 0.0;
};

// Walks one scenario, maintaining the acute conditional-mean state of the
// history incrementally; quantities(i, ...) is O(remaining steps).
class HedgeEngine {
public:
    HedgeEngine(const HedgePlan& plan);

    void begin_path();
    // fold in step i's innovation after its quantities were consumed
    void push_increment(std::size_t i, double dw, double x_i, double x_ip1);
    HedgeQuantities quantities(std::size_t i, double r_i, double c) const;

private:
    const HedgePlan& plan_;
    std::vector<double> stoch_; // sum_j E_B(s_k - t_j) sigma dW_j over the history
    double cum_x_ = 0.0;        // realized int_0^t X
};

struct HedgeState {
    double t = 0.0;
    double M = 0.0;
    double r = 0.0;
    HedgeQuantities q;
};

// Full per-state quantity assembly from a realized path (single-shot API;
// the wealth simulator uses the incremental engine instead).
HedgeState hedge_state(const HedgePlan& plan, double t, const SamplePath& path, double r_t,
                       double M, double c);

std::pair<double, double> hedge_vols(const HedgePlan& plan, double t);
double p_value(const HedgePlan& plan, double t, double r_t);
std::pair<double, double> q_values(const HedgePlan& plan, double t, const SamplePath& path,
                                   double r_t, double c);
std::pair<std::pair<double, double>, std::pair<double, double>> eta_coeffs(
    const HedgePlan& plan, double t, const SamplePath& path, double r_t, double c);

// Closed-form optimal amounts (longevity bond, bond) given the state and
// the optimal target mean M_bar.
std::pair<double, double> optimal_strategy(const HedgePlan& plan, const HedgeState& state,
                                           double M_bar);

// The general feedback form u*_c = -Sigma^{-1} [ (nu + sigma_S' eta1 / P) M
// + (Q nu + sigma_S' eta2) / P ], evaluated by explicit 2x2 algebra.
std::pair<double, double> optimal_feedback_control(const HedgePlan& plan,
                                                   const HedgeState& state);

// M_bar* attaining the outer minimum of the embedded target problem.
double m_bar_star(const HedgePlan& plan, double P0, double Q0_0, double acuteB0);

enum class HedgeStrategy { volterra, markov, unhedged };

struct HedgeRunOptions {
    double u1_scale = 1.0; // strategy perturbations for optimality probes
    double u2_scale = 1.0;
    std::size_t n_dump_paths = 0; // trajectories to retain
    int threads = 0;              // 0 = hardware
    double target_c_override = 0.0;
    bool use_target_override = false;
};

struct WealthPoint {
    double t, M, u1, u2, claims_to_date;
};

struct HedgeRun {
    std::vector<double> terminal;                // per-path terminal wealth
    std::vector<std::vector<WealthPoint>> paths; // first n_dump_paths trajectories
    double c_used = 0.0;
    double mean_terminal = 0.0;
    double variance_terminal = 0.0; // population convention
    double objective = 0.0;         // Var - phi_ra/2 * mean
    double inner_objective = 0.0;   // E[(M(T0) - c)^2]
};

// Simulates hedged wealth under the chosen strategy against scenarios
// generated by the plan's (true) mortality model. strategy = markov
// re-derives every hedge quantity under a constant kernel but trades in
// the same market; unhedged holds only the bank account.
HedgeRun simulate_hedged_wealth(const HedgePlan& plan, HedgeStrategy strategy,
                                const RngPolicy& rng, std::size_t n_paths, double dt,
                                const HedgeRunOptions& opts = {});

double mv_objective(std::span<const double> terminal_wealth, double phi_ra);

// Diagnostic: P(0)(M0 + Q(0)/P(0))^2 + I(0) with I(0) estimated by Monte
// Carlo over the jump-variance and unhedgeable-diffusion integrand.
double objective_closed_form(const HedgePlan& plan, double c, const RngPolicy& rng,
                             std::size_t n_paths);

} // namespace vmort

#endif

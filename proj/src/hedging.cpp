#include "vmort/hedging.hpp"

#include <algorithm>
#include <cmath>

#include "vmort/parallel.hpp"

namespace vmort {

namespace {

constexpr double kVolEps = 1e-14;

double r_level(const AffineRateModel& m, double z) { return m.lambda0 + m.lambda1 * z; }

} // namespace

void HedgePlanParams::validate() const {
    mortality.validate();
    rates.validate();
    if (mortality.A1 != 0.0)
        throw ModelError("HedgePlan: hedging needs a constant mortality volatility (A1 = 0)");
    if (mortality.eta != 1.0 || !mortality.m.empty())
        throw ModelError("HedgePlan: hedging assumes mu = X (eta = 1, zero baseline)");
    if (!mortality.b0.is_constant())
        throw ModelError("HedgePlan: hedging assumes a constant drift level");
    if (!(T0 < T)) throw InputError("HedgePlan: require T0 < T");
    if (k1 < 0.0 || k2 < 0.0) throw InputError("HedgePlan: k1, k2 must be nonnegative");
}

HedgePlan prepare_hedge_plan(const HedgePlanParams& params, double dt) {
    params.validate();
    HedgePlan plan;
    plan.p = params;
    plan.dt = dt;
    plan.sigma_mu = std::sqrt(params.mortality.A0);

    const std::size_t n = steps_for(params.T0, dt);
    const auto& rm = params.rates;
    const double sr = rm.sigma_r;

    const RiccatiSolution psi =
        solve_riccati_volterra(params.mortality.kernel, 1.0, params.mortality.b_x, params.mortality.A0,
                               0.0, params.T, dt);
    plan.psi1 = psi.psi;
    {
        std::vector<double> p2(plan.psi1.size());
        for (std::size_t i = 0; i < p2.size(); ++i) p2[i] = plan.psi1[i] * plan.psi1[i];
        plan.cum_psi_sq = GridFunction(0.0, dt, std::move(p2)).cumulative_integral();
    }

    const ResolventPair rp = e_b(params.mortality.kernel, params.mortality.b_x, params.T0, dt);
    plan.e_b_grid = rp.e_b;
    plan.cum_e_b = rp.e_b.cumulative_integral();
    plan.cum_r_b = rp.r_b.cumulative_integral();

    const double b0 = params.mortality.b0.values[0];
    plan.base_mean.assign(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k)
        plan.base_mean[k] = params.mortality.x0 * (1.0 - plan.cum_r_b[k]) + b0 * plan.cum_e_b[k];

    const StepFunction theta = StepFunction::constant(params.vartheta);
    plan.alpha1.assign(n + 1, 0.0);
    plan.beta1.assign(n + 1, 0.0);
    plan.alpha2.assign(n + 1, 0.0);
    plan.beta2.assign(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        const double tau = static_cast<double>(k) * dt;
        const BondCoeffs c1 = vasicek_coeffs(rm, 2.0, tau);
        plan.alpha1[k] =
            c1.alpha + vasicek_drift_shift_correction(rm, 2.0, theta.scaled(-2.0 * sr), 0.0, tau);
        plan.beta1[k] = c1.beta;
        const BondCoeffs c2 = vasicek_coeffs(rm, 1.0, tau);
        plan.alpha2[k] =
            c2.alpha + vasicek_drift_shift_correction(rm, 1.0, theta.scaled(-sr), 0.0, tau);
        plan.beta2[k] = c2.beta;
    }

    plan.sigma_l_grid.assign(n + 1, 0.0);
    plan.sigma_b_grid.assign(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * dt;
        plan.sigma_l_grid[i] = -plan.psi1.value(params.T - t) * plan.sigma_mu;
        plan.sigma_b_grid[i] = -vasicek_coeffs(rm, 1.0, params.T - t).beta * sr;
    }
    return plan;
}

HedgeEngine::HedgeEngine(const HedgePlan& plan) : plan_(plan) {
    stoch_.assign(plan.n_steps() + 1, 0.0);
}

void HedgeEngine::begin_path() {
    std::fill(stoch_.begin(), stoch_.end(), 0.0);
    cum_x_ = 0.0;
}

void HedgeEngine::push_increment(std::size_t i, double dw, double x_i, double x_ip1) {
    const double s = plan_.sigma_mu * dw;
    for (std::size_t k = i + 1; k < stoch_.size(); ++k) stoch_[k] += plan_.e_b_grid[k - i] * s;
    cum_x_ += 0.5 * plan_.dt * (x_i + x_ip1);
}

HedgeQuantities HedgeEngine::quantities(std::size_t i, double r_i, double c) const {
    const std::size_t n = plan_.n_steps();
    if (i > n) throw InputError("HedgeEngine: step beyond the horizon");
    const auto& p = plan_.p;
    const double dt = plan_.dt;
    const double sr = p.rates.sigma_r;
    const double tau0 = static_cast<double>(n - i) * dt;

    HedgeQuantities q;
    q.sigma_l = plan_.sigma_l_grid[i];
    q.sigma_b = plan_.sigma_b_grid[i];
    q.P = std::exp(-(p.vartheta * p.vartheta + p.phi * p.phi) * tau0 - plan_.alpha1[n - i] -
                   plan_.beta1[n - i] * r_i);
    q.eta12 = -q.P * plan_.beta1[n - i] * sr;

    if (i == n) {
        q.Q0 = 0.0;
        q.b_acute_T0 = 1.0;
        q.Q = -q.P * c;
        q.eta21 = q.eta22 = 0.0;
        return q;
    }

    const double zbar = p.claim_law.mean;
    const double half_s2 = 0.5 * plan_.sigma_mu * plan_.sigma_mu;
    const double tail = -p.phi * plan_.sigma_mu;

    double q0 = 0.0, e21 = 0.0, e22 = 0.0;
    double cum_acute = 0.0;
    double mean_prev = 0.0;
    double bac_last = 1.0;
    for (std::size_t k = i; k <= n; ++k) {
        const std::size_t m = k - i;
        const double mean_k = plan_.base_mean[k] + stoch_[k] + tail * plan_.cum_e_b[m];
        if (m > 0) cum_acute += 0.5 * dt * (mean_prev + mean_k);
        mean_prev = mean_k;
        const double surv = std::exp(-(cum_x_ + cum_acute) + half_s2 * plan_.cum_psi_sq[m]);
        const double bac = std::exp(plan_.alpha2[m] + plan_.beta2[m] * r_i);
        const double flow = bac * (p.k1 * zbar * mean_k + p.k2 * surv);
        const double w = (k == i || k == n) ? 0.5 : 1.0;
        q0 += w * flow;
        e21 += w * bac * (p.k1 * zbar * plan_.e_b_grid[m] + p.k2 * surv * plan_.psi1[m]);
        e22 += w * flow * plan_.beta2[m];
        if (k == n) bac_last = bac;
    }
    q.Q0 = q0 * dt;
    q.b_acute_T0 = bac_last;
    q.Q = -q.P * (q.Q0 + c * bac_last);
    q.eta21 = -q.P * e21 * dt * plan_.sigma_mu;
    q.eta22 = -q.P * (e22 * dt * sr + c * bac_last * plan_.beta2[n - i] * sr) +
              q.P * (q.Q0 + c * bac_last) * plan_.beta1[n - i] * sr;
    return q;
}

HedgeState hedge_state(const HedgePlan& plan, double t, const SamplePath& path, double r_t,
                       double M, double c) {
    const auto i = path.index_of(t);
    if (i > plan.n_steps()) throw InputError("hedge_state: t beyond the plan horizon");
    if (std::abs(path.dt - plan.dt) > 1e-12)
        throw InputError("hedge_state: path grid does not match the plan grid");
    HedgeEngine engine(plan);
    engine.begin_path();
    for (std::size_t j = 0; j < i; ++j)
        engine.push_increment(j, path.dw[j], path.x[j], path.x[j + 1]);
    HedgeState st;
    st.t = t;
    st.M = M;
    st.r = r_t;
    st.q = engine.quantities(i, r_t, c);
    return st;
}

std::pair<double, double> hedge_vols(const HedgePlan& plan, double t) {
    if (t < 0.0 || t > plan.p.T0) throw InputError("hedge_vols: t outside [0, T0]");
    if (plan.p.T - t > plan.psi1.back_time() + 1e-9)
        throw InputError("hedge_vols: psi1 horizon too short");
    const double sl = -plan.psi1.value(plan.p.T - t) * plan.sigma_mu;
    const double sb = -vasicek_coeffs(plan.p.rates, 1.0, plan.p.T - t).beta * plan.p.rates.sigma_r;
    return {sl, sb};
}

double p_value(const HedgePlan& plan, double t, double r_t) {
    if (t < 0.0 || t > plan.p.T0 + 1e-12) throw InputError("p_value: t outside [0, T0]");
    if (t == plan.p.T0) return 1.0;
    const double tau = plan.p.T0 - t;
    const auto& rm = plan.p.rates;
    const BondCoeffs c1 = vasicek_coeffs(rm, 2.0, tau);
    const double corr = vasicek_drift_shift_correction(
        rm, 2.0, StepFunction::constant(plan.p.vartheta).scaled(-2.0 * rm.sigma_r), 0.0, tau);
    const double v2 = plan.p.vartheta * plan.p.vartheta + plan.p.phi * plan.p.phi;
    return std::exp(-v2 * tau - (c1.alpha + corr) - c1.beta * r_t);
}

std::pair<double, double> q_values(const HedgePlan& plan, double t, const SamplePath& path,
                                   double r_t, double c) {
    const HedgeState st = hedge_state(plan, t, path, r_t, 0.0, c);
    return {st.q.Q0, st.q.Q};
}

std::pair<std::pair<double, double>, std::pair<double, double>> eta_coeffs(
    const HedgePlan& plan, double t, const SamplePath& path, double r_t, double c) {
    const HedgeState st = hedge_state(plan, t, path, r_t, 0.0, c);
    return {{0.0, st.q.eta12}, {st.q.eta21, st.q.eta22}};
}

std::pair<double, double> optimal_strategy(const HedgePlan& plan, const HedgeState& state,
                                           double M_bar) {
    const auto& q = state.q;
    if (std::abs(q.sigma_l) < kVolEps || std::abs(q.sigma_b) < kVolEps)
        throw SingularityError("optimal_strategy: vanishing instrument volatility", state.t);
    const double c = M_bar + 0.25 * plan.p.phi_ra;
    const double bracket = state.M - q.Q0 - c * q.b_acute_T0;
    const double u1 = -(bracket * plan.p.phi + q.eta21 / q.P) / q.sigma_l;
    const double u2 =
        -(bracket * plan.p.vartheta + (state.M * q.eta12 + q.eta22) / q.P) / q.sigma_b - u1;
    return {u1, u2};
}

std::pair<double, double> optimal_feedback_control(const HedgePlan& plan,
                                                   const HedgeState& state) {
    const auto& q = state.q;
    const double sl = q.sigma_l, sb = q.sigma_b;
    if (std::abs(sl) < kVolEps || std::abs(sb) < kVolEps)
        throw SingularityError("optimal_feedback_control: vanishing instrument volatility",
                               state.t);
    const double nu_b = plan.p.vartheta * sb;
    const double nu_l = nu_b + plan.p.phi * sl;

    // Sigma = sigma_S^T sigma_S, sigma_S = [[sl, 0], [sb, sb]]
    const double s11 = sl * sl + sb * sb, s12 = sb * sb, s22 = sb * sb;
    const double det = s11 * s22 - s12 * s12;
    const double i11 = s22 / det, i12 = -s12 / det, i22 = s11 / det;

    const double se1_1 = sb * q.eta12, se1_2 = sb * q.eta12;       // sigma_S^T eta1
    const double se2_1 = sl * q.eta21 + sb * q.eta22, se2_2 = sb * q.eta22;

    const double a1 = nu_l + se1_1 / q.P;
    const double a2 = nu_b + se1_2 / q.P;
    const double b1 = (q.Q * nu_l + se2_1) / q.P;
    const double b2 = (q.Q * nu_b + se2_2) / q.P;

    const double v1 = a1 * state.M + b1;
    const double v2 = a2 * state.M + b2;
    return {-(i11 * v1 + i12 * v2), -(i12 * v1 + i22 * v2)};
}

double m_bar_star(const HedgePlan& plan, double P0, double Q0_0, double acuteB0) {
    const double pb2 = P0 * acuteB0 * acuteB0;
    if (pb2 == 0.0) throw InputError("m_bar_star: degenerate denominator");
    return (0.25 * plan.p.phi_ra * (1.0 - pb2) + P0 * acuteB0 * (plan.p.m0 - Q0_0)) / pb2;
}

namespace {

struct Scenario {
    SamplePath path;
    RatePath rate;
};

Scenario build_scenario(const HedgePlan& plan, const RngPolicy& rng, std::uint64_t idx) {
    Scenario sc;
    sc.path = simulate_svie(plan.p.mortality, rng, idx, plan.p.T0, plan.dt);
    sc.rate = simulate_rate(plan.p.rates, rng, idx, plan.p.T0, plan.dt);
    integrate_hazard(sc.path, plan.p.mortality);
    // rare discrete-scheme dips of mu below zero run the claim clock on
    // the truncated hazard, mirroring the diffusion's full truncation
    if (plan.p.k1 > 0.0)
        simulate_claims(sc.path, plan.p.k1, plan.p.claim_law, rng, idx, true);
    sc.path.r = sc.rate.r;
    sc.path.dwp = sc.rate.dw;
    return sc;
}

double initial_target(const HedgePlan& plan) {
    HedgeEngine engine(plan);
    engine.begin_path();
    const double r0 = r_level(plan.p.rates, plan.p.rates.z0);
    const HedgeQuantities q0 = engine.quantities(0, r0, 0.0);
    const double mb = m_bar_star(plan, q0.P, q0.Q0, q0.b_acute_T0);
    return mb + 0.25 * plan.p.phi_ra;
}

} // namespace

HedgeRun simulate_hedged_wealth(const HedgePlan& plan, HedgeStrategy strategy,
                                const RngPolicy& rng, std::size_t n_paths, double dt,
                                const HedgeRunOptions& opts) {
    const HedgePlan* truth = &plan;
    HedgePlan rebuilt;
    if (std::abs(dt - plan.dt) > 1e-12) {
        rebuilt = prepare_hedge_plan(plan.p, dt);
        truth = &rebuilt;
    }

    // the hedger's model of the world; markov re-derives everything with a
    // constant kernel but trades the same instruments
    HedgePlan markov_plan;
    const HedgePlan* believed = truth;
    if (strategy == HedgeStrategy::markov) {
        HedgePlanParams mp = truth->p;
        mp.mortality.kernel = constant_kernel(1.0);
        markov_plan = prepare_hedge_plan(mp, truth->dt);
        believed = &markov_plan;
    }

    const std::size_t n = truth->n_steps();
    const double h = truth->dt;
    const auto& pp = truth->p;

    HedgeRun run;
    run.terminal.assign(n_paths, 0.0);
    run.c_used = (strategy == HedgeStrategy::unhedged) ? 0.0 : initial_target(*believed);
    if (opts.use_target_override) run.c_used = opts.target_c_override;
    const std::size_t n_dump = std::min<std::size_t>(opts.n_dump_paths, n_paths);
    run.paths.assign(n_dump, {});

    parallel_for(n_paths, opts.threads, [&](std::size_t b, std::size_t e) {
        HedgeEngine engine(strategy == HedgeStrategy::unhedged ? *truth : *believed);
        for (std::size_t idx = b; idx < e; ++idx) {
            const Scenario sc = build_scenario(*truth, rng, idx);
            engine.begin_path();
            double M = pp.m0;
            double claims_paid = 0.0;
            std::size_t claim_ix = 0;
            std::vector<WealthPoint>* dump = idx < n_dump ? &run.paths[idx] : nullptr;

            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) * h;
                const double r_i = r_level(pp.rates, sc.rate.r[i]);
                double u1 = 0.0, u2 = 0.0;
                if (strategy != HedgeStrategy::unhedged) {
                    const HedgeQuantities q = engine.quantities(i, r_i, run.c_used);
                    const double bracket = M - q.Q0 - run.c_used * q.b_acute_T0;
                    u1 = -(bracket * pp.phi + q.eta21 / q.P) / q.sigma_l;
                    u2 = -(bracket * pp.vartheta + (M * q.eta12 + q.eta22) / q.P) / q.sigma_b -
                         u1;
                    u1 *= opts.u1_scale;
                    u2 *= opts.u2_scale;
                }
                if (dump) dump->push_back({t, M, u1, u2, claims_paid});

                const double sl_true = truth->sigma_l_grid[i];
                const double sb = truth->sigma_b_grid[i];
                const double nu_b = pp.vartheta * sb;
                const double nu_l = nu_b + pp.phi * sl_true;
                const double pi = pp.k2 * std::exp(-sc.path.int_mu[i]);

                M += (M * r_i + u1 * nu_l + u2 * nu_b - pi) * h + u1 * sl_true * sc.path.dw[i] +
                     (u1 + u2) * sb * sc.path.dwp[i];
                const double t_next = static_cast<double>(i + 1) * h;
                while (claim_ix < sc.path.claims.size() &&
                       sc.path.claims[claim_ix].time <= t_next + 1e-15) {
                    M -= sc.path.claims[claim_ix].size;
                    claims_paid += sc.path.claims[claim_ix].size;
                    ++claim_ix;
                }
                if (strategy != HedgeStrategy::unhedged)
                    engine.push_increment(i, sc.path.dw[i], sc.path.x[i], sc.path.x[i + 1]);
            }
            if (dump) dump->push_back({pp.T0, M, 0.0, 0.0, claims_paid});
            run.terminal[idx] = M;
        }
    });

    run.mean_terminal = pairwise_sum(run.terminal) / static_cast<double>(n_paths);
    std::vector<double> dev2(n_paths), inner(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        const double d = run.terminal[i] - run.mean_terminal;
        dev2[i] = d * d;
        const double e = run.terminal[i] - run.c_used;
        inner[i] = e * e;
    }
    run.variance_terminal = pairwise_sum(dev2) / static_cast<double>(n_paths);
    run.objective = run.variance_terminal - 0.5 * plan.p.phi_ra * run.mean_terminal;
    run.inner_objective = pairwise_sum(inner) / static_cast<double>(n_paths);
    return run;
}

double mv_objective(std::span<const double> terminal_wealth, double phi_ra) {
    if (terminal_wealth.empty()) throw InputError("mv_objective: empty sample");
    const double n = static_cast<double>(terminal_wealth.size());
    const double mean = pairwise_sum(terminal_wealth) / n;
    std::vector<double> dev2(terminal_wealth.size());
    for (std::size_t i = 0; i < terminal_wealth.size(); ++i) {
        const double d = terminal_wealth[i] - mean;
        dev2[i] = d * d;
    }
    return pairwise_sum(dev2) / n - 0.5 * phi_ra * mean;
}

double objective_closed_form(const HedgePlan& plan, double c, const RngPolicy& rng,
                             std::size_t n_paths) {
    const std::size_t n = plan.n_steps();
    const double h = plan.dt;
    const double z2 = plan.p.claim_law.second_moment();

    HedgeEngine probe(plan);
    probe.begin_path();
    const double r0 = r_level(plan.p.rates, plan.p.rates.z0);
    const HedgeQuantities q0 = probe.quantities(0, r0, c);
    const double lead = q0.P * (plan.p.m0 + q0.Q / q0.P) * (plan.p.m0 + q0.Q / q0.P);

    std::vector<double> integrals(n_paths, 0.0);
    parallel_for(n_paths, 0, [&](std::size_t b, std::size_t e) {
        HedgeEngine engine(plan);
        for (std::size_t idx = b; idx < e; ++idx) {
            const Scenario sc = build_scenario(plan, rng, idx);
            engine.begin_path();
            double acc = 0.0;
            for (std::size_t i = 0; i <= n; ++i) {
                const double r_i = r_level(plan.p.rates, sc.rate.r[i]);
                const HedgeQuantities q = engine.quantities(i, r_i, c);
                const double mu = sc.path.x[i];

                // sigma_perp = id - sigma_S Sigma^{-1} sigma_S^T vanishes
                // when both vols are live; keep the algebra for the
                // degenerate branches.
                double quad = 0.0;
                const double sl = q.sigma_l, sb = q.sigma_b;
                const double v1 = q.eta21 / (q.P * q.P); // (eta2 - Q eta1)/P^2, first comp
                const double v2 = (q.eta22 - q.Q * q.eta12) / (q.P * q.P);
                if (std::abs(sl) < kVolEps || std::abs(sb) < kVolEps) {
                    quad = v1 * v1 + v2 * v2;
                } else {
                    quad = 0.0;
                }
                const double integrand = q.P * (plan.p.k1 * mu * z2 + quad);
                acc += (i == 0 || i == n) ? 0.5 * integrand : integrand;
                if (i < n) engine.push_increment(i, sc.path.dw[i], sc.path.x[i], sc.path.x[i + 1]);
            }
            integrals[idx] = acc * h;
        }
    });
    const double i0 = pairwise_sum(integrals) / static_cast<double>(n_paths);
    return lead + i0;
}

} // namespace vmort

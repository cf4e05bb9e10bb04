#include "vmort/mortality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vmort {

void SamplePath::check_consistent() const {
    if (dt <= 0.0) throw InputError("SamplePath: dt must be positive");
    if (x.empty()) throw InputError("SamplePath: x must be nonempty");
    if (!dw.empty() && x.size() != dw.size() + 1)
        throw InputError("SamplePath: x/dw length mismatch");
    if (!int_mu.empty() && int_mu.size() != x.size())
        throw InputError("SamplePath: int_mu/x length mismatch");
    if (!r.empty() && !dwp.empty() && r.size() != dwp.size() + 1)
        throw InputError("SamplePath: r/dwp length mismatch");
}

SamplePath empty_path(double x0, double dt) {
    SamplePath p;
    p.dt = dt;
    p.x = {x0};
    p.int_mu = {0.0};
    return p;
}

double HazardCurve::value(double t) const {
    if (empty()) return 0.0;
    if (t <= ages.front()) return rates.front();
    if (t >= ages.back()) return rates.back();
    const auto it = std::upper_bound(ages.begin(), ages.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - ages.begin()) - 1;
    const double w = (t - ages[i]) / (ages[i + 1] - ages[i]);
    return rates[i] * (1.0 - w) + rates[i + 1] * w;
}

double HazardCurve::integral(double a, double b) const {
    if (b < a) throw InputError("HazardCurve::integral: require a <= b");
    if (empty() || a == b) return 0.0;
    // exact integral of the clamped linear interpolant
    double acc = 0.0;
    // left tail
    if (a < ages.front()) {
        const double hi = std::min(b, ages.front());
        acc += rates.front() * (hi - a);
    }
    for (std::size_t i = 0; i + 1 < ages.size(); ++i) {
        const double lo = std::max(a, ages[i]);
        const double hi = std::min(b, ages[i + 1]);
        if (hi <= lo) continue;
        const double seg = ages[i + 1] - ages[i];
        const double vlo = rates[i] + (rates[i + 1] - rates[i]) * (lo - ages[i]) / seg;
        const double vhi = rates[i] + (rates[i + 1] - rates[i]) * (hi - ages[i]) / seg;
        acc += 0.5 * (vlo + vhi) * (hi - lo);
    }
    if (b > ages.back()) {
        const double lo = std::max(a, ages.back());
        acc += rates.back() * (b - lo);
    }
    return acc;
}

void HazardCurve::validate() const {
    if (ages.size() != rates.size()) throw InputError("HazardCurve: size mismatch");
    for (std::size_t i = 1; i < ages.size(); ++i)
        if (!(ages[i] > ages[i - 1])) throw InputError("HazardCurve: ages must increase");
    for (double r : rates)
        if (!std::isfinite(r)) throw InputError("HazardCurve: non-finite rate");
}

HazardCurve gompertz_makeham_curve(double a, double b, double c, double age_max, double step) {
    if (!(c > 0.0) || !(step > 0.0) || !(age_max > 0.0))
        throw InputError("gompertz_makeham_curve: bad parameters");
    HazardCurve h;
    for (double t = 0.0; t <= age_max + 1e-9; t += step) {
        h.ages.push_back(t);
        h.rates.push_back(a + b * std::pow(c, t));
    }
    h.validate();
    return h;
}

HazardCurve load_hazard_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("load_hazard_csv: cannot open " + path);
    HazardCurve h;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double age, rate;
        if (ss >> age >> rate) {
            h.ages.push_back(age);
            h.rates.push_back(rate);
        } else if (!h.ages.empty()) {
            throw InputError("load_hazard_csv: malformed line: " + line);
        }
        // non-numeric first line treated as header
    }
    if (h.ages.empty()) throw InputError("load_hazard_csv: no rows in " + path);
    h.validate();
    return h;
}

void AffineVolterraModel::validate() const {
    kernel.validate();
    m.validate();
    if (!(A0 >= 0.0) || !(A1 >= 0.0))
        throw ModelError("AffineVolterraModel: a(x) = A0 + A1 x needs A0 >= 0, A1 >= 0");
}

double AffineVolterraModel::sigma(double x) const {
    const double v = A0 + A1 * x;
    return v > 0.0 ? std::sqrt(v) : 0.0; // full truncation
}

RiccatiSolution AffineVolterraModel::solve_psi(double horizon, double dt) const {
    return solve_riccati_volterra(kernel, eta, b_x, A0, A1, horizon, dt);
}

MeanKit make_mean_kit(const AffineVolterraModel& model, double horizon, double dt) {
    ResolventPair rp = e_b(model.kernel, model.b_x, horizon, dt);
    MeanKit kit;
    kit.cum_r_b = rp.r_b.cumulative_integral();
    kit.cum_e_b = rp.e_b.cumulative_integral();
    kit.e_b = std::move(rp.e_b);
    return kit;
}

SurvivalEvaluator::SurvivalEvaluator(const AffineVolterraModel& model, const RiccatiSolution* psi,
                                     const SamplePath& path, double t, double t_max,
                                     double future_drift_shift, const MeanKit* kit)
    : model_(model), psi_(psi), path_(path), t_(t), t_max_(t_max), dt_(path.dt) {
    model_.validate();
    path_.check_consistent();
    if (t < 0.0 || t_max < t) throw InputError("SurvivalEvaluator: require 0 <= t <= t_max");
    it_ = path.index_of(t);
    if (path.x.size() < it_ + 1 || (it_ > 0 && path.dw.size() < it_))
        throw InputError("SurvivalEvaluator: path shorter than t");
    n_ = it_ + steps_for(std::max(t_max - t, dt_), dt_);
    if (psi_ && psi_->model_id != model_.psi_id())
        throw InputError("SurvivalEvaluator: psi solved for a different model");

    MeanKit own;
    if (!kit) {
        own = make_mean_kit(model_, static_cast<double>(n_) * dt_, dt_);
        kit = &own;
    } else if (kit->e_b.size() < n_ + 1 || std::abs(kit->e_b.dt - dt_) > 1e-12) {
        throw InputError("SurvivalEvaluator: mean kit grid too short or mismatched");
    }
    const GridFunction& cum_rb = kit->cum_r_b;
    const GridFunction& cum_eb = kit->cum_e_b;
    const GridFunction& eb = kit->e_b;

    std::vector<double> sdw(it_);
    for (std::size_t j = 0; j < it_; ++j) sdw[j] = model_.sigma(path.x[j]) * path.dw[j];

    const bool const_b0 = model_.b0.is_constant();
    const double b0c = model_.b0.values[0];

    mean_.assign(n_ - it_ + 1, 0.0);
    for (std::size_t k = it_; k <= n_; ++k) {
        double base = model_.x0 * (1.0 - cum_rb[k]);
        if (const_b0) {
            base += b0c * cum_eb[k];
        } else {
            for (std::size_t j = 0; j < k; ++j) {
                const double mid = (static_cast<double>(j) + 0.5) * dt_;
                base += model_.b0.value(mid) * 0.5 * (eb[k - j] + eb[k - j - 1]) * dt_;
            }
        }
        double stoch = 0.0;
        for (std::size_t j = 0; j < it_; ++j) stoch += eb[k - j] * sdw[j];
        mean_[k - it_] = base + stoch + future_drift_shift * cum_eb[k - it_];
    }

    cum_mean_.assign(mean_.size(), 0.0);
    for (std::size_t k = 1; k < mean_.size(); ++k)
        cum_mean_[k] = cum_mean_[k - 1] + 0.5 * dt_ * (mean_[k - 1] + mean_[k]);

    cum_x_to_t_ = 0.0;
    for (std::size_t j = 0; j < it_; ++j)
        cum_x_to_t_ += 0.5 * dt_ * (path.x[j] + path.x[j + 1]);

    if (psi_) {
        std::vector<double> p2(psi_->psi.size());
        for (std::size_t i = 0; i < p2.size(); ++i) p2[i] = psi_->psi[i] * psi_->psi[i];
        psi_sq_cum_ = GridFunction(0.0, psi_->psi.dt, std::move(p2)).cumulative_integral();
    }
}

void SurvivalEvaluator::require_psi() const {
    if (!psi_) throw InputError("SurvivalEvaluator: operation requires a Riccati solution");
}

double SurvivalEvaluator::conditional_mean(double s) const {
    if (s < 0.0) throw InputError("conditional_mean: s must be nonnegative");
    if (s <= t_) {
        const double u = s / dt_;
        const auto i = static_cast<std::size_t>(u);
        if (i + 1 >= path_.x.size()) return path_.x[std::min(i, path_.x.size() - 1)];
        const double w = u - static_cast<double>(i);
        return path_.x[i] * (1.0 - w) + path_.x[i + 1] * w;
    }
    if (s > t_max_ + 0.5 * dt_) throw InputError("conditional_mean: s beyond evaluator horizon");
    const double u = (s - t_) / dt_;
    const auto k = static_cast<std::size_t>(u);
    if (k + 1 >= mean_.size()) return mean_.back();
    const double w = u - static_cast<double>(k);
    return mean_[k] * (1.0 - w) + mean_[k + 1] * w;
}

double SurvivalEvaluator::mean_integral(double T) const {
    if (T < t_ || T > t_max_ + 0.5 * dt_)
        throw InputError("SurvivalEvaluator: maturity outside [t, t_max]");
    const double u = (T - t_) / dt_;
    const auto k = static_cast<std::size_t>(u);
    if (k + 1 >= cum_mean_.size()) return cum_mean_.back();
    const double w = u - static_cast<double>(k);
    return cum_mean_[k] * (1.0 - w) + cum_mean_[k + 1] * w;
}

double SurvivalEvaluator::psi_quadratic(double T) const {
    require_psi();
    const double tau = T - t_;
    if (tau > psi_->horizon() + 1e-9) throw InputError("SurvivalEvaluator: psi horizon too short");
    if (model_.A1 == 0.0) return 0.5 * model_.A0 * psi_sq_cum_.value(tau);
    // trapezoid over the s-grid with the state-dependent diffusion
    const auto kmax = static_cast<std::size_t>(std::llround(tau / dt_));
    double acc = 0.0;
    for (std::size_t k = 0; k <= kmax; ++k) {
        const double ps = psi_->value(tau - static_cast<double>(k) * dt_);
        const double f = ps * ps * (model_.A0 + model_.A1 * mean_[k]);
        acc += (k == 0 || k == kmax) ? 0.5 * f : f;
    }
    return 0.5 * acc * dt_;
}

double SurvivalEvaluator::y_value(double T) const {
    require_psi();
    if (T < t_) throw InputError("y_value: require T >= t");
    if (T == t_) return -model_.eta * cum_x_to_t_;
    return -model_.eta * (cum_x_to_t_ + mean_integral(T)) + psi_quadratic(T);
}

double SurvivalEvaluator::survival(double T) const {
    require_psi();
    if (T < t_) throw InputError("survival: require T >= t");
    if (T == t_) return 1.0;
    const double log_g =
        -model_.m.integral(t_, T) - model_.eta * mean_integral(T) + psi_quadratic(T);
    return std::exp(log_g);
}

double conditional_mean(const AffineVolterraModel& model, const SamplePath& path, double t,
                        double s) {
    if (s <= t) {
        SurvivalEvaluator ev(model, nullptr, path, t, t);
        return ev.conditional_mean(s);
    }
    SurvivalEvaluator ev(model, nullptr, path, t, s);
    return ev.conditional_mean(s);
}

double y_value(const AffineVolterraModel& model, const RiccatiSolution& psi,
               const SamplePath& path, double t, double T) {
    SurvivalEvaluator ev(model, &psi, path, t, std::max(T, t));
    return ev.y_value(T);
}

double survival_probability(const AffineVolterraModel& model, const RiccatiSolution& psi,
                            const SamplePath& path, const SurvivalQuery& query) {
    if (query.T < query.t) throw InputError("survival_probability: require t <= T");
    SurvivalEvaluator ev(model, &psi, path, query.t, query.T);
    return ev.survival(query.T);
}

} // namespace vmort

#include "slicesim/drra.hpp"

#include "slicesim/model.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace slicesim {

DrraContext::DrraContext(const SlotState& slot, const ScenarioConfig& cfg, Matrix saa)
    : cfg_(cfg),
      slot_(slot),
      saa_(std::move(saa)),
      K_(slot.num_embb_users()),
      B_(slot.num_rbs()),
      S_(static_cast<int>(saa_.rows())),
      sigma2_(cfg.noise_power_w()),
      rb_scale_(cfg.rb_bandwidth_hz() * cfg.slot_duration_s * cfg.utility_per_bit_slot()) {
    if (S_ < 1 || saa_.cols() != K_) throw std::invalid_argument("DrraContext: saa must be S x K with S >= 1");
    urllc_capacity_ = urllc_full_rb_rates(slot_, cfg_).colwise().sum().transpose();
    urllc_penalty_ = urllc_dispersion_penalty(slot_, cfg_).sum();
}

double DrraContext::combine(const Vector& rates, Vector* weights) const {
    if (cfg_.risk_neutral) {
        if (weights) weights->setConstant(S_, 1.0 / S_);
        return rates.mean();
    }
    const double mu = cfg_.risk_param;
    const double peak = (mu * rates).maxCoeff();
    Vector e = (mu * rates.array() - peak).exp().matrix();
    const double total = e.sum();
    if (weights) *weights = e / total;
    return (peak + std::log(total / S_)) / mu;
}

Matrix DrraContext::capacities(const Matrix& p) const {
    Matrix cap(S_, K_ * B_);
    for (int b = 0; b < B_; ++b) {
        for (int k = 0; k < K_; ++k) {
            const double snr = p(k, b) * slot_.embb_gain(k, b) / sigma2_;
            auto col = cap.col(k + K_ * b);
            for (int s = 0; s < S_; ++s) col(s) = rb_scale_ * std::log2(1.0 + snr * saa_(s, k));
        }
    }
    return cap;
}

double DrraContext::utility(const Matrix& cap, const Matrix& x, const Vector& w, Matrix* grad_x,
                            Vector* grad_w) const {
    Vector eff(K_ * B_);
    for (int b = 0; b < B_; ++b)
        for (int k = 0; k < K_; ++k) eff(k + K_ * b) = x(k, b) * (1.0 - w(b));
    const Vector rates = cap * eff;
    Vector pi;
    const double g = combine(rates, (grad_x || grad_w) ? &pi : nullptr);
    if (grad_x || grad_w) {
        const Vector g_eff = cap.transpose() * pi;
        if (grad_x) {
            grad_x->resize(K_, B_);
            for (int b = 0; b < B_; ++b)
                for (int k = 0; k < K_; ++k) (*grad_x)(k, b) = g_eff(k + K_ * b) * (1.0 - w(b));
        }
        if (grad_w) {
            grad_w->setZero(B_);
            for (int b = 0; b < B_; ++b)
                for (int k = 0; k < K_; ++k) (*grad_w)(b) -= g_eff(k + K_ * b) * x(k, b);
        }
    }
    return g;
}

double DrraContext::utility_power(const Matrix& x, const Vector& w, const Matrix& p, Matrix* grad_p) const {
    Vector rates = Vector::Zero(S_);
    Matrix slope;
    if (grad_p) slope.resize(S_, K_ * B_);
    for (int b = 0; b < B_; ++b) {
        for (int k = 0; k < K_; ++k) {
            const double eff = x(k, b) * (1.0 - w(b));
            const double gain = slot_.embb_gain(k, b) / sigma2_;
            for (int s = 0; s < S_; ++s) {
                const double a = gain * saa_(s, k);
                const double denom = 1.0 + p(k, b) * a;
                rates(s) += eff * rb_scale_ * std::log2(denom);
                if (grad_p) slope(s, k + K_ * b) = eff * rb_scale_ * a / (denom * std::numbers::ln2);
            }
        }
    }
    Vector pi;
    const double g = combine(rates, grad_p ? &pi : nullptr);
    if (grad_p) {
        const Vector flat = slope.transpose() * pi;
        *grad_p = Eigen::Map<const Matrix>(flat.data(), K_, B_);
    }
    return g;
}

double DrraContext::allocation_utility(const Allocation& alloc) const {
    const Matrix cap = capacities(alloc.p);
    Vector eff(K_ * B_);
    const double M = cfg_.minislots_per_slot;
    for (int b = 0; b < B_; ++b)
        for (int k = 0; k < K_; ++k) eff(k + K_ * b) = alloc.x(k, b) * (1.0 - alloc.z(k, b) / M);
    return combine(cap * eff, nullptr);
}

std::string to_json_line(const SolveReport& r) {
    nlohmann::json j = {
        {"slot", r.slot_index},
        {"iterations", r.iterations},
        {"converged", r.converged},
        {"objective_trace", r.objective_trace},
        {"relaxed_utility", r.relaxed_utility},
        {"rounded_utility", r.rounded_utility},
        {"final_utility", r.final_utility},
        {"rho", r.rho},
        {"delta", r.delta},
        {"threshold_delta", r.threshold_delta},
        {"feasible_urllc", r.feasible_urllc},
        {"inner_failures", r.inner_failures},
        {"wall_time_s", r.wall_time_s},
    };
    return j.dump();
}

namespace {

AscentOptions inner_options(const ScenarioConfig& cfg) {
    AscentOptions o;
    o.max_iterations = cfg.max_inner_iterations;
    o.tolerance = cfg.inner_tolerance;
    return o;
}

Vector flatten(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }
Matrix unflatten(const Vector& v, int rows, int cols) { return Eigen::Map<const Matrix>(v.data(), rows, cols); }

}  // namespace

SubproblemResult solve_rb_allocation(const DrraContext& ctx, const Matrix& p, const Vector& w, const Matrix& x0) {
    const int K = ctx.num_users(), B = ctx.num_rbs();
    const Matrix cap = ctx.capacities(p);
    Objective f = [&](const Vector& v, Vector& grad) {
        Matrix gx;
        const double g = ctx.utility(cap, unflatten(v, K, B), w, &gx, nullptr);
        grad = flatten(gx);
        return g;
    };
    Projection project = [K, B](Eigen::Ref<Vector> v) {
        for (int b = 0; b < B; ++b) project_capped_simplex(v.segment(b * K, K), 1.0);
    };
    Vector v = flatten(x0);
    project(v);
    SubproblemResult out;
    out.ascent = projected_ascent(f, project, v, inner_options(ctx.config()));
    out.value = unflatten(v, K, B);
    return out;
}

SubproblemResult solve_power_allocation(const DrraContext& ctx, const Matrix& x, const Vector& w, const Matrix& p0) {
    const int K = ctx.num_users(), B = ctx.num_rbs();
    const double pmax = ctx.config().max_power_w;
    // Optimize the power share q = p / P_max, which keeps the step scale independent of P_max.
    Objective f = [&](const Vector& q, Vector& grad) {
        Matrix gp;
        const double g = ctx.utility_power(x, w, unflatten(q, K, B) * pmax, &gp);
        grad = flatten(gp) * pmax;
        return g;
    };
    Projection project = [](Eigen::Ref<Vector> v) { project_capped_simplex(v, 1.0); };
    Vector q = flatten(p0) / pmax;
    project(q);
    SubproblemResult out;
    out.ascent = projected_ascent(f, project, q, inner_options(ctx.config()));
    out.value = unflatten(q, K, B) * pmax;
    return out;
}

WeightResult solve_urllc_weights(const DrraContext& ctx, const Matrix& x, const Matrix& p, double mean_arrivals,
                                 const Vector& w0) {
    const ScenarioConfig& cfg = ctx.config();
    const int B = ctx.num_rbs();
    const Matrix cap = ctx.capacities(p);
    Projection project = [](Eigen::Ref<Vector> v) { project_box(v, 0.0, 1.0); };

    WeightResult out;
    out.required_rate = markov_required_rate(cfg.urllc_packet_bits, mean_arrivals, cfg.outage_target);
    const double req = out.required_rate;

    if (req <= 0.0) {
        Objective f = [&](const Vector& w, Vector& grad) { return ctx.utility(cap, x, w, nullptr, &grad); };
        out.w = w0;
        project(out.w);
        out.ascent = projected_ascent(f, project, out.w, inner_options(cfg));
        return out;
    }

    auto slack = [&](const Vector& w) { return ctx.urllc_rate_bound(w) / req - 1.0; };
    const Vector ones = Vector::Ones(B);
    if (slack(ones) < 0.0) {
        out.w = ones;
        out.feasible = false;
        out.violation = -slack(ones);
        return out;
    }

    // Augmented Lagrangian on the single linear constraint h(w) >= 0.
    const Vector dh = ctx.urllc_capacity() / req;
    Vector w = w0;
    project(w);
    const double g_start = ctx.utility(cap, x, w);
    const bool start_feasible = slack(w) >= 0.0;
    double nu = 0.0;
    double rho = std::max(1.0, std::abs(g_start));
    for (int round = 0; round <= 20; ++round) {
        out.penalty_rounds = round + 1;
        Objective f = [&](const Vector& v, Vector& grad) {
            const double g = ctx.utility(cap, x, v, nullptr, &grad);
            const double m = std::max(0.0, nu - rho * slack(v));
            grad += m * dh;
            return g - (m * m - nu * nu) / (2.0 * rho);
        };
        out.ascent = projected_ascent(f, project, w, inner_options(cfg));
        const double h = slack(w);
        nu = std::max(0.0, nu - rho * h);
        if (-h <= 1e-6) break;
        rho *= 2.0;
    }

    // Move toward w = 1 just far enough to close any remaining shortfall.
    if (const double h = slack(w); h < 0.0) {
        const double gap = dh.dot(ones - w);
        const double t = gap > 0.0 ? std::min(1.0, -h / gap) : 1.0;
        w += t * (ones - w);
    }
    if (start_feasible && ctx.utility(cap, x, w) < g_start) w = w0;
    out.w = w;
    out.violation = std::max(0.0, -slack(w));
    return out;
}

IntMatrix weights_to_minislots(const Matrix& w, int minislots) {
    // The small offset keeps exact multiples of 1/M (e.g. 3/7) from flooring one level down.
    return w.unaryExpr([minislots](double v) {
        const int z = static_cast<int>(std::floor(minislots * v + 1e-9));
        return std::clamp(z, 0, minislots);
    });
}

RoundingResult round_rb_allocation(const Matrix& x_relaxed, double eta) {
    const int K = static_cast<int>(x_relaxed.rows()), B = static_cast<int>(x_relaxed.cols());
    RoundingResult out{Matrix::Zero(K, B), 0.0, 0.0, 0};
    for (int b = 0; b < B; ++b) {
        int winners = 0;
        for (int k = 0; k < K; ++k) {
            if (x_relaxed(k, b) >= eta) {
                out.x(k, b) = 1.0;
                ++winners;
            }
        }
        out.threshold_delta = std::max(out.threshold_delta, static_cast<double>(winners - 1));
        if (winners == 1) continue;
        out.x.col(b).setZero();
        int best = 0;
        for (int k = 1; k < K; ++k)
            if (x_relaxed(k, b) > x_relaxed(best, b)) best = k;
        out.x(best, b) = 1.0;
        ++out.repaired_rbs;
    }
    return out;
}

double integrality_gap(const DrraContext& ctx, const Matrix& x_relaxed, const Matrix& x_binary, const Matrix& p,
                       const Vector& w, double alpha, double delta) {
    const Matrix cap = ctx.capacities(p);
    const double relaxed = ctx.utility(cap, x_relaxed, w);
    const double rounded = ctx.utility(cap, x_binary, w);
    if (relaxed == 0.0) return 1.0;
    return (rounded + alpha * delta) / relaxed;
}

DrraResult run_drra(const SlotState& slot, const ScenarioConfig& cfg, const Matrix& saa) {
    const auto started = std::chrono::steady_clock::now();
    const DrraContext ctx(slot, cfg, saa);
    const int K = ctx.num_users(), B = ctx.num_rbs();

    Matrix x = Matrix::Constant(K, B, 1.0 / K);
    Matrix p = Matrix::Constant(K, B, cfg.max_power_w / (static_cast<double>(K) * B));
    Vector w = Vector::Zero(B);

    DrraResult out;
    SolveReport& rep = out.report;
    rep.slot_index = slot.slot_index;
    const double mean_arrivals = cfg.arrival_rate;

    double prev = ctx.utility(ctx.capacities(p), x, w);
    for (int it = 0; it < cfg.max_outer_iterations; ++it) {
        auto rb = solve_rb_allocation(ctx, p, w, x);
        x = rb.value;
        auto pw = solve_power_allocation(ctx, x, w, p);
        p = pw.value;
        auto wr = solve_urllc_weights(ctx, x, p, mean_arrivals, w);
        w = wr.w;
        rep.feasible_urllc = wr.feasible;
        rep.inner_failures += !rb.ascent.converged + !pw.ascent.converged + !wr.ascent.converged;

        const double g = ctx.utility(ctx.capacities(p), x, w);
        rep.objective_trace.push_back(g);
        const double change = prev != 0.0 ? std::abs(prev - g) / std::abs(prev)
                                          : (g == prev ? 0.0 : std::numeric_limits<double>::infinity());
        prev = g;
        if (change <= cfg.epsilon) {
            rep.converged = true;
            break;
        }
    }
    rep.iterations = static_cast<int>(rep.objective_trace.size());
    out.x_relaxed = x;

    const RoundingResult rounded = round_rb_allocation(x, cfg.rounding_threshold);
    rep.delta = rounded.delta;
    rep.threshold_delta = rounded.threshold_delta;
    {
        const Matrix cap = ctx.capacities(p);
        rep.relaxed_utility = ctx.utility(cap, x, w);
        rep.rounded_utility = ctx.utility(cap, rounded.x, w);
    }
    rep.rho = integrality_gap(ctx, x, rounded.x, p, w, cfg.penalty_weight, rounded.delta);

    // Final pass for the binary allocation: power held by other users on an RB
    // is returned to the budget, then the weights are re-fitted.
    p = p.cwiseProduct(rounded.x);
    auto pw = solve_power_allocation(ctx, rounded.x, w, p);
    p = pw.value.cwiseProduct(rounded.x);
    auto wr = solve_urllc_weights(ctx, rounded.x, p, mean_arrivals, w);
    w = wr.w;
    rep.feasible_urllc = wr.feasible;
    rep.inner_failures += !pw.ascent.converged + !wr.ascent.converged;

    Allocation& a = out.alloc;
    a.x = rounded.x;
    a.p = p;
    a.w = rounded.x.array().rowwise() * w.transpose().array();
    a.z = weights_to_minislots(a.w, cfg.minislots_per_slot);
    out.rb_weights = w;
    rep.final_utility = ctx.allocation_utility(a);
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

}  // namespace slicesim

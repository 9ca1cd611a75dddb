#include "slicesim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace slicesim {

void project_capped_simplex(Eigen::Ref<Vector> v, double cap) {
    v = v.cwiseMax(0.0);
    if (v.sum() <= cap) return;
    // Projection onto {y >= 0, sum(y) = cap}: find the threshold tau with
    // sum(max(v - tau, 0)) = cap from the sorted values.
    std::vector<double> s(v.data(), v.data() + v.size());
    std::sort(s.begin(), s.end(), std::greater<>());
    double acc = 0.0;
    double tau = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        acc += s[i];
        const double t = (acc - cap) / static_cast<double>(i + 1);
        if (i + 1 == s.size() || s[i + 1] <= t) {
            tau = t;
            break;
        }
    }
    v = (v.array() - tau).cwiseMax(0.0);
}

void project_box(Eigen::Ref<Vector> v, double lo, double hi) { v = v.cwiseMax(lo).cwiseMin(hi); }

AscentResult projected_ascent(const Objective& f, const Projection& project, Vector& x,
                              const AscentOptions& options) {
    AscentResult result;
    Vector grad(x.size());
    double value = f(x, grad);

    auto residual_of = [&](const Vector& point, const Vector& g) {
        Vector probe = point + g;
        project(probe);
        return (probe - point).cwiseAbs().maxCoeff();
    };

    double step = 1.0;
    const double g_norm = grad.cwiseAbs().maxCoeff();
    if (g_norm > 0) step = 1.0 / g_norm;

    Vector candidate(x.size()), cand_grad(x.size());
    for (int it = 0; it < options.max_iterations; ++it) {
        result.residual = x.size() ? residual_of(x, grad) : 0.0;
        if (result.residual <= options.tolerance) {
            result.converged = true;
            break;
        }
        result.iterations = it + 1;

        double cand_value = value;
        bool accepted = false;
        for (int bt = 0; bt < options.max_backtracks; ++bt) {
            candidate = x + step * grad;
            project(candidate);
            cand_value = f(candidate, cand_grad);
            const double ascent = grad.dot(candidate - x);
            if (std::isfinite(cand_value) && cand_value >= value + options.armijo * ascent) {
                accepted = true;
                break;
            }
            step *= options.shrink;
        }
        if (!accepted) break;

        const Vector s = candidate - x;
        const Vector y = grad - cand_grad;  // ascent: -(g+ - g)
        x = candidate;
        value = cand_value;
        grad = cand_grad;

        const double sy = s.dot(y);
        if (sy > 1e-300) {
            step = std::clamp(s.squaredNorm() / sy, 1e-12, 1e12);
        } else {
            step = std::min(step * 4.0, 1e12);
        }
    }
    if (!result.converged && result.iterations == options.max_iterations) {
        result.residual = residual_of(x, grad);
        result.converged = result.residual <= options.tolerance;
    }
    result.value = value;
    return result;
}

}  // namespace slicesim

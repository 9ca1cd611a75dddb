#pragma once

// Projected-gradient ascent over simple convex sets.

#include "slicesim/types.hpp"

#include <functional>

namespace slicesim {

/// Euclidean projection of `v` onto {y >= 0, sum(y) <= cap}, in place.
void project_capped_simplex(Eigen::Ref<Vector> v, double cap = 1.0);

/// Euclidean projection onto the box [lo, hi]^n, in place.
void project_box(Eigen::Ref<Vector> v, double lo = 0.0, double hi = 1.0);

struct AscentOptions {
    int max_iterations = 500;
    double tolerance = 1e-6;  // on || P(x + g) - x ||_inf
    double armijo = 1e-4;
    double shrink = 0.5;
    int max_backtracks = 60;
};

struct AscentResult {
    int iterations = 0;
    bool converged = false;
    double value = 0.0;
    double residual = 0.0;
};

/// Evaluates the objective at `x` and writes its gradient into `grad`.
using Objective = std::function<double(const Vector& x, Vector& grad)>;
/// Projects onto the feasible set in place.
using Projection = std::function<void(Eigen::Ref<Vector>)>;

/// Maximizes a concave `f` over a convex set. `x` must be feasible on entry
/// and holds the final iterate on return; the value never decreases.
///
/// Steps start from a Barzilai-Borwein estimate and backtrack until the Armijo
/// condition f(x+) >= f(x) + c g.(x+ - x) holds.
AscentResult projected_ascent(const Objective& f, const Projection& project, Vector& x,
                              const AscentOptions& options = {});

}  // namespace slicesim

#include "helpers.hpp"

#include "slicesim/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace slicesim;
using namespace testing;

namespace {

// Projection onto {x >= 0, sum x <= cap} by bisection on the multiplier.
Vector capped_simplex_oracle(const Vector& y, double cap) {
    auto clip = [&](double tau) { return (y.array() - tau).max(0.0).matrix().eval(); };
    if (clip(0.0).sum() <= cap) return clip(0.0);
    double lo = 0.0, hi = y.maxCoeff();
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (clip(mid).sum() > cap ? lo : hi) = mid;
    }
    return clip(hi);
}

}  // namespace

TEST_CASE("capped simplex projection matches the multiplier oracle") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.3, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vector y(1 + trial % 7);
        for (int i = 0; i < y.size(); ++i) y(i) = n(rng);
        const double cap = 0.5 + (trial % 3);
        Vector x = y;
        project_capped_simplex(x, cap);
        const Vector expected = capped_simplex_oracle(y, cap);
        CHECK((x - expected).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(x.sum() <= cap + 1e-9);
        CHECK(x.minCoeff() >= 0.0);
    }
}

TEST_CASE("projection examples") {
    Vector x(3);
    x << 0.2, 0.3, 0.1;
    project_capped_simplex(x, 1.0);
    CHECK(x(0) == doctest::Approx(0.2));
    x << 2.0, 2.0, -1.0;
    project_capped_simplex(x, 1.0);
    CHECK(x(0) == doctest::Approx(0.5));
    CHECK(x(1) == doctest::Approx(0.5));
    CHECK(x(2) == 0.0);

    Vector b(3);
    b << -0.5, 0.5, 1.5;
    project_box(b, 0.0, 1.0);
    CHECK(b(0) == 0.0);
    CHECK(b(1) == 0.5);
    CHECK(b(2) == 1.0);
}

TEST_CASE("projected ascent reaches the constrained optimum of a concave quadratic") {
    // max -|x - c|^2 over the capped simplex is the projection of c.
    Vector c(4);
    c << 0.9, 0.8, -0.2, 0.4;
    const Objective f = [&](const Vector& x, Vector& grad) {
        grad = -2.0 * (x - c);
        return -(x - c).squaredNorm();
    };
    const Projection proj = [](Eigen::Ref<Vector> v) { project_capped_simplex(v, 1.0); };
    Vector x = Vector::Zero(4);
    const auto r = projected_ascent(f, proj, x, {});
    CHECK(r.converged);
    CHECK((x - capped_simplex_oracle(c, 1.0)).cwiseAbs().maxCoeff() < 1e-5);
    CHECK(r.residual <= 1e-6);
}

TEST_CASE("projected ascent never decreases the objective") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = uniform_matrix(5, 5, rng, -1.0, 1.0);
        const Matrix h = -(a.transpose() * a) - 0.1 * Matrix::Identity(5, 5);
        const Vector lin = uniform_matrix(5, 1, rng, -1.0, 1.0);
        std::vector<double> values;
        const Objective f = [&](const Vector& x, Vector& grad) {
            grad = h * x + lin;
            const double v = 0.5 * x.dot(h * x) + lin.dot(x);
            values.push_back(v);
            return v;
        };
        const Projection proj = [](Eigen::Ref<Vector> v) { project_box(v, 0.0, 1.0); };
        Vector x = Vector::Constant(5, 0.5);
        Vector g;
        const double start = f(x, g);
        const auto r = projected_ascent(f, proj, x, {});
        CHECK(r.value >= start - 1e-12);
    }
}

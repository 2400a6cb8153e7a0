#include "kaczlab/problems.hpp"

#include "kaczlab/error.hpp"
#include "kaczlab/rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace kaczlab {

namespace {

using std::numbers::pi;

Vector midpoints(Eigen::Index n, double lo, double hi) {
    const double h = (hi - lo) / static_cast<double>(n);
    Vector grid(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        grid(i) = lo + (static_cast<double>(i) + 0.5) * h;
    }
    return grid;
}

Basis random_orthonormal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Eigen::MatrixXd G(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            G(i, j) = rng.normal();
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
    return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

Vector random_vector(Eigen::Index n, Rng& rng) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = rng.normal();
    }
    return v;
}

}  // namespace

const Vector& LinearProblem::rhs(bool use_noisy) const {
    if (!use_noisy) {
        return b;
    }
    if (!b_noisy) {
        fail(ErrorKind::InvalidInput, "noisy right-hand side requested but not present");
    }
    return *b_noisy;
}

void LinearProblem::validate() const {
    if (A.rows() < 1 || A.cols() < 1) {
        fail(ErrorKind::InvalidInput, "problem matrix must be at least 1x1");
    }
    if (b.size() != A.rows()) {
        fail(ErrorKind::InvalidInput, "b length does not match row count");
    }
    if (b_noisy && b_noisy->size() != A.rows()) {
        fail(ErrorKind::InvalidInput, "b_noisy length does not match row count");
    }
    if (b_noisy && !delta) {
        fail(ErrorKind::InvalidInput, "b_noisy present without a noise level");
    }
    if (delta && !(*delta >= 0.0)) {
        fail(ErrorKind::InvalidInput, "noise level must be nonnegative");
    }
    if (x_true && x_true->size() != A.cols()) {
        fail(ErrorKind::InvalidInput, "x_true length does not match column count");
    }
}

namespace kernels {

double phillips_phi(double u) {
    return std::abs(u) < 3.0 ? 1.0 + std::cos(pi * u / 3.0) : 0.0;
}

double gravity(double s, double t, double depth) {
    const double d = s - t;
    return depth * std::pow(depth * depth + d * d, -1.5);
}

double shaw(double s, double t) {
    const double c = std::cos(s) + std::cos(t);
    const double u = pi * (std::sin(s) + std::sin(t));
    // sinc(u)^2 = 1 - u^2/3 + O(u^4); the cutoff keeps the series exact in fp64.
    const double sinc = std::abs(u) < 1e-8 ? 1.0 : std::sin(u) / u;
    return c * c * sinc * sinc;
}

double shaw_solution(double t) {
    return 2.0 * std::exp(-6.0 * (t - 0.8) * (t - 0.8)) + std::exp(-2.0 * (t + 0.5) * (t + 0.5));
}

double gravity_solution(double t) { return std::sin(pi * t) + 0.5 * std::sin(2.0 * pi * t); }

}  // namespace kernels

LinearProblem gen_phillips(Eigen::Index n) {
    if (n < 2) {
        fail(ErrorKind::InvalidInput, "phillips requires n >= 2");
    }
    const double h = 12.0 / static_cast<double>(n);
    const Vector t = midpoints(n, -6.0, 6.0);

    LinearProblem p;
    p.label = "phillips";
    p.A.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            p.A(i, j) = h * kernels::phillips_phi(t(i) - t(j));
        }
    }
    p.x_true = t.unaryExpr([](double tj) { return kernels::phillips_phi(tj); });
    p.b = p.A * *p.x_true;
    return p;
}

LinearProblem gen_gravity(Eigen::Index n, double depth) {
    if (n < 2) {
        fail(ErrorKind::InvalidInput, "gravity requires n >= 2");
    }
    if (!(depth > 0.0)) {
        fail(ErrorKind::InvalidInput, "gravity depth must be positive");
    }
    const double h = 1.0 / static_cast<double>(n);
    const Vector t = midpoints(n, 0.0, 1.0);

    LinearProblem p;
    p.label = "gravity";
    p.A.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            p.A(i, j) = h * kernels::gravity(t(i), t(j), depth);
        }
    }
    p.x_true = t.unaryExpr([](double tj) { return kernels::gravity_solution(tj); });
    p.b = p.A * *p.x_true;
    return p;
}

LinearProblem gen_shaw(Eigen::Index n) {
    if (n < 2 || n % 2 != 0) {
        fail(ErrorKind::InvalidInput, "shaw requires an even n >= 2");
    }
    const double h = pi / static_cast<double>(n);
    const Vector t = midpoints(n, -pi / 2.0, pi / 2.0);

    LinearProblem p;
    p.label = "shaw";
    p.A.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            p.A(i, j) = h * kernels::shaw(t(i), t(j));
        }
    }
    p.x_true = t.unaryExpr([](double tj) { return kernels::shaw_solution(tj); });
    p.b = p.A * *p.x_true;
    return p;
}

LinearProblem gen_synthetic(Eigen::Index m, Eigen::Index n, Eigen::Index rank, bool consistent,
                            std::uint64_t seed) {
    if (m < 1 || n < 1 || rank < 1 || rank > std::min(m, n)) {
        fail(ErrorKind::InvalidInput, "synthetic problem needs 1 <= rank <= min(m, n)");
    }
    if (!consistent && rank == m) {
        fail(ErrorKind::InvalidInput, "inconsistent synthetic problem needs rank < m");
    }

    Rng rng(seed);
    Vector sigma(rank);
    for (Eigen::Index j = 0; j < rank; ++j) {
        const double frac = rank > 1 ? static_cast<double>(j) / static_cast<double>(rank - 1) : 0.0;
        sigma(j) = std::pow(10.0, -2.0 * frac);
    }

    LinearProblem p;
    p.label = "synthetic";
    p.consistent = consistent;
    Basis Ur;
    for (int attempt = 0;; ++attempt) {
        if (attempt == 64) {
            fail(ErrorKind::NumericalFailure, "could not draw a synthetic matrix without zero rows");
        }
        Ur = random_orthonormal(m, rank, rng);
        const Basis Vr = random_orthonormal(n, rank, rng);
        p.A = Ur * sigma.asDiagonal() * Vr.transpose();
        if (row_norms(p.A).minCoeff() >= 1e-8) {
            break;
        }
    }

    p.x_true = random_vector(n, rng);
    const Vector clean = p.A * *p.x_true;
    p.b = clean;
    if (!consistent) {
        Vector w = random_vector(m, rng);
        w -= Ur * (Ur.transpose() * w);
        w *= 0.1 * clean.norm() / w.norm();
        p.b += w;
    }
    return p;
}

Vector add_noise(const Vector& b, double delta, NoiseMode mode, std::uint64_t seed) {
    if (!(delta >= 0.0)) {
        fail(ErrorKind::InvalidInput, "noise level must be nonnegative");
    }
    const double scale = b.size() > 0 ? delta * b.cwiseAbs().maxCoeff() : 0.0;
    Vector noisy = b;
    switch (mode) {
        case NoiseMode::ConstantOffset:
            noisy.array() += scale;
            break;
        case NoiseMode::SignedUniform: {
            Rng rng(seed);
            for (Eigen::Index i = 0; i < noisy.size(); ++i) {
                noisy(i) += scale * rng.uniform(-1.0, 1.0);
            }
            break;
        }
    }
    return noisy;
}

LinearProblem with_noise(LinearProblem p, double delta, NoiseMode mode, std::uint64_t seed) {
    p.b_noisy = add_noise(p.b, delta, mode, seed);
    p.delta = delta;
    return p;
}

}  // namespace kaczlab

#include "oracles.hpp"

namespace oracles {

namespace {

// One banded solve of u'' + u'/r - u/r^2 = 2D/r with Robin ends
// u' + nu u / r = alpha (1+nu) T(r); Thomas elimination.
double solve_once(int N, double r_query, double r_a, double r_b, double E, double nu,
                  double alpha, double T_a, double T_b) {
    (void)E;
    const double logba = std::log(r_b / r_a);
    const double D = alpha * (1.0 + nu) * (T_b - T_a) / (2.0 * logba);
    auto T = [&](double r) { return T_a + (T_b - T_a) / logba * std::log(r / r_a); };
    const double h = (r_b - r_a) / N;
    std::vector<double> lower(static_cast<std::size_t>(N) + 1, 0.0);
    std::vector<double> diag(static_cast<std::size_t>(N) + 1, 0.0);
    std::vector<double> upper(static_cast<std::size_t>(N) + 1, 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(N) + 1, 0.0);
    for (int i = 1; i < N; ++i) {
        const double r = r_a + i * h;
        lower[static_cast<std::size_t>(i)] = 1.0 / (h * h) - 1.0 / (2.0 * h * r);
        diag[static_cast<std::size_t>(i)] = -2.0 / (h * h) - 1.0 / (r * r);
        upper[static_cast<std::size_t>(i)] = 1.0 / (h * h) + 1.0 / (2.0 * h * r);
        rhs[static_cast<std::size_t>(i)] = 2.0 * D / r;
    }
    // Ghost-node Robin closure at both ends.
    const double ga = alpha * (1.0 + nu) * T(r_a);
    const double gb = alpha * (1.0 + nu) * T(r_b);
    {
        const double cm = 1.0 / (h * h) - 1.0 / (2.0 * h * r_a);
        diag[0] = -2.0 / (h * h) - 1.0 / (r_a * r_a) + cm * (2.0 * h * nu / r_a);
        upper[0] = 2.0 / (h * h);
        rhs[0] = 2.0 * D / r_a + cm * (2.0 * h * ga);
    }
    {
        const double cp = 1.0 / (h * h) + 1.0 / (2.0 * h * r_b);
        diag[static_cast<std::size_t>(N)] =
            -2.0 / (h * h) - 1.0 / (r_b * r_b) - cp * (2.0 * h * nu / r_b);
        lower[static_cast<std::size_t>(N)] = 2.0 / (h * h);
        rhs[static_cast<std::size_t>(N)] = 2.0 * D / r_b - cp * (2.0 * h * gb);
    }
    // Thomas.
    for (int i = 1; i <= N; ++i) {
        const double m = lower[static_cast<std::size_t>(i)] / diag[static_cast<std::size_t>(i - 1)];
        diag[static_cast<std::size_t>(i)] -= m * upper[static_cast<std::size_t>(i - 1)];
        rhs[static_cast<std::size_t>(i)] -= m * rhs[static_cast<std::size_t>(i - 1)];
    }
    std::vector<double> u(static_cast<std::size_t>(N) + 1, 0.0);
    u[static_cast<std::size_t>(N)] =
        rhs[static_cast<std::size_t>(N)] / diag[static_cast<std::size_t>(N)];
    for (int i = N - 1; i >= 0; --i) {
        u[static_cast<std::size_t>(i)] =
            (rhs[static_cast<std::size_t>(i)] -
             upper[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i + 1)]) /
            diag[static_cast<std::size_t>(i)];
    }
    const int idx = static_cast<int>(std::lround((r_query - r_a) / h));
    return u[static_cast<std::size_t>(idx)];
}

}  // namespace

double cylinder_ur_fd(double r_query, double r_a, double r_b, double E, double nu, double alpha,
                      double T_a, double T_b) {
    // Grid sizes chosen so r_query is a node on both levels.
    const double u1 = solve_once(4000, r_query, r_a, r_b, E, nu, alpha, T_a, T_b);
    const double u2 = solve_once(8000, r_query, r_a, r_b, E, nu, alpha, T_a, T_b);
    return (4.0 * u2 - u1) / 3.0;
}

}  // namespace oracles

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lkms {

/// Raised when adaptive quadrature cannot reach the requested tolerance
/// within the refinement budget. Carries the achieved error estimate.
class quadrature_error : public std::runtime_error
{
public:
    quadrature_error(const std::string& msg, double estimate)
        : std::runtime_error(msg), error_estimate(estimate)
    {
    }
    double error_estimate;
};

struct QuadPanel
{
    double integral = 0;
    double error = 0;
};

/// 7-point Gauss / 15-point Kronrod pair on [a, b].
template <class F>
QuadPanel gauss_kronrod_15(F&& f, double a, double b)
{
    // Kronrod abscissae (positive half) and weights; rows 0..3 carry the
    // embedded Gauss-7 weights.
    static const double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static const double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static const double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double center = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);

    double flo[7], fhi[7];
    const double fc = f(center);
    double kronrod = wgk[7] * fc;
    double gauss = wg[3] * fc;
    double resabs = wgk[7] * std::abs(fc);

    for (int i = 0; i < 7; ++i) {
        const double dx = halfwidth * xgk[i];
        flo[i] = f(center - dx);
        fhi[i] = f(center + dx);
        kronrod += wgk[i] * (flo[i] + fhi[i]);
        resabs += wgk[i] * (std::abs(flo[i]) + std::abs(fhi[i]));
        if (i % 2 == 1) gauss += wg[i / 2] * (flo[i] + fhi[i]);
    }

    const double mean = 0.5 * kronrod;
    double resasc = wgk[7] * std::abs(fc - mean);
    for (int i = 0; i < 7; ++i)
        resasc += wgk[i] * (std::abs(flo[i] - mean) + std::abs(fhi[i] - mean));

    kronrod *= halfwidth;
    gauss *= halfwidth;
    resabs *= std::abs(halfwidth);
    resasc *= std::abs(halfwidth);

    double err = std::abs(kronrod - gauss);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = 2.220446049250313e-16;
    err = std::max(err, 50.0 * eps * resabs);
    return {kronrod, err};
}

/**
 * Adaptive quadrature of f over [a, b] by bisection of Gauss-Kronrod panels.
 * Initial panels are no wider than max_panel_width (pass +inf for no cap);
 * the worst panel is bisected until the summed error estimate drops below
 * max(abs_tol, rel_tol * |I|) or a panel would exceed max_depth bisections,
 * in which case a quadrature_error carrying the estimate is thrown.
 */
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol, int max_depth,
                          double max_panel_width, double* err_out = nullptr)
{
    struct Segment
    {
        double a, b, integral, error;
        int depth;
    };

    std::vector<Segment> segs;
    const double width = b - a;
    int n0 = 1;
    if (max_panel_width > 0 && std::isfinite(max_panel_width) && max_panel_width < width)
        n0 = static_cast<int>(std::ceil(width / max_panel_width));
    n0 = std::clamp(n0, 1, 1 << 20);
    segs.reserve(static_cast<std::size_t>(n0) + 64);
    for (int k = 0; k < n0; ++k) {
        const double x0 = a + width * k / n0;
        const double x1 = (k + 1 == n0) ? b : a + width * (k + 1) / n0;
        const QuadPanel p = gauss_kronrod_15(f, x0, x1);
        segs.push_back({x0, x1, p.integral, p.error, 0});
    }

    auto total = [&] {
        double I = 0, E = 0, Iabs = 0;
        for (const Segment& s : segs) {
            I += s.integral;
            E += s.error;
            Iabs += std::abs(s.integral);
        }
        return std::array<double, 3>{I, E, Iabs};
    };

    for (;;) {
        auto [I, E, Iabs] = total();
        const double target = std::max({abs_tol, rel_tol * std::abs(I), 32.0 * 2.22e-16 * Iabs});
        if (E <= target) {
            if (err_out) *err_out = E;
            return I;
        }
        auto worst = std::max_element(segs.begin(), segs.end(),
                                      [](const Segment& l, const Segment& r) { return l.error < r.error; });
        if (worst->depth >= max_depth || segs.size() > 200000) {
            throw quadrature_error("adaptive quadrature did not converge", E);
        }
        const Segment s = *worst;
        const double mid = 0.5 * (s.a + s.b);
        const QuadPanel left = gauss_kronrod_15(f, s.a, mid);
        const QuadPanel right = gauss_kronrod_15(f, mid, s.b);
        *worst = {s.a, mid, left.integral, left.error, s.depth + 1};
        segs.push_back({mid, s.b, right.integral, right.error, s.depth + 1});
    }
}

}  // namespace lkms

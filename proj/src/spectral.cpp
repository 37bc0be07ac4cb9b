#include "isospec/spectral.hpp"

#include "isospec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace isospec::spectral {
namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s += t * t;
    return std::sqrt(s);
}

// Sturm sequence: number of eigenvalues strictly below lambda.
int count_below(const DiscretizedHamiltonian& H, double lambda) {
    const double off2 = H.off * H.off;
    const double pivmin = 16.0 * std::numeric_limits<double>::min() * std::max(1.0, off2);
    int cnt = 0;
    double d = H.diag[0] - lambda;
    if (std::fabs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++cnt;
    for (std::size_t i = 1; i < H.diag.size(); ++i) {
        d = (H.diag[i] - lambda) - off2 / d;
        if (std::fabs(d) < pivmin) d = -pivmin;
        if (d < 0.0) ++cnt;
    }
    return cnt;
}

// Solves (T - lambda I) y = rhs in place, T tridiagonal with constant
// off-diagonal, Gaussian elimination with row pivoting (fill-in limited to a
// second superdiagonal). Exact zeros are nudged so inverse iteration can use
// lambda equal to an eigenvalue.
void solve_shifted(const std::vector<double>& diag, double off, double lambda,
                   std::vector<double>& y) {
    const int m = static_cast<int>(diag.size());
    std::vector<double> B(m), C(m, 0.0), D(m, 0.0);
    for (int i = 0; i < m; ++i) B[i] = diag[i] - lambda;
    for (int i = 0; i + 1 < m; ++i) C[i] = off;
    for (int i = 0; i + 1 < m; ++i) {
        const double a = off; // entry (i+1, i), untouched until this step
        if (std::fabs(B[i]) >= std::fabs(a)) {
            if (B[i] == 0.0) B[i] = 1e-300;
            const double l = a / B[i];
            B[i + 1] -= l * C[i];
            C[i + 1] -= l * D[i];
            y[i + 1] -= l * y[i];
        } else {
            const double l = B[i] / a; // |l| <= 1 after the swap below
            const double bn = B[i + 1], cn = C[i + 1];
            B[i] = a;
            B[i + 1] = C[i] - l * bn;
            C[i + 1] = D[i] - l * cn;
            D[i + 1] = 0.0;
            C[i] = bn;
            D[i] = cn;
            const double yi = y[i];
            y[i] = y[i + 1];
            y[i + 1] = yi - l * y[i];
        }
    }
    for (int i = m - 1; i >= 0; --i) {
        double s = y[i];
        if (i + 1 < m) s -= C[i] * y[i + 1];
        if (i + 2 < m) s -= D[i] * y[i + 2];
        if (B[i] == 0.0) B[i] = 1e-300;
        y[i] = s / B[i];
    }
}

std::vector<double> inverse_iteration(const DiscretizedHamiltonian& H, double lambda,
                                      const std::vector<std::vector<double>>& prev,
                                      std::uint64_t seed) {
    const int m = static_cast<int>(H.diag.size());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(m);
    for (double& t : v) t = dist(rng);
    for (int it = 0; it < 4; ++it) {
        solve_shifted(H.diag, H.off, lambda, v);
        for (const auto& p : prev) {
            double dot = 0.0;
            for (int i = 0; i < m; ++i) dot += v[i] * p[i];
            for (int i = 0; i < m; ++i) v[i] -= dot * p[i];
        }
        const double nrm = norm2(v);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) {
            for (double& t : v) t = dist(rng); // deflated to nothing: restart
            continue;
        }
        for (double& t : v) t /= nrm;
    }
    int imax = 0;
    for (int i = 1; i < m; ++i)
        if (std::fabs(v[i]) > std::fabs(v[imax])) imax = i;
    if (v[imax] < 0.0)
        for (double& t : v) t = -t;
    return v;
}

} // namespace

DiscretizedHamiltonian discretize(const std::function<double(double)>& V, double a, double b,
                                  int n) {
    if (!(b > a)) throw error("discretize: need b > a");
    if (n < 5) throw error("discretize: need at least 5 grid points");
    DiscretizedHamiltonian H;
    H.a = a;
    H.b = b;
    H.n = n;
    H.h = (b - a) / (n - 1);
    const int m = n - 2;
    H.x.resize(m);
    H.diag.resize(m);
    const double inv_h2 = 1.0 / (H.h * H.h);
    H.off = -inv_h2;
    for (int i = 0; i < m; ++i) {
        const double xi = a + (i + 1) * H.h;
        const double vi = V(xi);
        if (!std::isfinite(vi)) throw domain_error("potential is not finite at x = " + fmt(xi));
        H.x[i] = xi;
        H.diag[i] = 2.0 * inv_h2 + vi;
    }
    H.v_edge_min = std::min(V(a), V(b));
    return H;
}

std::vector<double> eigenvalues(const DiscretizedHamiltonian& H, int k) {
    const int m = static_cast<int>(H.diag.size());
    if (k < 1) throw error("eigenvalues: k must be >= 1");
    if (k > m)
        throw error("eigenvalues: k = " + std::to_string(k) + " exceeds the " +
                    std::to_string(m) + " interior points; raise n");
    double lo0 = std::numeric_limits<double>::infinity();
    double hi0 = -lo0;
    const double r = 2.0 * std::fabs(H.off);
    for (double d : H.diag) {
        lo0 = std::min(lo0, d - r);
        hi0 = std::max(hi0, d + r);
    }
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) {
        double lo = lo0, hi = hi0;
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            if (count_below(H, mid) > j)
                hi = mid;
            else
                lo = mid;
        }
        out[j] = 0.5 * (lo + hi);
    }
    // A usable window must contain the ground state. A box-truncated mode runs
    // into the wall with slope ~vmax/W, so its first interior node sits at
    // ~pi*h/W of the peak; a genuinely decayed mode is orders of magnitude
    // below that. Levels at or above V(edge) are box/continuum modes by
    // construction and are exempt (their callers decide what that means).
    if (out[0] < H.v_edge_min) {
        const auto v = inverse_iteration(H, out[0], {}, 0x5deece66dull);
        double vmax = 0.0;
        for (double t : v) vmax = std::max(vmax, std::fabs(t));
        const double edge = std::max(std::fabs(v.front()), std::fabs(v.back()));
        if (edge > 0.5 * (H.h / (H.b - H.a)) * vmax)
            throw window_error("window too small: ground-state amplitude at the box edge is " +
                                   fmt(edge / vmax) + " of its peak; widen the interval",
                               H.a);
    }
    return out;
}

std::vector<std::vector<double>> eigenvectors(const DiscretizedHamiltonian& H,
                                              const std::vector<double>& lambdas) {
    std::vector<std::vector<double>> out;
    out.reserve(lambdas.size());
    for (std::size_t j = 0; j < lambdas.size(); ++j)
        out.push_back(inverse_iteration(H, lambdas[j], out, 0x9e3779b97f4a7c15ull + j));
    return out;
}

SpectrumReport isospectral_check(const family::SuperpotentialSpec& s, double gamma,
                                 family::Window w, int n, int k) {
    auto iff = family::integrating_factor(s, w, s.default_tol);
    family::ParametricFamily fam(iff, gamma);
    if (!fam.regular_on_window()) throw singularity_error(*fam.singularity(), gamma);

    const auto V1 = [&s](double x) { return family::partner_potentials(s, x).V1; };
    const auto V2 = [&s](double x) { return family::partner_potentials(s, x).V2; };
    const auto Vg = [&fam](double x) { return fam.parametric_potential(x); };

    const auto H1 = discretize(V1, w.x_min, w.x_max, n);
    const auto H2 = discretize(V2, w.x_min, w.x_max, n);
    const auto Hg = discretize(Vg, w.x_min, w.x_max, n);

    SpectrumReport rep;
    rep.n = n;
    rep.k = k;
    rep.grid_h = H1.h;
    rep.v1 = eigenvalues(H1, k + 1);
    rep.v2 = eigenvalues(H2, k);
    rep.v1gamma = eigenvalues(Hg, k);

    if (rep.v1.back() >= H1.v_edge_min || rep.v2.back() >= H2.v_edge_min ||
        rep.v1gamma.back() >= Hg.v_edge_min)
        throw unsupported_spectrum_error(
            "a requested level reaches min V(edge): such box levels sample the continuum, "
            "not discrete bound states; lower k or change the potential");

    const auto& gam = iff->cumulative();
    const bool sqrt_mu_normalizable = gam.left_tail().kind == quad::TailKind::finite &&
                                      gam.right_tail().kind == quad::TailKind::finite;
    rep.inserted_zero_mode = !sqrt_mu_normalizable;
    rep.inserted_level =
        rep.inserted_zero_mode ? rep.v1gamma[0] : std::numeric_limits<double>::quiet_NaN();

    const int p = rep.inserted_zero_mode ? 1 : 0;
    for (int i = 0; i + p < k; ++i)
        rep.pair_diffs.push_back(std::fabs(rep.v1gamma[i + p] - rep.v1[i]));
    for (double d : rep.pair_diffs) rep.max_pair_diff = std::max(rep.max_pair_diff, d);

    rep.ladder_offset = sqrt_mu_normalizable ? 1 : 0;
    for (int i = 0; i < k; ++i)
        rep.ladder_diffs.push_back(std::fabs(rep.v2[i] - rep.v1[i + rep.ladder_offset]));
    for (double d : rep.ladder_diffs) rep.max_ladder_diff = std::max(rep.max_ladder_diff, d);

    const std::vector<double> head(rep.v1.begin(), rep.v1.begin() + k);
    const auto vecs = eigenvectors(H1, head);
    for (int j = 0; j < k; ++j) {
        const auto& v = vecs[j];
        const int m = static_cast<int>(v.size());
        std::vector<double> res(m);
        for (int i = 0; i < m; ++i) {
            double t = (H1.diag[i] - head[j]) * v[i];
            if (i > 0) t += H1.off * v[i - 1];
            if (i + 1 < m) t += H1.off * v[i + 1];
            res[i] = t;
        }
        rep.residual_norms.push_back(norm2(res));
    }
    return rep;
}

double zero_mode_residual(const family::ParametricFamily& fam, int n) {
    const family::Window w = fam.window();
    const double h = (w.x_max - w.x_min) / (n - 1);
    std::vector<double> psi(n), pot(n);
    for (int i = 0; i < n; ++i) {
        const double x = (i == n - 1) ? w.x_max : w.x_min + i * h;
        psi[i] = fam.zero_mode(x);
        pot[i] = fam.parametric_potential(x);
    }
    double num = 0.0, den = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double r = -(psi[i - 1] - 2.0 * psi[i] + psi[i + 1]) / (h * h) + pot[i] * psi[i];
        num = std::max(num, std::fabs(r));
        den = std::max(den, std::fabs(psi[i]));
    }
    return num / den;
}

double zero_mode_residual_sqrt_mu(const family::IntegratingFactor& iff, int n) {
    const family::Window w = iff.window();
    const double h = (w.x_max - w.x_min) / (n - 1);
    std::vector<double> psi(n), pot(n);
    for (int i = 0; i < n; ++i) {
        const double x = (i == n - 1) ? w.x_max : w.x_min + i * h;
        psi[i] = std::sqrt(iff.mu(x));
        pot[i] = family::partner_potentials(iff.spec(), x).V1;
    }
    double num = 0.0, den = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double r = -(psi[i - 1] - 2.0 * psi[i] + psi[i + 1]) / (h * h) + pot[i] * psi[i];
        num = std::max(num, std::fabs(r));
        den = std::max(den, std::fabs(psi[i]));
    }
    return num / den;
}

double intertwine_check(const family::SuperpotentialSpec& s, family::Window w, int n,
                        int mode_index) {
    const auto V1 = [&s](double x) { return family::partner_potentials(s, x).V1; };
    const auto V2 = [&s](double x) { return family::partner_potentials(s, x).V2; };
    const auto H1 = discretize(V1, w.x_min, w.x_max, n);
    const auto lams = eigenvalues(H1, mode_index + 1);
    const double lam = lams[mode_index];
    if (lam >= H1.v_edge_min)
        throw unsupported_spectrum_error("level " + std::to_string(mode_index) + " at E = " +
                                         fmt(lam) + " is at or above min V(edge) = " +
                                         fmt(H1.v_edge_min) + ": not a discrete bound state");
    const auto vecs = eigenvectors(H1, lams);
    const auto& v = vecs[mode_index];
    const int m = static_cast<int>(v.size());

    // A v with A = d/dx + phi_p, central differences, Dirichlet extension.
    std::vector<double> av(m);
    for (int i = 0; i < m; ++i) {
        const double left = (i > 0) ? v[i - 1] : 0.0;
        const double right = (i + 1 < m) ? v[i + 1] : 0.0;
        av[i] = (right - left) / (2.0 * H1.h) + s.phi_p(H1.x[i]) * v[i];
    }
    if (mode_index == 0) return norm2(av) / norm2(v);

    const auto H2 = discretize(V2, w.x_min, w.x_max, n);
    std::vector<double> res(m);
    for (int i = 0; i < m; ++i) {
        double t = (H2.diag[i] - lam) * av[i];
        if (i > 0) t += H2.off * av[i - 1];
        if (i + 1 < m) t += H2.off * av[i + 1];
        res[i] = t;
    }
    return norm2(res) / norm2(av);
}

} // namespace isospec::spectral

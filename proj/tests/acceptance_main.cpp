// Acceptance gate: 12 numbered criteria, one PASS/FAIL line each, exit code =
// number of failures. Targets and tolerances are fixed reference values for
// the five bundled superpotentials.

#include "isospec/errors.hpp"
#include "isospec/expr.hpp"
#include "isospec/family.hpp"
#include "isospec/quad.hpp"
#include "isospec/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace fam = isospec::family;
namespace presets = isospec::presets;
namespace spectral = isospec::spectral;
namespace quad = isospec::quad;

namespace {

struct Gate {
    int failures = 0;
    void line(int id, const char* name, bool ok, const std::string& detail) {
        std::printf("%s criterion %2d (%s): %s\n", ok ? "PASS" : "FAIL", id, name,
                    detail.c_str());
        if (!ok) ++failures;
    }
};

std::string fmt(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.7g", v);
    return b;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string timing(double s, double limit) {
    return "[" + fmt(s) + " s" + (limit > 0 ? " < " + fmt(limit) + " s" : "") + "]";
}

} // namespace

int main() {
    Gate g;

    // 1: harmonic critical gammas +-sqrt(pi)/2
    try {
        Timer t;
        const auto s = presets::make("harmonic");
        const auto rep = fam::regular_range(s, s.default_window, 1e-10);
        const double el = t.seconds();
        bool ok = rep.gamma_s.size() == 2 && el < 1.0;
        std::string d;
        for (const auto& b : rep.gamma_s) {
            ok = ok && b.value && std::fabs(std::fabs(*b.value) - 0.886227) <= 1e-5;
            d += (b.side == quad::Side::left ? "left " : "right ") +
                 (b.value ? fmt(*b.value) : std::string("none")) + " ";
        }
        g.line(1, "harmonic gamma_s", ok,
               d + "(target |gamma_s| = 0.886227 +- 1e-5) " + timing(el, 1.0));
    } catch (const std::exception& e) {
        g.line(1, "harmonic gamma_s", false, e.what());
    }

    // 2: case1a critical gamma and one-sided regular set
    try {
        Timer t;
        const auto s = presets::make("case1a");
        const auto rep = fam::regular_range(s, s.default_window, 1e-10);
        const double el = t.seconds();
        const auto& right = rep.gamma_s[1];
        const bool val_ok = right.value && std::fabs(*right.value - (-0.44779)) <= 1e-4;
        const bool left_div = !rep.gamma_s[0].value &&
                              rep.gamma_s[0].tail != quad::TailKind::finite;
        const bool shape_ok = rep.regular.size() == 1 && std::isinf(rep.regular[0].lo) &&
                              rep.regular[0].lo < 0 && right.value &&
                              rep.regular[0].hi == *right.value;
        g.line(2, "case1a gamma_s", val_ok && left_div && shape_ok && el < 1.0,
               "gamma_s = " + (right.value ? fmt(*right.value) : std::string("none")) +
                   " (target -0.44779 +- 1e-4), left tail divergent, regular set "
                   "(-inf, gamma_s) " +
                   timing(el, 1.0));
    } catch (const std::exception& e) {
        g.line(2, "case1a gamma_s", false, e.what());
    }

    // 3: quartic critical gamma
    try {
        Timer t;
        const auto s = presets::make("quartic");
        const auto rep = fam::regular_range(s, s.default_window, 1e-10);
        const double el = t.seconds();
        const auto& right = rep.gamma_s[1];
        const bool val_ok = right.value && std::fabs(*right.value - (-19.3694)) <= 1e-2;
        const bool left_div = !rep.gamma_s[0].value;
        g.line(3, "quartic gamma_s", val_ok && left_div && el < 2.0,
               "gamma_s = " + (right.value ? fmt(*right.value) : std::string("none")) +
                   " (target -19.3694 +- 1e-2), left tail divergent " + timing(el, 2.0));
    } catch (const std::exception& e) {
        g.line(3, "quartic gamma_s", false, e.what());
    }

    // 4: constant preset, exact critical gamma -1/(2c)
    try {
        const auto s = presets::make("constant", 1.0);
        const auto rep = fam::regular_range(s, s.default_window, 1e-10);
        const auto& right = rep.gamma_s[1];
        const bool ok = right.value && std::fabs(*right.value - (-0.5)) <= 1e-9;
        g.line(4, "constant gamma_s", ok,
               "gamma_s = " + (right.value ? fmt(*right.value) : std::string("none")) +
                   " (target -0.5 +- 1e-9)");
    } catch (const std::exception& e) {
        g.line(4, "constant gamma_s", false, e.what());
    }

    // 5: fresnel has no regular gamma; its mu never drops below ~0.167
    try {
        Timer t;
        const auto s = presets::make("fresnel");
        const auto rep = fam::regular_range(s, s.default_window, 1e-10);
        fam::IntegratingFactor iff(s, s.default_window, 1e-10, s.default_n_min);
        double mn = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 20000; ++i) mn = std::min(mn, iff.mu(8.0 * i / 20000.0));
        const double el = t.seconds();
        const bool ok =
            rep.regular.empty() && std::fabs(mn - 0.167016) <= 1e-4 && el < 2.0;
        g.line(5, "fresnel floor", ok,
               "regular set empty = " + std::string(rep.regular.empty() ? "yes" : "no") +
                   ", min mu on [0,8] = " + fmt(mn) + " (target 0.167016 +- 1e-4) " +
                   timing(el, 2.0));
    } catch (const std::exception& e) {
        g.line(5, "fresnel floor", false, e.what());
    }

    // 6: quartic equal-height gamma and peak ordering at gamma = -26
    try {
        Timer t;
        const auto s = presets::make("quartic");
        const auto iff = fam::integrating_factor(s, s.default_window, 1e-10);
        const double gc = fam::find_gamma_c(iff, -49.0, -20.0);
        fam::ParametricFamily f26(iff, -26.0);
        const auto pk = fam::peak_analysis(f26);
        const double el = t.seconds();
        const bool gc_ok = std::fabs(gc - (-28.33)) <= 0.5;
        const bool order_ok = pk.size() == 2 && pk[1].height > pk[0].height;
        g.line(6, "quartic gamma_c", gc_ok && order_ok && el < 10.0,
               "gamma_c = " + fmt(gc) + " (target -28.33 +- 0.5); gamma=-26 peaks h_left = " +
                   (pk.size() == 2 ? fmt(pk[0].height) : std::string("?")) + " < h_right = " +
                   (pk.size() == 2 ? fmt(pk[1].height) : std::string("?")) +
                   " (shallower well wins) " + timing(el, 10.0));
    } catch (const std::exception& e) {
        g.line(6, "quartic gamma_c", false, e.what());
    }

    // 7 and 8: spectra of V1, V1gamma and the V2 ladder
    try {
        Timer t;
        const auto sh = presets::make("harmonic");
        const auto rh = spectral::isospectral_check(sh, 4.0, {-8.0, 8.0}, 2001, 5);
        double ladder_dev = 0.0;
        for (int i = 0; i < 5; ++i)
            ladder_dev = std::max(ladder_dev, std::fabs(rh.v1[i] - 2.0 * i));
        const auto sq = presets::make("quartic");
        const auto rq = spectral::isospectral_check(sq, -37.0, sq.default_window, 2001, 4);
        const double el = t.seconds();

        const bool h_ok = !rh.inserted_zero_mode && rh.max_pair_diff <= 1e-2 &&
                          ladder_dev <= 1e-2;
        const bool q_ok = rq.inserted_zero_mode && rq.max_pair_diff <= 5e-2 &&
                          std::fabs(rq.inserted_level) <= 5e-2;
        g.line(7, "isospectrality", h_ok && q_ok && el < 30.0,
               "harmonic gamma=4: max |V1g - V1| pair diff " + fmt(rh.max_pair_diff) +
                   ", levels vs {0,2,4,6,8} dev " + fmt(ladder_dev) +
                   "; quartic gamma=-37: inserted level " + fmt(rq.inserted_level) +
                   ", max shifted pair diff " + fmt(rq.max_pair_diff) + " " +
                   timing(el, 30.0));

        g.line(8, "V2 ladder", rh.ladder_offset == 1 && rh.max_ladder_diff <= 1e-2,
               "harmonic V2 levels vs V1 levels 1..5: max diff " + fmt(rh.max_ladder_diff));
    } catch (const std::exception& e) {
        g.line(7, "isospectrality", false, e.what());
        g.line(8, "V2 ladder", false, "skipped: " + std::string(e.what()));
    }

    // 9: analytic invariants on 4 presets x 3 regular gammas
    try {
        Timer t;
        struct Pick {
            const char* name;
            double gs[3];
        };
        const Pick picks[] = {
            {"case1a", {-1.0, -2.0, -5.0}},
            {"harmonic", {2.0, 4.0, -3.0}},
            {"quartic", {-26.0, -37.0, -49.0}},
            {"constant", {-1.0, -2.0, -5.0}},
        };
        double w_ric = 0.0, w_log = 0.0, w_res = 0.0, w_peak = 0.0;
        int members = 0, n_peaks = 0;
        for (const auto& p : picks) {
            const auto s = presets::make(p.name);
            const auto iff = fam::integrating_factor(s, s.default_window, 1e-10);
            for (double gv : p.gs) {
                fam::ParametricFamily f(iff, gv);
                ++members;
                const auto w = f.window();
                const double span = w.x_max - w.x_min;
                for (int i = 0; i <= 200; ++i) {
                    const double x = w.x_min + span * (0.002 + 0.996 * i / 200.0);
                    const double h = 1e-4;
                    const double v2 = fam::partner_potentials(s, x).V2;
                    const double pg = f.phi_general(x);
                    const double dg_an = f.phi_general_prime(x);
                    w_ric = std::max(w_ric, std::fabs(dg_an + pg * pg - v2) /
                                                (1.0 + std::fabs(v2)));
                    const double dpsi = (f.zero_mode(x + h) - f.zero_mode(x - h)) / (2.0 * h);
                    w_log = std::max(w_log, std::fabs(-dpsi / f.zero_mode(x) - pg) /
                                                (1.0 + std::fabs(pg)));
                }
                w_res = std::max(w_res, spectral::zero_mode_residual(f, 32001));
                for (const auto& pk : fam::peak_analysis(f)) {
                    ++n_peaks;
                    w_peak = std::max(w_peak, std::fabs(f.phi_general(pk.x)));
                }
            }
        }
        const double el = t.seconds();
        const bool ok = w_ric < 1e-6 && w_log < 1e-5 && w_res < 1e-4 && w_peak < 1e-8 &&
                        n_peaks > 0;
        g.line(9, "family invariants", ok,
               std::to_string(members) + " members: riccati " + fmt(w_ric) + ", log-deriv " +
                   fmt(w_log) + ", zero-mode residual " + fmt(w_res) + " (n=32001), |phi_g| at " +
                   std::to_string(n_peaks) + " peaks " + fmt(w_peak) + " " + timing(el, 0.0));
    } catch (const std::exception& e) {
        g.line(9, "family invariants", false, e.what());
    }

    // 10: appendix normalization
    try {
        const auto s = presets::make("harmonic");
        const auto iff = fam::integrating_factor(s, s.default_window, 1e-10);
        const fam::Window lim = s.default_window;
        const double N = fam::normalization_constant(1.0);
        const double total = quad::integrate(
            [&](double x) {
                const double u = fam::appendix_zero_mode(*iff, 1.0, lim, x);
                return N * N * u * u;
            },
            lim.x_min, lim.x_max, 1e-12);
        bool forbidden = false;
        try {
            fam::normalization_constant(-0.5);
        } catch (const isospec::forbidden_interval_error&) {
            forbidden = true;
        }
        const bool ok = std::fabs(total - 1.0) <= 1e-6 &&
                        std::fabs(N - std::sqrt(2.0)) <= 1e-12 && forbidden;
        g.line(10, "appendix normalization", ok,
               "gamma_a=1: int (N u)^2 = " + fmt(total) + " (target 1 +- 1e-6), N = " + fmt(N) +
                   " (= sqrt 2); gamma_a=-0.5 rejected = " + (forbidden ? "yes" : "no"));
    } catch (const std::exception& e) {
        g.line(10, "appendix normalization", false, e.what());
    }

    // 11: the deformation should vanish as |gamma| -> inf. Only two-sided
    // decaying mu allows that; a divergent tail pins V1gamma - V1 at 4 phi_p'
    // over an O(1) region however large |gamma| grows, so case1a, quartic and
    // constant cannot meet the 1e-4 bound. Reported honestly.
    try {
        struct Pick {
            const char* name;
            double gamma;
        };
        const Pick picks[] = {{"harmonic", 1e6},
                              {"case1a", -1e6},
                              {"quartic", -1e6},
                              {"constant", -1e6}};
        bool ok = true;
        std::string d;
        for (const auto& p : picks) {
            const auto s = presets::make(p.name);
            const auto iff = fam::integrating_factor(s, s.default_window, 1e-10);
            fam::ParametricFamily f(iff, p.gamma);
            const auto w = s.default_window;
            double sup = 0.0;
            for (int i = 0; i <= 2000; ++i) {
                const double x = w.x_min + (w.x_max - w.x_min) * i / 2000.0;
                sup = std::max(sup, std::fabs(f.parametric_potential(x) -
                                              fam::partner_potentials(s, x).V1));
            }
            ok = ok && sup <= 1e-4;
            d += std::string(p.name) + " " + fmt(sup) + " ";
        }
        g.line(11, "large-gamma limit", ok,
               "sup|V1gamma - V1| at |gamma| = 1e6: " + d +
                   "(bound 1e-4; divergent-side tails keep the one-sided presets at O(4 "
                   "phi_p') regardless of gamma)");
    } catch (const std::exception& e) {
        g.line(11, "large-gamma limit", false, e.what());
    }

    // 12: expression layer round-trips and matches finite differences
    try {
        struct Case {
            const char* src;
            const char* var;
            double lo, hi;
        };
        const Case cases[] = {
            {"sqrt(u)", "u", 0.1, 17.0}, {"x^2+1", "x", -4.0, 4.0},
            {"sin(u)", "u", -6.0, 64.0}, {"x^2", "x", -6.0, 6.0},
            {"u^2-1", "u", -5.0, 7.0},   {"x-1", "x", -4.0, 8.0},
            {"x", "x", -10.0, 10.0},     {"1", "u", -1.0, 1.0},
        };
        bool ok = true;
        double worst = 0.0;
        std::mt19937_64 rng(20260815);
        for (const auto& c : cases) {
            const auto e = isospec::expr::parse(c.src, c.var);
            const auto back = isospec::expr::parse(isospec::expr::render(e), c.var);
            ok = ok && isospec::expr::same_structure(e, back);
            const auto de = isospec::expr::differentiate(e);
            std::uniform_real_distribution<double> dist(c.lo, c.hi);
            for (int i = 0; i < 100; ++i) {
                const double x = dist(rng);
                const double h = 1e-5 * (1.0 + std::fabs(x));
                const double fd = (e(x + h) - e(x - h)) / (2.0 * h);
                const double dev = std::fabs(fd - de(x)) / (1.0 + std::fabs(de(x)));
                worst = std::max(worst, dev);
            }
        }
        ok = ok && worst < 1e-4;
        g.line(12, "expression layer", ok,
               "8 sources round-trip; derivative vs central difference at 100 points each, "
               "max rel dev " +
                   fmt(worst));
    } catch (const std::exception& e) {
        g.line(12, "expression layer", false, e.what());
    }

    std::printf("%d of 12 criteria passed\n", 12 - g.failures);
    return g.failures;
}

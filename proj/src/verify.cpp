#include "isospec/verify.hpp"

#include "isospec/errors.hpp"
#include "isospec/expr.hpp"
#include "isospec/family.hpp"
#include "isospec/quad.hpp"
#include "isospec/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace isospec {
namespace {

std::string fmt(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.6g", v);
    return b;
}

struct Tally {
    std::ostream& os;
    int failures = 0;
    void check(const std::string& name, bool ok, const std::string& detail) {
        os << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
        if (!ok) ++failures;
    }
    void note(const std::string& name, const std::string& detail) {
        os << "NOTE " << name << ": " << detail << "\n";
    }
};

void check_expr(Tally& t, const std::string& src, const char* var, double lo, double hi) {
    const auto e = expr::parse(src, var);
    const auto back = expr::parse(expr::render(e), var);
    t.check("expr_roundtrip(" + src + ")", expr::same_structure(e, back), expr::render(e));

    const auto de = expr::differentiate(e);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(lo, hi);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = dist(rng);
        const double h = 1e-5 * (1.0 + std::fabs(x));
        const double fd = (e(x + h) - e(x - h)) / (2.0 * h);
        const double an = de(x);
        worst = std::max(worst, std::fabs(fd - an) / (1.0 + std::fabs(an)));
    }
    t.check("expr_derivative(" + src + ")", worst < 1e-4, "max rel dev " + fmt(worst));
}

} // namespace

int run_verify(std::ostream& os) {
    Tally t{os};

    // --- expression layer ---
    check_expr(t, "sqrt(u)", "u", 0.1, 9.0);
    check_expr(t, "sin(u)", "u", -6.0, 6.0);
    check_expr(t, "u^2-1", "u", -4.0, 4.0);
    check_expr(t, "x^2+1", "x", -4.0, 4.0);
    check_expr(t, "exp(-x^2/2)*sin(3*x)+x/(1+x^2)", "x", -3.0, 3.0);

    // --- quadrature layer ---
    {
        const auto s = presets::make("constant", 1.0);
        family::IntegratingFactor iff(s, s.default_window, 1e-10, s.default_n_min);
        double worst = 0.0;
        for (double x : {-5.0, -1.0, 0.5, 3.0, 10.0}) {
            const double exact = 0.5 * (1.0 - std::exp(-2.0 * x));
            worst = std::max(worst, std::fabs(iff.gamma(x) - exact) / (1.0 + std::fabs(exact)));
        }
        t.check("gamma_closed_form(constant)", worst < 1e-9, "max rel dev " + fmt(worst));

        const auto inv = quad::invert(iff.cumulative(), 0.4);
        t.check("gamma_inverse", inv && std::fabs(iff.gamma(*inv) - 0.4) < 1e-10,
                inv ? "Gamma(" + fmt(*inv) + ") = " + fmt(iff.gamma(*inv)) : "no root");
    }
    {
        const auto g = [](double x) { return std::exp(-2.0 * x); };
        const double whole = quad::integrate(g, 0.0, 4.0, 1e-12);
        const double split =
            quad::integrate(g, 0.0, 2.0, 1e-12) + quad::integrate(g, 2.0, 4.0, 1e-12);
        t.check("integrate_additive", std::fabs(whole - split) < 1e-12,
                "|whole - split| = " + fmt(std::fabs(whole - split)));
    }
    {
        const auto s = presets::make("harmonic");
        family::IntegratingFactor iff(s, s.default_window, 1e-10, s.default_n_min);
        double worst = 0.0;
        for (double x : {1.0, 2.0, 4.0, 6.0})
            worst = std::max(worst, std::fabs(iff.gamma(x) + iff.gamma(-x)));
        t.check("gamma_odd(harmonic)", worst < 1e-10, "max |G(x)+G(-x)| = " + fmt(worst));
    }

    // --- tail bookkeeping per preset ---
    {
        struct Expect {
            const char* name;
            quad::TailKind left, right;
        };
        const Expect exp_tails[] = {
            {"case1a", quad::TailKind::divergent, quad::TailKind::finite},
            {"harmonic", quad::TailKind::finite, quad::TailKind::finite},
            {"fresnel", quad::TailKind::divergent, quad::TailKind::divergent},
            {"quartic", quad::TailKind::divergent, quad::TailKind::finite},
            {"constant", quad::TailKind::divergent, quad::TailKind::finite},
        };
        for (const auto& e : exp_tails) {
            const auto s = presets::make(e.name);
            family::IntegratingFactor iff(s, s.default_window, 1e-10, s.default_n_min);
            const bool ok = iff.cumulative().left_tail().kind == e.left &&
                            iff.cumulative().right_tail().kind == e.right;
            t.check(std::string("tail_kinds(") + e.name + ")", ok,
                    iff.cumulative().left_tail().diagnostics + " | " +
                        iff.cumulative().right_tail().diagnostics);
        }
    }

    // --- family invariants on regular members ---
    {
        struct Pick {
            const char* name;
            double g0, g1;
        };
        const Pick picks[] = {
            {"case1a", -1.0, -5.0},
            {"harmonic", 4.0, -3.0},
            {"quartic", -26.0, -49.0},
            {"constant", -2.0, -5.0},
        };
        for (const auto& p : picks) {
            const auto s = presets::make(p.name);
            const auto iff = family::integrating_factor(s, s.default_window, 1e-10);
            for (double g : {p.g0, p.g1}) {
                family::ParametricFamily fam(iff, g);
                const auto w = fam.window();
                const double span = w.x_max - w.x_min;
                double w_rr = 0.0, w_ric = 0.0, w_dar = 0.0, w_log = 0.0, w_exp = 0.0;
                for (int i = 0; i <= 200; ++i) {
                    const double x = w.x_min + span * (0.002 + 0.996 * i / 200.0);
                    const double h = 1e-4;
                    const double v2 = family::partner_potentials(s, x).V2;
                    const double scale = 1.0 + std::fabs(v2);
                    const double pg = fam.phi_general(x);

                    const double dg_an = fam.phi_general_prime(x);
                    w_rr = std::max(w_rr, std::fabs(dg_an + pg * pg - v2) / scale);
                    const double dg_fd =
                        (fam.phi_general(x + h) - fam.phi_general(x - h)) / (2.0 * h);
                    w_ric = std::max(w_ric, std::fabs(dg_an - dg_fd) / scale);

                    const double v1g = fam.parametric_potential(x);
                    w_dar = std::max(w_dar, std::fabs(v1g - (v2 - 2.0 * dg_an)) / scale);

                    const double psi = fam.zero_mode(x);
                    const double dpsi = (fam.zero_mode(x + h) - fam.zero_mode(x - h)) / (2.0 * h);
                    w_log = std::max(w_log,
                                     std::fabs(-dpsi / psi - pg) / (1.0 + std::fabs(pg)));

                    const double pe = s.phi_p(x);
                    const double de_fd =
                        (iff->exponent(x + h) - iff->exponent(x - h)) / (2.0 * h);
                    w_exp = std::max(w_exp, std::fabs(de_fd - pe) / (1.0 + std::fabs(pe)));
                }
                const std::string tag = std::string(p.name) + ", gamma=" + fmt(g);
                t.check("riccati_residual(" + tag + ")", w_rr < 1e-6, "max dev " + fmt(w_rr));
                t.check("riccati_slope(" + tag + ")", w_ric < 1e-5, "max dev " + fmt(w_ric));
                t.check("darboux(" + tag + ")", w_dar < 1e-8, "max dev " + fmt(w_dar));
                t.check("log_derivative(" + tag + ")", w_log < 1e-5, "max dev " + fmt(w_log));
                t.check("exponent_slope(" + tag + ")", w_exp < 1e-6, "max dev " + fmt(w_exp));

                // closed-form window norm against direct quadrature
                const double a = w.x_min + 0.3 * span, b = w.x_min + 0.8 * span;
                const double closed = fam.zero_mode_sq_norm(a, b);
                const double direct = quad::integrate(
                    [&fam](double x) {
                        const double v = fam.zero_mode(x);
                        return v * v;
                    },
                    a, b, 1e-12);
                t.check("window_norm(" + tag + ")",
                        std::fabs(closed - direct) < 1e-8 * (1.0 + std::fabs(closed)),
                        "closed " + fmt(closed) + " vs quad " + fmt(direct));
            }
        }
    }

    // --- peak structure ---
    {
        struct PeakPick {
            const char* name;
            double gamma;
        };
        for (const auto& p : {PeakPick{"harmonic", -2.0}, PeakPick{"quartic", -26.0},
                              PeakPick{"constant", -2.0}, PeakPick{"case1a", -1.0}}) {
            const auto s = presets::make(p.name);
            const auto iff = family::integrating_factor(s, s.default_window, 1e-10);
            family::ParametricFamily fam(iff, p.gamma);
            const auto peaks = family::peak_analysis(fam);
            double w_phi = 0.0, w_gs = 0.0;
            for (const auto& pk : peaks) {
                w_phi = std::max(w_phi, std::fabs(fam.phi_general(pk.x)));
                w_gs = std::max(w_gs, std::fabs(family::gamma_star(*iff, pk.x) - p.gamma) /
                                          (1.0 + std::fabs(p.gamma)));
            }
            const std::string tag = std::string(p.name) + ", gamma=" + fmt(p.gamma);
            t.check("peak_is_phi_g_root(" + tag + ")", !peaks.empty() && w_phi < 1e-8,
                    std::to_string(peaks.size()) + " peak(s), max |phi_g| " + fmt(w_phi));
            t.check("gamma_star_at_peak(" + tag + ")", w_gs < 1e-6, "max rel dev " + fmt(w_gs));
        }
        // closed forms for the constant preset, c = 1, gamma = -2:
        // peak at -ln(3)/2 with normalized height exactly 1/2
        const auto s = presets::make("constant");
        const auto iff = family::integrating_factor(s, s.default_window, 1e-10);
        family::ParametricFamily fam(iff, -2.0);
        const auto peaks = family::peak_analysis(fam);
        const double xp = -0.5 * std::log(3.0);
        const bool ok = peaks.size() == 1 && std::fabs(peaks[0].x - xp) < 1e-8 &&
                        std::fabs(peaks[0].height - 0.5) < 1e-8;
        t.check("peak_closed_form(constant, gamma=-2)", ok,
                peaks.empty() ? "no peak"
                              : "x " + fmt(peaks[0].x) + " vs " + fmt(xp) + ", h " +
                                    fmt(peaks[0].height) + " vs 0.5");
    }

    // --- appendix parameterization (harmonic) ---
    {
        const auto s = presets::make("harmonic");
        const auto iff = family::integrating_factor(s, s.default_window, 1e-10);
        const family::Window lim = s.default_window;
        const double root_pi = std::sqrt(M_PI);
        const double g_main = 1.5 * root_pi; // maps to gamma_appendix = 1
        const double ga = family::gamma_convert(*iff, g_main, lim);
        t.check("gamma_convert(harmonic)", std::fabs(ga - 1.0) < 1e-9,
                "gamma_appendix(" + fmt(g_main) + ") = " + fmt(ga));
        const double back = family::gamma_main_from_appendix(*iff, ga, lim);
        t.check("gamma_convert_roundtrip", std::fabs(back - g_main) < 1e-9,
                fmt(back) + " vs " + fmt(g_main));

        const double N = family::normalization_constant(1.0);
        t.check("normalization_constant(1)", std::fabs(N - std::sqrt(2.0)) < 1e-12,
                "N = " + fmt(N));
        bool forbidden = false;
        try {
            family::normalization_constant(-0.5);
        } catch (const forbidden_interval_error&) {
            forbidden = true;
        }
        t.check("forbidden_interval(-0.5)", forbidden, "throws as required");

        const double total = quad::integrate(
            [&](double x) {
                const double u = family::appendix_zero_mode(*iff, 1.0, lim, x);
                return 2.0 * u * u; // N^2 = 2
            },
            lim.x_min, lim.x_max, 1e-12);
        t.check("appendix_norm(harmonic, gamma_a=1)", std::fabs(total - 1.0) < 1e-6,
                "int (N u)^2 = " + fmt(total));
    }

    // --- deformation vanishes as |gamma| grows (two-sided tails only) ---
    {
        const auto s = presets::make("harmonic");
        const auto iff = family::integrating_factor(s, s.default_window, 1e-10);
        double sups[3];
        int idx = 0;
        for (double g : {1e2, 1e4, 1e6}) {
            family::ParametricFamily fam(iff, g);
            double sup = 0.0;
            for (int i = 0; i <= 2000; ++i) {
                const double x = -6.0 + 12.0 * i / 2000.0;
                const double d =
                    fam.parametric_potential(x) - family::partner_potentials(s, x).V1;
                sup = std::max(sup, std::fabs(d));
            }
            sups[idx++] = sup;
        }
        t.check("limit_recovery(harmonic)",
                sups[0] > sups[1] && sups[1] > sups[2] && sups[2] < 1e-4,
                "sup|V1g-V1| = " + fmt(sups[0]) + ", " + fmt(sups[1]) + ", " + fmt(sups[2]) +
                    " at gamma = 1e2, 1e4, 1e6");
        for (const char* name : {"case1a", "quartic", "constant"}) {
            const auto sp = presets::make(name);
            const auto ip = family::integrating_factor(sp, sp.default_window, 1e-10);
            double sups1[2];
            int j = 0;
            for (double g : {-1e4, -1e6}) {
                family::ParametricFamily fam(ip, g);
                double sup = 0.0;
                const auto w = sp.default_window;
                for (int i = 0; i <= 2000; ++i) {
                    const double x = w.x_min + (w.x_max - w.x_min) * i / 2000.0;
                    const double d =
                        fam.parametric_potential(x) - family::partner_potentials(sp, x).V1;
                    sup = std::max(sup, std::fabs(d));
                }
                sups1[j++] = sup;
            }
            t.check(std::string("limit_plateau(") + name + ")", sups1[1] > 1e-2,
                    "sup|V1g-V1| = " + fmt(sups1[0]) + " -> " + fmt(sups1[1]) +
                        " at gamma = -1e4, -1e6: a divergent-side tail pins the "
                        "deformation at O(4 phi_p') there, so it cannot vanish");
        }
    }

    // --- spectral layer ---
    {
        const auto box = spectral::discretize([](double) { return 0.0; }, 0.0, M_PI, 2001);
        const auto ev = spectral::eigenvalues(box, 3);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            worst = std::max(worst, std::fabs(ev[i] - double((i + 1) * (i + 1))));
        t.check("box_spectrum", worst < 2e-4, "max |dev| " + fmt(worst));

        const auto s = presets::make("harmonic");
        const auto V1 = [&s](double x) { return family::partner_potentials(s, x).V1; };
        const auto H1 = spectral::discretize(V1, -8.0, 8.0, 2001);
        const auto hv = spectral::eigenvalues(H1, 5);
        double worst2 = 0.0;
        for (int i = 0; i < 5; ++i) worst2 = std::max(worst2, std::fabs(hv[i] - 2.0 * i));
        t.check("harmonic_ladder", worst2 < 1e-2, "max |dev from 0,2,4,6,8| " + fmt(worst2));

        const auto vecs = spectral::eigenvectors(H1, hv);
        double w_orth = 0.0;
        for (std::size_t i = 0; i < vecs.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) {
                double dot = 0.0;
                for (std::size_t m = 0; m < vecs[i].size(); ++m) dot += vecs[i][m] * vecs[j][m];
                w_orth = std::max(w_orth, std::fabs(dot));
            }
        t.check("eigenvector_orthogonality", w_orth < 1e-8, "max |dot| " + fmt(w_orth));

        const double i0 = spectral::intertwine_check(s, {-8.0, 8.0}, 2001, 0);
        t.check("intertwine_mode0(harmonic)", i0 < 1e-3, "||A psi0||/||psi0|| = " + fmt(i0));
        const double i1 = spectral::intertwine_check(s, {-8.0, 8.0}, 2001, 1);
        t.check("intertwine_mode1(harmonic)", i1 < 1e-2, "rel eigen-residual " + fmt(i1));

        const auto iff = family::integrating_factor(s, s.default_window, 1e-10);
        family::ParametricFamily famg(iff, 4.0);
        const double zres = spectral::zero_mode_residual(famg, 4001);
        t.check("zero_mode_residual(harmonic, gamma=4)", zres < 1e-3,
                "max |H psi|/max |psi| = " + fmt(zres));
        const double zres0 = spectral::zero_mode_residual_sqrt_mu(*iff, 4001);
        t.check("zero_mode_residual(harmonic, sqrt(mu))", zres0 < 1e-3,
                "max |H psi|/max |psi| = " + fmt(zres0));
    }

    os << (t.failures == 0 ? "verify: all properties hold\n"
                           : "verify: " + std::to_string(t.failures) + " propert" +
                                 (t.failures == 1 ? "y" : "ies") + " failed\n");
    return t.failures;
}

} // namespace isospec

#include "isospec/family.hpp"

#include "isospec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

namespace isospec::family {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

} // namespace

double SuperpotentialSpec::phi_p(double x) const {
    if (phi) return (*phi)(x);
    return F(f(x));
}

double SuperpotentialSpec::phi_p_prime(double x) const {
    if (dphi) return (*dphi)(x);
    return dF(f(x)) * df(x);
}

SuperpotentialSpec make_spec(const std::string& F_source, const std::string& f_source,
                             const std::string& name) {
    SuperpotentialSpec s;
    s.name = name;
    s.F = expr::parse(F_source, "u");
    s.f = expr::parse(f_source, "x");
    s.dF = expr::differentiate(s.F);
    s.df = expr::differentiate(s.f);
    return s;
}

double phi_particular(const SuperpotentialSpec& s, double x) { return s.phi_p(x); }

Potentials partner_potentials(const SuperpotentialSpec& s, double x) {
    const double p = s.phi_p(x);
    const double dp = s.phi_p_prime(x);
    return {p * p - dp + s.epsilon, p * p + dp + s.epsilon};
}

IntegratingFactor::IntegratingFactor(const SuperpotentialSpec& s, Window w, double tol, int n_min)
    : spec_(s),
      exp_(quad::build_cumulative_signed([this](double x) { return spec_.phi_p(x); }, w.x_min,
                                         w.x_max, tol, n_min)),
      gam_(quad::build_cumulative([this](double x) { return mu(x); }, w.x_min, w.x_max, tol,
                                  n_min)),
      tol_(tol) {}

double IntegratingFactor::exponent(double x) const { return exp_(x); }

double IntegratingFactor::mu(double x) const {
    const double t = -2.0 * exp_(x);
    if (t > 709.0)
        throw window_error("integrating factor overflows at x = " + fmt(x) +
                               "; shrink the window on that side",
                           x);
    if (t < -745.0)
        throw window_error("integrating factor underflows to 0 at x = " + fmt(x) +
                               "; shrink the window on that side",
                           x);
    return std::exp(t);
}

double IntegratingFactor::gamma(double x) const { return gam_(x); }

double IntegratingFactor::gamma_limit_left() const {
    const auto& t = gam_.left_tail();
    return t.kind == quad::TailKind::finite ? t.asymptote : -kInf;
}

double IntegratingFactor::gamma_limit_right() const {
    const auto& t = gam_.right_tail();
    return t.kind == quad::TailKind::finite ? t.asymptote : kInf;
}

std::shared_ptr<const IntegratingFactor> integrating_factor(const SuperpotentialSpec& s, Window w,
                                                            double tol) {
    return std::make_shared<IntegratingFactor>(s, w, tol, s.default_n_min);
}

ParametricFamily::ParametricFamily(std::shared_ptr<const IntegratingFactor> iff, double gamma)
    : if_(std::move(iff)), gamma_(gamma) {
    // Guard band around the singularity. Gamma carries interpolation error of
    // order tol, so a user-supplied analytic root must still trigger; plot
    // grids sample no closer than ~1e-3, far outside the band.
    sing_tol_ = std::max(1e-8, 100.0 * if_->tol()) * (1.0 + std::fabs(gamma_));
    root_ = quad::invert(if_->cumulative(), -gamma_);
}

double ParametricFamily::denominator(double x) const {
    const double d = gamma_ + if_->gamma(x);
    if (std::fabs(d) <= sing_tol_) throw singularity_error(root_ ? *root_ : x, gamma_);
    return d;
}

double ParametricFamily::phi_general(double x) const {
    return spec().phi_p(x) + if_->mu(x) / denominator(x);
}

double ParametricFamily::phi_general_prime(double x) const {
    const double m = if_->mu(x);
    const double d = denominator(x);
    const double p = spec().phi_p(x);
    // mu' = -2 phi_p mu, so (mu/(g+G))' = (-2 p m d - m^2)/d^2
    return spec().phi_p_prime(x) + (-2.0 * p * m * d - m * m) / (d * d);
}

double ParametricFamily::parametric_potential(double x) const {
    const double m = if_->mu(x);
    const double d = denominator(x);
    const double p = spec().phi_p(x);
    const double v1 = partner_potentials(spec(), x).V1;
    return v1 + 4.0 * p * m / d + 2.0 * (m / d) * (m / d);
}

double ParametricFamily::zero_mode(double x) const {
    return std::sqrt(if_->mu(x)) / denominator(x);
}

double ParametricFamily::zero_mode_sq_norm(double a, double b) const {
    return 1.0 / denominator(a) - 1.0 / denominator(b);
}

RegularRangeReport regular_range(const SuperpotentialSpec& s, Window w, double tol) {
    IntegratingFactor iff(s, w, tol, s.default_n_min);
    RegularRangeReport rep;
    rep.left_tail = iff.cumulative().left_tail();
    rep.right_tail = iff.cumulative().right_tail();
    rep.left_assumed_divergent = rep.left_tail.kind == quad::TailKind::inconclusive;
    rep.right_assumed_divergent = rep.right_tail.kind == quad::TailKind::inconclusive;

    const double L = iff.gamma_limit_left();
    const double R = iff.gamma_limit_right();

    GammaBoundary bl{std::nullopt, quad::Side::left, rep.left_tail.kind};
    if (std::isfinite(L)) bl.value = -L;
    GammaBoundary br{std::nullopt, quad::Side::right, rep.right_tail.kind};
    if (std::isfinite(R)) br.value = -R;
    rep.gamma_s = {bl, br};

    // Singular gammas form the closed interval [-R, -L] (the negated closure
    // of the range of Gamma); the regular set is its open complement.
    if (std::isfinite(R)) rep.regular.push_back({-kInf, -R});
    if (std::isfinite(L)) rep.regular.push_back({-L, kInf});
    rep.normalizable = rep.regular;
    return rep;
}

double gamma_from_initial_condition(const SuperpotentialSpec& s, double phi_g_at_0) {
    // mu(0) = 1 and Gamma(0) = 0, so phi_g(0) = phi_p(0) + 1/gamma.
    const double d = phi_g_at_0 - s.phi_p(0.0);
    if (d == 0.0)
        throw domain_error("phi_g(0) equals the particular solution: gamma = infinity "
                           "(nonparametric member)");
    return 1.0 / d;
}

double gamma_star(const IntegratingFactor& iff, double x) {
    const double p = iff.spec().phi_p(x);
    if (p == 0.0) throw domain_error("gamma* is undefined at x = " + fmt(x) + ": phi_p(x) = 0");
    return -(iff.mu(x) + p * iff.gamma(x)) / p;
}

std::vector<Peak> peak_analysis(const ParametricFamily& fam) {
    const IntegratingFactor& iff = fam.factor();
    const double L = iff.gamma_limit_left();
    const double R = iff.gamma_limit_right();
    const double g = fam.gamma();
    if (!(g < -R || g > -L))
        throw nonnormalizable_error("gamma = " + fmt(g) +
                                    " is not regular: the squared zero mode has no finite norm "
                                    "(singular gammas fill [" +
                                    fmt(-R) + ", " + fmt(-L) + "])");

    // Total norm with tail extension; a divergent side contributes 0.
    const auto term = [g](double v) { return std::isinf(v) ? 0.0 : -1.0 / (g + v); };
    const double nsq = term(R) - term(L);

    // (psi^2)' = -2 phi_g psi^2: maxima sit exactly where phi_g crosses 0 upward.
    const Window w = fam.window();
    const int n = 4001;
    const double h = (w.x_max - w.x_min) / (n - 1);
    std::vector<Peak> peaks;
    double prev_x = w.x_min;
    double prev_s = fam.phi_general(prev_x);
    for (int i = 1; i < n; ++i) {
        const double x = (i == n - 1) ? w.x_max : w.x_min + i * h;
        const double s = fam.phi_general(x);
        if (prev_s < 0.0 && s >= 0.0) {
            double lo = prev_x, hi = x;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                if (fam.phi_general(mid) < 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            const double xp = 0.5 * (lo + hi);
            const double psi = fam.zero_mode(xp);
            peaks.push_back({xp, psi * psi / nsq});
        }
        prev_x = x;
        prev_s = s;
    }
    return peaks;
}

double find_gamma_c(const std::shared_ptr<const IntegratingFactor>& iff, double gamma_lo,
                    double gamma_hi) {
    double lo = gamma_lo, hi = gamma_hi;
    if (lo > hi) std::swap(lo, hi);
    const auto diff = [&iff](double g) {
        ParametricFamily fam(iff, g);
        const auto pk = peak_analysis(fam);
        if (pk.size() != 2)
            throw bracket_error("expected two density peaks at gamma = " + fmt(g) + ", found " +
                                std::to_string(pk.size()) +
                                "; this superpotential never yields two peaks there");
        return pk[0].height - pk[1].height;
    };
    double dlo = diff(lo);
    double dhi = diff(hi);
    if (dlo == 0.0) return lo;
    if (dhi == 0.0) return hi;
    if ((dlo > 0.0) == (dhi > 0.0))
        throw bracket_error("peak height difference has the same sign at gamma = " + fmt(lo) +
                            " and gamma = " + fmt(hi) + "; no balance point bracketed");
    while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        const double dm = diff(mid);
        if (dm == 0.0) return mid;
        if ((dm > 0.0) == (dlo > 0.0)) {
            lo = mid;
            dlo = dm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

// Gamma at a norm endpoint: inside the window -> Gamma(x); at or beyond the
// edge -> the finite tail asymptote, or nonnormalizable_error.
double gamma_at_or_beyond(const IntegratingFactor& iff, double x, quad::Side side) {
    const Window w = iff.window();
    if (side == quad::Side::left) {
        if (x > w.x_min) return iff.gamma(x);
        const auto& t = iff.cumulative().left_tail();
        if (t.kind != quad::TailKind::finite)
            throw nonnormalizable_error(
                "mu is not integrable toward the left limit: ||mu||_1 is infinite");
        return t.asymptote;
    }
    if (x < w.x_max) return iff.gamma(x);
    const auto& t = iff.cumulative().right_tail();
    if (t.kind != quad::TailKind::finite)
        throw nonnormalizable_error(
            "mu is not integrable toward the right limit: ||mu||_1 is infinite");
    return t.asymptote;
}

} // namespace

double gamma_convert(const IntegratingFactor& iff, double gamma_main, Window limits) {
    const double gl = gamma_at_or_beyond(iff, limits.x_min, quad::Side::left);
    const double gr = gamma_at_or_beyond(iff, limits.x_max, quad::Side::right);
    const double norm = gr - gl;
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw nonnormalizable_error("||mu||_1 over the requested range is not positive and "
                                    "finite: cannot convert gamma");
    return (gamma_main + gl) / norm;
}

double gamma_main_from_appendix(const IntegratingFactor& iff, double gamma_appendix,
                                Window limits) {
    const double gl = gamma_at_or_beyond(iff, limits.x_min, quad::Side::left);
    const double gr = gamma_at_or_beyond(iff, limits.x_max, quad::Side::right);
    return gamma_appendix * (gr - gl) - gl;
}

double appendix_zero_mode(const IntegratingFactor& iff, double gamma_appendix, Window limits,
                          double x) {
    const double gl = gamma_at_or_beyond(iff, limits.x_min, quad::Side::left);
    const double gr = gamma_at_or_beyond(iff, limits.x_max, quad::Side::right);
    const double norm = gr - gl;
    const double u0 = std::sqrt(iff.mu(x) / norm);
    const double S = (iff.gamma(x) - gl) / norm; // cumulative u0^2 mass in [0, 1]
    const double den = gamma_appendix + S;
    if (std::fabs(den) <=
        std::max(1e-8, 100.0 * iff.tol()) * (1.0 + std::fabs(gamma_appendix)))
        throw singularity_error(x, gamma_appendix);
    return u0 / den;
}

double normalization_constant(double gamma_appendix) {
    if (gamma_appendix >= -1.0 && gamma_appendix <= 0.0)
        throw forbidden_interval_error("appendix gamma = " + fmt(gamma_appendix) +
                                       " lies in [-1, 0]: N^2 = gamma (gamma + 1) is not "
                                       "positive there");
    return std::sqrt(gamma_appendix * (gamma_appendix + 1.0));
}

} // namespace isospec::family

#pragma once

#include "isospec/expr.hpp"
#include "isospec/quad.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace isospec::family {

struct Window {
    double x_min;
    double x_max;
};

// Superpotential in composition form: phi_p(x) = F(f(x)), with stored symbolic
// derivatives dF/du and df/dx. Some compositions hide a removable branch
// problem (literally sqrt(x^2) = |x|, while the smooth continuation through 0
// is x, and dF blows up at f = 0); such presets carry explicit phi/dphi
// overrides used for evaluation, keeping F and f as the defining pair.
struct SuperpotentialSpec {
    std::string name; // preset id or "custom"
    expr::Expression F, f, dF, df;
    std::optional<expr::Expression> phi, dphi;
    double epsilon = 0.0; // factorization energy; fixed to 0 throughout
    Window default_window{-4.0, 4.0};
    double default_tol = 1e-10;
    int default_n_min = 801;

    double phi_p(double x) const;
    double phi_p_prime(double x) const;
};

// Parses F (variable u) and f (variable x) and differentiates them.
SuperpotentialSpec make_spec(const std::string& F_source, const std::string& f_source,
                             const std::string& name = "custom");

double phi_particular(const SuperpotentialSpec& s, double x);

struct Potentials {
    double V1; // phi_p^2 - phi_p' + epsilon
    double V2; // phi_p^2 + phi_p' + epsilon
};
Potentials partner_potentials(const SuperpotentialSpec& s, double x);

// mu(x) = exp(-2 int_0^x phi_p) and Gamma(x) = int_0^x mu on one window.
// Built in two stages: the exponent E(x) is accumulated on its own grid with
// exact node slopes phi_p, then mu = exp(-2E) is accumulated into Gamma with
// exact node slopes mu. mu(0) = 1 and Gamma(0) = 0 by construction.
class IntegratingFactor {
public:
    IntegratingFactor(const SuperpotentialSpec& s, Window w, double tol, int n_min);

    double mu(double x) const;
    double exponent(double x) const;
    double gamma(double x) const;

    const SuperpotentialSpec& spec() const { return spec_; }
    const quad::CumulativeIntegral& cumulative() const { return gam_; }
    const quad::CumulativeIntegral& exponent_integral() const { return exp_; }
    Window window() const { return {gam_.x_min(), gam_.x_max()}; }
    double tol() const { return tol_; }

    // Range limits of Gamma extended by the tail classification: the finite
    // asymptote on decaying sides, +-infinity on divergent (or inconclusive,
    // treated as divergent) sides.
    double gamma_limit_left() const;
    double gamma_limit_right() const;

private:
    SuperpotentialSpec spec_;
    quad::CumulativeIntegral exp_, gam_;
    double tol_;
};

std::shared_ptr<const IntegratingFactor> integrating_factor(const SuperpotentialSpec& s, Window w,
                                                            double tol);

// One member of the isospectral family: gamma plus a shared IntegratingFactor.
// Construction never throws for singular gamma (curves with an in-window
// singularity are still plottable); evaluation throws singularity_error only
// within a tight guard band |gamma + Gamma(x)| <= sing_tol around the root.
class ParametricFamily {
public:
    ParametricFamily(std::shared_ptr<const IntegratingFactor> iff, double gamma);

    double gamma() const { return gamma_; }
    const IntegratingFactor& factor() const { return *if_; }
    const SuperpotentialSpec& spec() const { return if_->spec(); }
    Window window() const { return if_->window(); }

    double denominator(double x) const; // gamma + Gamma(x), guarded
    double phi_general(double x) const; // phi_p + mu/(gamma+Gamma)
    double phi_general_prime(double x) const; // analytic: phi_p' + (mu'(g+G) - mu^2)/(g+G)^2
    double parametric_potential(double x) const; // V1 + 4 phi_p mu/(g+G) + 2 mu^2/(g+G)^2
    double zero_mode(double x) const;            // sqrt(mu)/(gamma+Gamma), signed
    // int_a^b zero_mode^2 in closed form (dGamma = mu dx): 1/(g+G(a)) - 1/(g+G(b)).
    // Only meaningful when no singularity lies in [a, b].
    double zero_mode_sq_norm(double a, double b) const;

    std::optional<double> singularity() const { return root_; } // root of gamma+Gamma in window
    bool regular_on_window() const { return !root_.has_value(); }

private:
    std::shared_ptr<const IntegratingFactor> if_;
    double gamma_;
    double sing_tol_;
    std::optional<double> root_;
};

struct GammaBoundary {
    std::optional<double> value; // critical gamma_s; empty on divergent sides
    quad::Side side;
    quad::TailKind tail;
};

struct GammaInterval {
    double lo, hi; // open interval; +-INFINITY allowed
};

struct RegularRangeReport {
    quad::TailReport left_tail, right_tail;
    bool left_assumed_divergent = false; // inconclusive classified, treated divergent
    bool right_assumed_divergent = false;
    std::vector<GammaBoundary> gamma_s;       // left entry then right entry
    std::vector<GammaInterval> regular;       // {gamma : -gamma outside closure(range Gamma)}
    std::vector<GammaInterval> normalizable;  // identical set; see README
};

RegularRangeReport regular_range(const SuperpotentialSpec& s, Window w, double tol);

// gamma = 1/(phi_g(0) - phi_p(0)); equality means the nonparametric member (gamma = inf).
double gamma_from_initial_condition(const SuperpotentialSpec& s, double phi_g_at_0);

// gamma*(x) = -(mu + phi_p Gamma)/phi_p: the gamma whose zero mode peaks at x.
double gamma_star(const IntegratingFactor& iff, double x);

struct Peak {
    double x;
    double height; // of the tail-extended-normalized squared zero mode
};

// All maxima of the normalized squared zero mode: sign changes -..+ of phi_g
// refined by bisection. Requires gamma in the tail-extended regular set.
std::vector<Peak> peak_analysis(const ParametricFamily& fam);

// gamma at which the two peak heights are equal, bisected to 1e-3 in gamma.
double find_gamma_c(const std::shared_ptr<const IntegratingFactor>& iff, double gamma_lo,
                    double gamma_hi);

// Appendix-convention parameter: gamma_a = (gamma_main + Gamma(l)) / ||mu||_1
// over [l, r] = limits (endpoints outside the built window use the tail
// asymptotes; a divergent side makes mu non-integrable -> nonnormalizable_error).
double gamma_convert(const IntegratingFactor& iff, double gamma_main, Window limits);
double gamma_main_from_appendix(const IntegratingFactor& iff, double gamma_appendix,
                                Window limits);

// Appendix zero mode u(x) = u0 / (gamma_a + int_l^x u0^2), u0 = sqrt(mu/||mu||_1).
double appendix_zero_mode(const IntegratingFactor& iff, double gamma_appendix, Window limits,
                          double x);

// N = sqrt(gamma_a (gamma_a + 1)); gamma_a in [-1, 0] -> forbidden_interval_error.
double normalization_constant(double gamma_appendix);

} // namespace isospec::family

namespace isospec::presets {

struct Info {
    std::string name;
    std::string F_source; // variable u
    std::string f_source; // variable x
    family::Window window;
    std::string notes; // reference values and formulas
};

bool exists(const std::string& name);
const std::vector<Info>& list();

// Preset factory; c parameterizes the constant preset only.
family::SuperpotentialSpec make(const std::string& name, double c = 1.0);

} // namespace isospec::presets

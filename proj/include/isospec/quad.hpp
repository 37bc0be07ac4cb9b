#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace isospec::quad {

// One 15-point Kronrod panel (with embedded 7-point Gauss) on [a, b].
// error is the plain |K15 - G7| estimate.
struct PanelResult {
    double value;
    double error;
};
PanelResult kronrod_panel(const std::function<double(double)>& g, double a, double b);

// Globally adaptive quadrature: bisect the worst interval first until the
// summed error estimate is <= tol. Budget: 4000 bisections, after which an
// unmet tolerance raises isospec::error. a > b integrates with a sign flip.
double integrate(const std::function<double(double)>& g, double a, double b, double tol);

enum class Side { left, right };
enum class TailKind { finite, divergent, inconclusive };

struct TailReport {
    TailKind kind = TailKind::inconclusive;
    // Extrapolated limit of Gamma at +/-inf (finite kind only). The estimate
    // overshoots on the right / undershoots on the left by at most `uncertainty`:
    // right tail: Gamma(x_max) in [asymptote - uncertainty, asymptote];
    // left tail:  Gamma(x_min) in [asymptote, asymptote + uncertainty].
    double asymptote = 0.0;
    double uncertainty = 0.0;
    double edge_density = 0.0; // mu at the window edge
    double decay_rate = 0.0;   // -(d/dx ln mu) toward the edge; > 0 means decaying outward
    double last_decade = 0.0;  // Gamma mass in the outermost 10% of the window
    std::string diagnostics;
};

// Gamma(x) = int_0^x of a density on [x_min, x_max], signed (negative for x < 0).
// 0 is always a node and Gamma(0) = 0 exactly. Node sums are accumulated outward
// from 0 in each direction, so values on a small side keep full relative accuracy
// even when the opposite side grows by hundreds of orders of magnitude.
// Between nodes: cubic Hermite with node slopes = density(node); for positive
// densities the slopes are Fritsch-Carlson limited so Gamma never loses
// monotonicity between nodes.
class CumulativeIntegral {
public:
    double operator()(double x) const;  // Gamma(x); throws domain_error outside the window
    double derivative(double x) const;  // interpolant slope (approximates the density)

    double x_min() const { return xs_.front(); }
    double x_max() const { return xs_.back(); }
    double tol() const { return tol_; }
    bool positive_density() const { return positive_; }

    const std::vector<double>& grid() const { return xs_; }
    const std::vector<double>& values() const { return gam_; }
    const std::vector<double>& densities() const { return mu_; }

    const TailReport& left_tail() const { return left_; }
    const TailReport& right_tail() const { return right_; }

private:
    std::vector<double> xs_, gam_, mu_, slope_;
    double tol_ = 0.0;
    bool positive_ = false;
    TailReport left_, right_;
    std::size_t locate(double x) const;
    static CumulativeIntegral build(const std::function<double(double)>& f, double x_min,
                                    double x_max, double tol, int n_min, bool positive);

    friend CumulativeIntegral build_cumulative(const std::function<double(double)>&, double,
                                               double, double, int);
    friend CumulativeIntegral build_cumulative_signed(const std::function<double(double)>&,
                                                      double, double, double, int);
};

// Positive-density build (integrating factors). Requires x_min < 0 < x_max.
// Non-positive density at any sample -> invalid_superpotential; non-finite
// density -> window_error naming the x. Tails are classified at build time.
CumulativeIntegral build_cumulative(const std::function<double(double)>& mu, double x_min,
                                    double x_max, double tol, int n_min);

// Signed-integrand build (exponents like int_0^x phi): no positivity check,
// no monotone limiting, no tail classification.
CumulativeIntegral build_cumulative_signed(const std::function<double(double)>& g, double x_min,
                                           double x_max, double tol, int n_min);

// Stored tail classification (build_cumulative only).
TailReport classify_tail(const CumulativeIntegral& ci, Side side);

// Solve Gamma(x) = target on the grid by monotone bisection; nullopt when the
// target lies outside [Gamma(x_min), Gamma(x_max)].
std::optional<double> invert(const CumulativeIntegral& ci, double target);

} // namespace isospec::quad

#include "isospec/quad.hpp"
#include "isospec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>

namespace isospec::quad {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Kronrod 15 / Gauss 7 abscissas and weights on [-1, 1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.10479001032225018, 0.14065325971552592,
    0.16900472663926790, 0.19035057806478541, 0.20443294007529889, 0.20948214108472783};
constexpr double kWg[4] = {
    0.12948496616886969, 0.27970539148927666, 0.38183005050511894, 0.41795918367346939};

} // namespace

PanelResult kronrod_panel(const std::function<double(double)>& g, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = g(c);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double f1 = g(c - h * kXgk[j]);
        const double f2 = g(c + h * kXgk[j]);
        kron += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    PanelResult r{kron * h, std::fabs(kron - gauss) * std::fabs(h)};
    if (!std::isfinite(r.value))
        throw domain_error("integrand is not finite on [" + fmt(a) + ", " + fmt(b) + "]");
    return r;
}

namespace {

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

} // namespace

double integrate(const std::function<double(double)>& g, double a, double b, double tol) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    constexpr int kBudget = 4000; // documented subdivision budget

    std::priority_queue<Interval> active;
    std::vector<Interval> done; // intervals too narrow to split further
    PanelResult first = kronrod_panel(g, a, b);
    active.push({a, b, first.value, first.error});
    double err_active = first.error, err_done = 0.0;

    int splits = 0;
    while (err_active + err_done > tol && splits < kBudget && !active.empty()) {
        Interval w = active.top();
        active.pop();
        err_active -= w.error;
        const double mid = 0.5 * (w.a + w.b);
        if (mid <= w.a || mid >= w.b) { // width at machine limit
            done.push_back(w);
            err_done += w.error;
            continue;
        }
        PanelResult l = kronrod_panel(g, w.a, mid);
        PanelResult r = kronrod_panel(g, mid, w.b);
        active.push({w.a, mid, l.value, l.error});
        active.push({mid, w.b, r.value, r.error});
        err_active += l.error + r.error;
        ++splits;
    }

    while (!active.empty()) {
        done.push_back(active.top());
        active.pop();
    }
    double total = 0.0, comp = 0.0, err = 0.0;
    for (const Interval& it : done) { // Kahan summation
        const double y = it.value - comp;
        const double t = total + y;
        comp = (t - total) - y;
        total = t;
        err += it.error;
    }
    if (err > tol)
        throw error("integrate: error estimate " + fmt(err) + " still above tol " + fmt(tol) +
                    " after " + std::to_string(kBudget) + " subdivisions on [" + fmt(a) + ", " +
                    fmt(b) + "]");
    return sign * total;
}

// ------------------------------------------------------- cumulative builds

namespace {

// Cubic Hermite on [x0,x1] through (g0,s0),(g1,s1).
double hermite(double x0, double x1, double g0, double g1, double s0, double s1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return g0 * (2 * t3 - 3 * t2 + 1) + s0 * h * (t3 - 2 * t2 + t) + g1 * (-2 * t3 + 3 * t2) +
           s1 * h * (t3 - t2);
}

double hermite_slope(double x0, double x1, double g0, double g1, double s0, double s1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    return (g0 * (6 * t2 - 6 * t) / h + s0 * (3 * t2 - 4 * t + 1) + g1 * (6 * t - 6 * t2) / h +
            s1 * (3 * t2 - 2 * t));
}

struct Leaf {
    double a, b, value;
};

// Split until the panel error and a midpoint interpolation probe both fit the
// per-interval share of tol. The relative floor stops the splitter from
// chasing 14-digit structure inside e^100-scale tails nobody reads at that
// precision; 1e-10 keeps every downstream identity comfortably below its gate.
void refine(const std::function<double(double)>& f, double a, double b, double fa, double fb,
            double tol_per_len, int depth, std::vector<Leaf>& out, int& leaf_budget) {
    PanelResult whole = kronrod_panel(f, a, b);
    const double limit =
        std::max(tol_per_len * (b - a), 1e-10 * std::fabs(whole.value)) + 1e-300;
    bool accept = whole.error <= limit;
    double mid = 0.5 * (a + b), fm = 0.0;
    PanelResult lhalf{0, 0};
    if (depth >= 48 || leaf_budget <= 0 || mid <= a || mid >= b) {
        accept = true;
    } else {
        fm = f(mid);
        lhalf = kronrod_panel(f, a, mid);
        if (accept) {
            // probe: Hermite reconstruction of Gamma(mid)-Gamma(a) vs direct integration
            const double probe = hermite(a, b, 0.0, whole.value, fa, fb, mid);
            accept = std::fabs(probe - lhalf.value) <= limit;
        }
    }
    if (accept) {
        out.push_back({a, b, whole.value});
        --leaf_budget;
        return;
    }
    refine(f, a, mid, fa, fm, tol_per_len, depth + 1, out, leaf_budget);
    refine(f, mid, b, fm, fb, tol_per_len, depth + 1, out, leaf_budget);
}

TailReport classify(const CumulativeIntegral& ci, Side side) {
    const auto& xs = ci.grid();
    const auto& mu = ci.densities();
    const auto& gm = ci.values();
    const std::size_t n = xs.size();
    const double W = xs.back() - xs.front();
    const double tol = ci.tol();

    TailReport r;
    const std::size_t edge = (side == Side::right) ? n - 1 : 0;
    r.edge_density = mu[edge];

    // local decay rate from the edge node and a node >= 1% of the window inward
    const double probe_dist = 0.01 * W;
    std::size_t inner = edge;
    if (side == Side::right) {
        while (inner > 0 && xs[edge] - xs[inner] < probe_dist) --inner;
    } else {
        while (inner + 1 < n && xs[inner] - xs[edge] < probe_dist) ++inner;
    }
    const double dx = std::fabs(xs[edge] - xs[inner]);
    r.decay_rate = (dx > 0 && mu[inner] > 0 && mu[edge] > 0)
                       ? std::log(mu[inner] / mu[edge]) / dx
                       : 0.0;

    // Gamma mass of the outermost 10% of the window
    const double inner_x = (side == Side::right) ? xs.back() - 0.1 * W : xs.front() + 0.1 * W;
    r.last_decade = std::fabs(gm[edge] - ci(inner_x));

    // divergent: density keeps a positive floor over the outer 10%
    double min_mu = mu[edge];
    for (std::size_t i = 0; i < n; ++i) {
        const bool in_zone =
            (side == Side::right) ? xs[i] >= inner_x : xs[i] <= inner_x;
        if (in_zone) min_mu = std::min(min_mu, mu[i]);
    }

    const double est = (r.decay_rate > 0) ? r.edge_density / r.decay_rate : INFINITY;
    const double est_limit = std::max(1e3 * tol, 1e-7);
    const double decade_limit = std::max(1e4 * tol, 1e-5);

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "edge density %.3e, decay rate %.3e, tail estimate %.3e, outer-decade mass "
                  "%.3e, outer-decade floor %.3e",
                  r.edge_density, r.decay_rate, est, r.last_decade, min_mu);
    r.diagnostics = buf;

    if (r.decay_rate > 0 && r.edge_density < 1e-6 && est <= est_limit &&
        r.last_decade <= decade_limit) {
        r.kind = TailKind::finite;
        r.asymptote = (side == Side::right) ? gm[edge] + est : gm[edge] - est;
        r.uncertainty = est + 10 * tol;
    } else if (min_mu >= 1e-3) {
        r.kind = TailKind::divergent;
    } else {
        r.kind = TailKind::inconclusive;
    }
    return r;
}

} // namespace

CumulativeIntegral CumulativeIntegral::build(const std::function<double(double)>& f, double x_min,
                                             double x_max, double tol, int n_min, bool positive) {
    if (!(x_min < 0.0 && 0.0 < x_max))
        throw error("cumulative build requires x_min < 0 < x_max, got [" + fmt(x_min) + ", " +
                    fmt(x_max) + "]");
    if (!(tol > 0.0)) throw error("cumulative build requires tol > 0");

    // density wrapper: positivity / finiteness checks at every sample
    auto g = [&f, positive](double x) {
        const double v = f(x);
        if (!std::isfinite(v))
            throw window_error("density overflow at x = " + fmt(x) +
                                   ": window reaches too far into a growing tail",
                               x);
        if (positive && v <= 0.0)
            throw invalid_superpotential("integrating factor is not positive at x = " + fmt(x) +
                                         " (value " + fmt(v) + ")");
        return v;
    };

    const double W = x_max - x_min;
    const int pieces = std::max(n_min - 1, 8);
    int nl = std::max(2, static_cast<int>(std::lround(pieces * (-x_min) / W)));
    int nr = std::max(2, pieces - nl);

    std::vector<double> seeds;
    for (int i = 0; i <= nl; ++i) seeds.push_back(x_min + (0.0 - x_min) * i / nl);
    seeds.back() = 0.0;
    for (int i = 1; i <= nr; ++i) seeds.push_back(0.0 + (x_max - 0.0) * i / nr);
    seeds.back() = x_max;

    std::vector<Leaf> leaves;
    leaves.reserve(4 * seeds.size());
    int leaf_budget = std::max<int>(50000, 64 * static_cast<int>(seeds.size()));
    std::vector<double> seed_vals(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) seed_vals[i] = g(seeds[i]);
    // Spend the refinement budget inside-out from 0 so that when a huge tail
    // wants endless splitting, the small side still gets fully resolved.
    std::vector<std::size_t> order(seeds.size() - 1);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&seeds](std::size_t a, std::size_t b) {
        return std::min(std::fabs(seeds[a]), std::fabs(seeds[a + 1])) <
               std::min(std::fabs(seeds[b]), std::fabs(seeds[b + 1]));
    });
    for (std::size_t i : order)
        refine(g, seeds[i], seeds[i + 1], seed_vals[i], seed_vals[i + 1], tol / W, 0, leaves,
               leaf_budget);
    std::sort(leaves.begin(), leaves.end(), [](const Leaf& a, const Leaf& b) { return a.a < b.a; });

    CumulativeIntegral ci;
    ci.tol_ = tol;
    ci.positive_ = positive;
    const std::size_t n = leaves.size() + 1;
    ci.xs_.resize(n);
    ci.gam_.resize(n);
    for (std::size_t i = 0; i < leaves.size(); ++i) ci.xs_[i] = leaves[i].a;
    ci.xs_.back() = leaves.back().b;

    std::size_t i0 = std::lower_bound(ci.xs_.begin(), ci.xs_.end(), 0.0) - ci.xs_.begin();
    ci.xs_[i0] = 0.0; // exact
    ci.gam_[i0] = 0.0;
    for (std::size_t i = i0; i + 1 < n; ++i) ci.gam_[i + 1] = ci.gam_[i] + leaves[i].value;
    for (std::size_t i = i0; i > 0; --i) ci.gam_[i - 1] = ci.gam_[i] - leaves[i - 1].value;

    ci.mu_.resize(n);
    for (std::size_t i = 0; i < n; ++i) ci.mu_[i] = g(ci.xs_[i]);
    ci.slope_ = ci.mu_;

    if (positive) {
        // Fritsch-Carlson box rule: slope <= 3 * adjacent secant keeps Gamma monotone
        for (std::size_t i = 0; i < n; ++i) {
            double cap = INFINITY;
            if (i > 0) cap = std::min(cap, 3.0 * (ci.gam_[i] - ci.gam_[i - 1]) /
                                               (ci.xs_[i] - ci.xs_[i - 1]));
            if (i + 1 < n) cap = std::min(cap, 3.0 * (ci.gam_[i + 1] - ci.gam_[i]) /
                                                   (ci.xs_[i + 1] - ci.xs_[i]));
            ci.slope_[i] = std::max(0.0, std::min(ci.slope_[i], cap));
        }
        ci.left_ = classify(ci, Side::left);
        ci.right_ = classify(ci, Side::right);
    }
    return ci;
}

CumulativeIntegral build_cumulative(const std::function<double(double)>& mu, double x_min,
                                    double x_max, double tol, int n_min) {
    return CumulativeIntegral::build(mu, x_min, x_max, tol, n_min, true);
}

CumulativeIntegral build_cumulative_signed(const std::function<double(double)>& g, double x_min,
                                           double x_max, double tol, int n_min) {
    return CumulativeIntegral::build(g, x_min, x_max, tol, n_min, false);
}

std::size_t CumulativeIntegral::locate(double x) const {
    if (x < xs_.front() || x > xs_.back())
        throw domain_error("x = " + fmt(x) + " outside the built window [" + fmt(xs_.front()) +
                           ", " + fmt(xs_.back()) + "]");
    std::size_t k = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
    if (k > 0) --k;
    if (k + 1 >= xs_.size()) k = xs_.size() - 2;
    return k;
}

double CumulativeIntegral::operator()(double x) const {
    const std::size_t k = locate(x);
    if (x == xs_[k]) return gam_[k];
    return hermite(xs_[k], xs_[k + 1], gam_[k], gam_[k + 1], slope_[k], slope_[k + 1], x);
}

double CumulativeIntegral::derivative(double x) const {
    const std::size_t k = locate(x);
    return hermite_slope(xs_[k], xs_[k + 1], gam_[k], gam_[k + 1], slope_[k], slope_[k + 1], x);
}

TailReport classify_tail(const CumulativeIntegral& ci, Side side) {
    if (!ci.positive_density())
        throw error("classify_tail: tails are only classified for positive densities");
    return side == Side::left ? ci.left_tail() : ci.right_tail();
}

std::optional<double> invert(const CumulativeIntegral& ci, double target) {
    const auto& gm = ci.values();
    if (target < gm.front() || target > gm.back()) return std::nullopt;
    auto it = std::lower_bound(gm.begin(), gm.end(), target);
    std::size_t k = it - gm.begin();
    if (k > 0) --k;
    if (k + 1 >= gm.size()) k = gm.size() - 2;
    double lo = ci.grid()[k], hi = ci.grid()[k + 1];
    for (int i = 0; i < 200 && hi - lo > 1e-15 * (1.0 + std::fabs(lo) + std::fabs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ci(mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace isospec::quad

#include "isospec/errors.hpp"
#include "isospec/family.hpp"

#include <cstdio>

namespace isospec::presets {

const std::vector<Info>& list() {
    static const std::vector<Info> infos = {
        {"case1a", "sqrt(u)", "x^2+1", {-4.0, 4.0},
         "phi = sqrt(x^2+1); Gamma(+inf) ~ 0.44779, so gamma_s ~ -0.44779 (right tail); "
         "left tail divergent: regular gammas are gamma < gamma_s only"},
        {"harmonic", "sqrt(u)", "x^2", {-6.0, 6.0},
         "phi = x (smooth branch of sqrt(x^2) through 0); Gamma(+-inf) = +-sqrt(pi)/2, "
         "gamma_s = +-0.886227; regular gammas are |gamma| > sqrt(pi)/2"},
        {"fresnel", "sin(u)", "x^2", {-2.0, 8.0},
         "phi = sin(x^2); mu stays above a positive floor (min on [0,8] ~ 0.1670165), "
         "Gamma diverges both ways: no regular gamma at all"},
        {"quartic", "u^2-1", "x-1", {-4.0, 8.0},
         "phi = (x-1)^2-1; Gamma(+inf) ~ 19.3694, gamma_s ~ -19.3694 (right tail); left tail "
         "divergent; deformations grow two peaks, equal heights near gamma ~ -28.3"},
        {"constant", "c", "x", {-10.0, 10.0},
         "phi = c (--c, default 1); Gamma(+inf) = 1/(2c) exactly, so gamma_s = -1/(2c); for "
         "regular gamma < -1/(2c) the density peak sits at x = -ln(2c|gamma| - 1)/(2c)"},
    };
    return infos;
}

bool exists(const std::string& name) {
    for (const Info& p : list())
        if (p.name == name) return true;
    return false;
}

family::SuperpotentialSpec make(const std::string& name, double c) {
    using family::make_spec;
    if (name == "case1a") {
        auto s = make_spec("sqrt(u)", "x^2+1", name);
        s.default_window = {-4.0, 4.0};
        return s;
    }
    if (name == "harmonic") {
        auto s = make_spec("sqrt(u)", "x^2", name);
        s.default_window = {-6.0, 6.0};
        // sqrt(x^2) evaluates to |x| and dF blows up at x = 0; the smooth
        // branch through the origin is phi = x.
        s.phi = expr::parse("x", "x");
        s.dphi = expr::parse("1", "x");
        return s;
    }
    if (name == "fresnel") {
        auto s = make_spec("sin(u)", "x^2", name);
        s.default_window = {-2.0, 8.0};
        return s;
    }
    if (name == "quartic") {
        auto s = make_spec("u^2-1", "x-1", name);
        s.default_window = {-4.0, 8.0};
        return s;
    }
    if (name == "constant") {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", c);
        auto s = make_spec(buf, "x", name);
        s.default_window = {-10.0, 10.0};
        return s;
    }
    throw error("unknown preset '" + name + "' (run list-presets for the catalog)");
}

} // namespace isospec::presets

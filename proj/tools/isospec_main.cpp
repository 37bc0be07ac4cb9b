// Command line front end: partner potentials, isospectral deformations, zero
// modes, gamma diagnostics and spectra as CSV/JSON. Exit codes: 0 success,
// 1 usage error, 2 domain/singularity error.

#include "CLI11.hpp"
#include "json.hpp"

#include "isospec/errors.hpp"
#include "isospec/family.hpp"
#include "isospec/spectral.hpp"
#include "isospec/verify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fam = isospec::family;
namespace presets = isospec::presets;
namespace spectral = isospec::spectral;
using ordered_json = nlohmann::ordered_json;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Opts {
    std::string preset;
    std::string F_src, f_src;
    double c = 1.0;
    std::string gamma_csv;
    double xmin = 0.0, xmax = 0.0;
    bool has_xmin = false, has_xmax = false;
    int n = 2001;
    int k = 5;
    double tol = 1e-10;
    double phi0 = 0.0;
    bool has_phi0 = false;
    std::string out;
    std::string format = "csv";
};

void add_model_flags(CLI::App* cmd, Opts& o) {
    cmd->add_option("--preset", o.preset, "preset name (see list-presets)");
    cmd->add_option("--F", o.F_src, "outer function F(u) of a custom superpotential");
    cmd->add_option("--f", o.f_src, "inner function f(x) of a custom superpotential");
    cmd->add_option("--c", o.c, "constant value for the constant preset (default 1)");
    cmd->add_option("--xmin", o.xmin, "window lower edge")->each([&o](const std::string&) {
        o.has_xmin = true;
    });
    cmd->add_option("--xmax", o.xmax, "window upper edge")->each([&o](const std::string&) {
        o.has_xmax = true;
    });
    cmd->add_option("--n", o.n, "grid points including endpoints (default 2001)");
    cmd->add_option("--tol", o.tol, "quadrature tolerance (default 1e-10)");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "csv or json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
}

void add_gamma_flag(CLI::App* cmd, Opts& o, bool required) {
    auto* opt = cmd->add_option("--gamma", o.gamma_csv, "comma-separated gamma values");
    if (required) opt->required();
}

struct Resolved {
    fam::SuperpotentialSpec spec;
    fam::Window window;
    double tol;
};

Resolved resolve(const Opts& o) {
    const bool custom = !o.F_src.empty() || !o.f_src.empty();
    if (!o.preset.empty() && custom) throw usage_error("--preset conflicts with --F/--f");
    if (o.preset.empty() && !custom)
        throw usage_error("give --preset NAME, or --F and --f for a custom superpotential");
    if (custom && (o.F_src.empty() || o.f_src.empty()))
        throw usage_error("custom superpotentials need both --F and --f");
    Resolved r{o.preset.empty() ? fam::make_spec(o.F_src, o.f_src)
                                : presets::make(o.preset, o.c),
               {}, o.tol};
    r.window = r.spec.default_window;
    if (o.has_xmin) r.window.x_min = o.xmin;
    if (o.has_xmax) r.window.x_max = o.xmax;
    if (!(r.window.x_max > r.window.x_min))
        throw usage_error("empty window: xmin must be below xmax");
    if (o.n < 5) throw usage_error("--n must be at least 5");
    return r;
}

std::vector<double> parse_gammas(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
            if (pos != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw usage_error("bad --gamma entry '" + tok + "'");
        }
    }
    if (out.empty()) throw usage_error("--gamma needs at least one value");
    return out;
}

std::vector<double> make_grid(fam::Window w, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    const double h = (w.x_max - w.x_min) / (n - 1);
    for (int i = 0; i < n; ++i) xs[i] = (i == n - 1) ? w.x_max : w.x_min + i * h;
    return xs;
}

std::string num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.12g", v);
    return b;
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw usage_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void emit_json(const Opts& o, const ordered_json& j) {
    Sink sink(o.out);
    sink.stream() << j.dump(2) << "\n";
}

// ---- commands ----

int cmd_list_presets() {
    std::printf("%-9s  %-9s  %-7s  %s\n", "name", "F(u)", "f(x)", "window");
    for (const auto& p : presets::list()) {
        std::printf("%-9s  %-9s  %-7s  [%g, %g]\n", p.name.c_str(), p.F_source.c_str(),
                    p.f_source.c_str(), p.window.x_min, p.window.x_max);
        std::printf("           %s\n", p.notes.c_str());
    }
    return 0;
}

int cmd_partners(const Opts& o) {
    const Resolved r = resolve(o);
    const auto xs = make_grid(r.window, o.n);
    if (o.format == "json") {
        ordered_json j;
        j["preset"] = r.spec.name;
        j["window"] = {r.window.x_min, r.window.x_max};
        // ordered_json is vector backed: a reference into it dies on the next
        // key insertion, so the arrays are built standalone and moved in.
        ordered_json jx, j1, j2;
        for (double x : xs) {
            const auto p = fam::partner_potentials(r.spec, x);
            jx.push_back(x);
            j1.push_back(p.V1);
            j2.push_back(p.V2);
        }
        j["x"] = std::move(jx);
        j["V1"] = std::move(j1);
        j["V2"] = std::move(j2);
        emit_json(o, j);
        return 0;
    }
    Sink sink(o.out);
    auto& os = sink.stream();
    os << "x,V1,V2\n";
    for (double x : xs) {
        const auto p = fam::partner_potentials(r.spec, x);
        os << num(x) << ',' << num(p.V1) << ',' << num(p.V2) << '\n';
    }
    return 0;
}

int cmd_integrating_factor(const Opts& o) {
    const Resolved r = resolve(o);
    const auto iff = fam::integrating_factor(r.spec, r.window, r.tol);
    const auto xs = make_grid(r.window, o.n);
    if (o.format == "json") {
        ordered_json j;
        j["preset"] = r.spec.name;
        j["window"] = {r.window.x_min, r.window.x_max};
        ordered_json jx, jm, jg;
        for (double x : xs) {
            jx.push_back(x);
            jm.push_back(iff->mu(x));
            jg.push_back(iff->gamma(x));
        }
        j["x"] = std::move(jx);
        j["mu"] = std::move(jm);
        j["gamma"] = std::move(jg);
        // divergent tails carry infinite limits, which dump as null
        j["gamma_limit_left"] = iff->gamma_limit_left();
        j["gamma_limit_right"] = iff->gamma_limit_right();
        emit_json(o, j);
        return 0;
    }
    Sink sink(o.out);
    auto& os = sink.stream();
    os << "x,mu,gamma\n";
    for (double x : xs)
        os << num(x) << ',' << num(iff->mu(x)) << ',' << num(iff->gamma(x)) << '\n';
    return 0;
}

int cmd_family(const Opts& o) {
    const Resolved r = resolve(o);
    const auto gammas = parse_gammas(o.gamma_csv);
    const auto iff = fam::integrating_factor(r.spec, r.window, r.tol);
    const auto xs = make_grid(r.window, o.n);

    std::vector<double> v1(xs.size()), v2(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto p = fam::partner_potentials(r.spec, xs[i]);
        v1[i] = p.V1;
        v2[i] = p.V2;
    }

    if (o.format == "json") {
        ordered_json j;
        j["preset"] = r.spec.name;
        j["window"] = {r.window.x_min, r.window.x_max};
        j["x"] = xs;
        j["V1"] = v1;
        j["V2"] = v2;
        auto& curves = j["curves"];
        for (double g : gammas) {
            fam::ParametricFamily pf(iff, g);
            ordered_json c;
            c["gamma"] = g;
            if (const auto root = pf.singularity())
                c["singular_at"] = *root;
            else
                c["singular_at"] = nullptr;
            const double nsq = pf.regular_on_window()
                                   ? pf.zero_mode_sq_norm(r.window.x_min, r.window.x_max)
                                   : 1.0;
            ordered_json jv, jp, jq;
            for (double x : xs) {
                const double psi = pf.zero_mode(x);
                jv.push_back(pf.parametric_potential(x));
                jp.push_back(psi);
                jq.push_back(psi * psi / nsq);
            }
            c["V1gamma"] = std::move(jv);
            c["psi0gamma"] = std::move(jp);
            c["psi0gamma_sq_normalized"] = std::move(jq);
            curves.push_back(std::move(c));
        }
        emit_json(o, j);
        return 0;
    }

    Sink sink(o.out);
    auto& os = sink.stream();
    os << "x,V1,V2,gamma,V1gamma,psi0gamma,psi0gamma_sq_normalized\n";
    for (double g : gammas) {
        fam::ParametricFamily pf(iff, g);
        // Normalize over the window when the member is regular there; a
        // singular member has no finite window norm, so its raw psi^2 is kept.
        const double nsq = pf.regular_on_window()
                               ? pf.zero_mode_sq_norm(r.window.x_min, r.window.x_max)
                               : 1.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double psi = pf.zero_mode(xs[i]);
            os << num(xs[i]) << ',' << num(v1[i]) << ',' << num(v2[i]) << ',' << num(g) << ','
               << num(pf.parametric_potential(xs[i])) << ',' << num(psi) << ','
               << num(psi * psi / nsq) << '\n';
        }
    }
    return 0;
}

int cmd_zeromode(const Opts& o) {
    const Resolved r = resolve(o);
    const auto gammas = parse_gammas(o.gamma_csv);
    const auto iff = fam::integrating_factor(r.spec, r.window, r.tol);
    const auto xs = make_grid(r.window, o.n);

    if (o.format == "json") {
        ordered_json j;
        j["preset"] = r.spec.name;
        j["window"] = {r.window.x_min, r.window.x_max};
        j["x"] = xs;
        auto& curves = j["curves"];
        for (double g : gammas) {
            fam::ParametricFamily pf(iff, g);
            ordered_json c;
            c["gamma"] = g;
            try {
                const double ga = fam::gamma_convert(*iff, g, r.window);
                c["gamma_appendix"] = ga;
                try {
                    c["N"] = fam::normalization_constant(ga);
                } catch (const isospec::forbidden_interval_error&) {
                    c["N"] = nullptr;
                }
            } catch (const isospec::nonnormalizable_error&) {
                c["gamma_appendix"] = nullptr;
                c["N"] = nullptr;
            }
            const double nsq = pf.regular_on_window()
                                   ? pf.zero_mode_sq_norm(r.window.x_min, r.window.x_max)
                                   : 1.0;
            ordered_json jp, jq;
            for (double x : xs) {
                const double psi = pf.zero_mode(x);
                jp.push_back(psi);
                jq.push_back(psi * psi / nsq);
            }
            c["psi0gamma"] = std::move(jp);
            c["psi0gamma_sq_normalized"] = std::move(jq);
            curves.push_back(std::move(c));
        }
        emit_json(o, j);
        return 0;
    }

    Sink sink(o.out);
    auto& os = sink.stream();
    os << "x,gamma,psi0gamma,psi0gamma_sq_normalized\n";
    for (double g : gammas) {
        fam::ParametricFamily pf(iff, g);
        const double nsq = pf.regular_on_window()
                               ? pf.zero_mode_sq_norm(r.window.x_min, r.window.x_max)
                               : 1.0;
        for (double x : xs) {
            const double psi = pf.zero_mode(x);
            os << num(x) << ',' << num(g) << ',' << num(psi) << ',' << num(psi * psi / nsq)
               << '\n';
        }
    }
    return 0;
}

int cmd_regular_range(const Opts& o) {
    const Resolved r = resolve(o);
    const auto rep = fam::regular_range(r.spec, r.window, r.tol);
    ordered_json j;
    j["preset"] = r.spec.name;
    auto& gs = j["gamma_s"];
    for (const auto& b : rep.gamma_s) {
        ordered_json e;
        if (b.value)
            e["value"] = *b.value;
        else
            e["value"] = nullptr;
        e["side"] = b.side == isospec::quad::Side::left ? "left" : "right";
        // inconclusive tails are treated as divergent for range purposes
        e["tail"] = b.tail == isospec::quad::TailKind::finite ? "finite" : "divergent";
        gs.push_back(std::move(e));
    }
    auto& ri = j["regular_intervals"];
    ri = ordered_json::array();
    for (const auto& iv : rep.regular) ri.push_back({iv.lo, iv.hi}); // inf dumps as null
    auto& ni = j["normalizable_intervals"];
    ni = ordered_json::array();
    for (const auto& iv : rep.normalizable) ni.push_back({iv.lo, iv.hi});
    emit_json(o, j);
    return 0;
}

int cmd_gamma_star(const Opts& o) {
    const Resolved r = resolve(o);
    const auto iff = fam::integrating_factor(r.spec, r.window, r.tol);
    const auto xs = make_grid(r.window, o.n);
    std::vector<double> gx, gv; // phi_p roots are poles of gamma*; skip them
    for (double x : xs) {
        if (r.spec.phi_p(x) == 0.0) continue;
        gx.push_back(x);
        gv.push_back(fam::gamma_star(*iff, x));
    }
    if (o.format == "json") {
        ordered_json j;
        j["preset"] = r.spec.name;
        j["window"] = {r.window.x_min, r.window.x_max};
        j["x"] = gx;
        j["gamma_star"] = gv;
        emit_json(o, j);
        return 0;
    }
    Sink sink(o.out);
    auto& os = sink.stream();
    os << "x,gamma_star\n";
    for (std::size_t i = 0; i < gx.size(); ++i) os << num(gx[i]) << ',' << num(gv[i]) << '\n';
    return 0;
}

int cmd_peaks(const Opts& o) {
    const Resolved r = resolve(o);
    const auto gammas = parse_gammas(o.gamma_csv);
    const auto iff = fam::integrating_factor(r.spec, r.window, r.tol);
    if (o.format == "json") {
        ordered_json j;
        j["preset"] = r.spec.name;
        auto& res = j["results"];
        for (double g : gammas) {
            fam::ParametricFamily pf(iff, g);
            ordered_json e;
            e["gamma"] = g;
            auto& pk = e["peaks"];
            pk = ordered_json::array();
            for (const auto& p : fam::peak_analysis(pf))
                pk.push_back({{"x", p.x}, {"height", p.height}});
            res.push_back(std::move(e));
        }
        emit_json(o, j);
        return 0;
    }
    Sink sink(o.out);
    auto& os = sink.stream();
    os << "gamma,x_peak,height\n";
    for (double g : gammas) {
        fam::ParametricFamily pf(iff, g);
        for (const auto& p : fam::peak_analysis(pf))
            os << num(g) << ',' << num(p.x) << ',' << num(p.height) << '\n';
    }
    return 0;
}

int cmd_gamma_c(const Opts& o) {
    const Resolved r = resolve(o);
    const auto gammas = parse_gammas(o.gamma_csv);
    if (gammas.size() != 2)
        throw usage_error("gamma-c needs --gamma \"lo,hi\" with exactly two values");
    const auto iff = fam::integrating_factor(r.spec, r.window, r.tol);
    const double gc = fam::find_gamma_c(iff, gammas[0], gammas[1]);
    if (o.format == "json") {
        ordered_json j;
        j["preset"] = r.spec.name;
        j["bracket"] = {gammas[0], gammas[1]};
        j["gamma_c"] = gc;
        emit_json(o, j);
        return 0;
    }
    Sink sink(o.out);
    sink.stream() << "gamma_c\n" << num(gc) << "\n";
    return 0;
}

int cmd_gamma_from_phi0(const Opts& o) {
    const Resolved r = resolve(o);
    if (!o.has_phi0) throw usage_error("gamma-from-phi0 needs --phi0 VALUE");
    const double g = fam::gamma_from_initial_condition(r.spec, o.phi0);
    if (o.format == "json") {
        ordered_json j;
        j["preset"] = r.spec.name;
        j["phi_g_at_0"] = o.phi0;
        j["gamma"] = g;
        emit_json(o, j);
        return 0;
    }
    Sink sink(o.out);
    sink.stream() << "gamma\n" << num(g) << "\n";
    return 0;
}

int cmd_spectrum(const Opts& o) {
    const Resolved r = resolve(o);
    const auto gammas = parse_gammas(o.gamma_csv);
    if (gammas.size() != 1) throw usage_error("spectrum takes exactly one --gamma value");
    const auto rep = spectral::isospectral_check(r.spec, gammas[0], r.window, o.n, o.k);
    if (o.format == "json") {
        ordered_json j;
        j["preset"] = r.spec.name;
        j["gamma"] = gammas[0];
        j["window"] = {r.window.x_min, r.window.x_max};
        j["n"] = rep.n;
        j["k"] = rep.k;
        j["grid_h"] = rep.grid_h;
        j["V1"] = rep.v1;
        j["V2"] = rep.v2;
        j["V1gamma"] = rep.v1gamma;
        j["inserted_zero_mode"] = rep.inserted_zero_mode;
        j["inserted_level"] = rep.inserted_level; // NaN dumps as null when absent
        j["pair_diffs"] = rep.pair_diffs;
        j["max_pair_diff"] = rep.max_pair_diff;
        j["ladder_offset"] = rep.ladder_offset;
        j["ladder_diffs"] = rep.ladder_diffs;
        j["max_ladder_diff"] = rep.max_ladder_diff;
        j["residual_norms"] = rep.residual_norms;
        emit_json(o, j);
        return 0;
    }
    Sink sink(o.out);
    auto& os = sink.stream();
    os << "level,V1,V2,V1gamma\n";
    for (int i = 0; i < rep.k; ++i)
        os << i << ',' << num(rep.v1[i]) << ',' << num(rep.v2[i]) << ',' << num(rep.v1gamma[i])
           << '\n';
    return 0;
}

int cmd_verify() { return isospec::run_verify(std::cout) == 0 ? 0 : 2; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SUSY partner potentials and one-parameter isospectral deformations"};
    app.require_subcommand(1);

    Opts o;
    int which = 0;

    auto* c_list = app.add_subcommand("list-presets", "catalog of built-in superpotentials");
    c_list->callback([&] { which = 1; });

    auto* c_partners = app.add_subcommand("partners", "partner potentials V1, V2 on a grid");
    add_model_flags(c_partners, o);
    c_partners->callback([&] { which = 2; });

    auto* c_iff = app.add_subcommand("integrating-factor",
                                     "integrating factor mu and its running integral");
    add_model_flags(c_iff, o);
    c_iff->callback([&] { which = 12; });

    auto* c_family =
        app.add_subcommand("family", "deformed potential and zero mode for each gamma");
    add_model_flags(c_family, o);
    add_gamma_flag(c_family, o, true);
    c_family->callback([&] { which = 3; });

    auto* c_zero = app.add_subcommand("zeromode", "zero modes for each gamma");
    add_model_flags(c_zero, o);
    add_gamma_flag(c_zero, o, true);
    c_zero->callback([&] { which = 4; });

    auto* c_range =
        app.add_subcommand("regular-range", "critical gammas and the regular gamma set (JSON)");
    add_model_flags(c_range, o);
    c_range->callback([&] { which = 5; });

    auto* c_star = app.add_subcommand("gamma-star", "gamma placing the density peak at x");
    add_model_flags(c_star, o);
    c_star->callback([&] { which = 6; });

    auto* c_peaks = app.add_subcommand("peaks", "density peak positions and heights");
    add_model_flags(c_peaks, o);
    add_gamma_flag(c_peaks, o, true);
    c_peaks->callback([&] { which = 7; });

    auto* c_gc =
        app.add_subcommand("gamma-c", "gamma equalizing the two peak heights in a bracket");
    add_model_flags(c_gc, o);
    add_gamma_flag(c_gc, o, true);
    c_gc->callback([&] { which = 8; });

    auto* c_spec = app.add_subcommand("spectrum", "low spectra of V1, V2 and the deformation");
    add_model_flags(c_spec, o);
    add_gamma_flag(c_spec, o, true);
    c_spec->add_option("--k", o.k, "number of levels to compare (default 5)");
    c_spec->callback([&] { which = 9; });

    auto* c_verify = app.add_subcommand("verify", "run the cross-module invariant suite");
    c_verify->callback([&] { which = 10; });

    auto* c_phi0 =
        app.add_subcommand("gamma-from-phi0", "gamma of the member with a given phi_g(0)");
    add_model_flags(c_phi0, o);
    c_phi0->add_option("--phi0", o.phi0, "phi_g at x = 0")->each([&o](const std::string&) {
        o.has_phi0 = true;
    });
    c_phi0->callback([&] { which = 11; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        switch (which) {
        case 1: return cmd_list_presets();
        case 2: return cmd_partners(o);
        case 3: return cmd_family(o);
        case 4: return cmd_zeromode(o);
        case 5: return cmd_regular_range(o);
        case 6: return cmd_gamma_star(o);
        case 7: return cmd_peaks(o);
        case 8: return cmd_gamma_c(o);
        case 9: return cmd_spectrum(o);
        case 10: return cmd_verify();
        case 11: return cmd_gamma_from_phi0(o);
        case 12: return cmd_integrating_factor(o);
        }
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const isospec::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

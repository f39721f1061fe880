// horolab: command-line front end for the horocycle-average toolkit.
// Subcommands mirror the library operations; every run emits CSV or JSON
// with a full config echo, the tool version, and per-value error estimates.
// Exit codes: 0 success, 2 validation failure, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "horolab/detail/parallel.hpp"
#include "horolab/dynamics.hpp"
#include "horolab/halfplane.hpp"
#include "horolab/lattice.hpp"
#include "horolab/modfun.hpp"
#include "horolab/specialfn.hpp"
#include "horolab/transforms.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using horolab::cplx;
using nlohmann::json;

struct Row {
    std::string param;
    double re = 0.0;
    double im = 0.0;
    double err = 0.0;
};

struct Report {
    json meta;
    std::vector<Row> rows;

    void emit(const std::string& format, const std::string& path) const {
        std::ostringstream body;
        if (format == "json") {
            json out;
            out["meta"] = meta;
            out["rows"] = json::array();
            for (const auto& r : rows)
                out["rows"].push_back({{"param", r.param},
                                       {"value_re", r.re},
                                       {"value_im", r.im},
                                       {"err_est", r.err}});
            body << out.dump(2) << "\n";
        } else {
            body << "# horolab " << meta.dump() << "\n";
            body << "param,value_re,value_im,err_est\n";
            char buf[128];
            for (const auto& r : rows) {
                std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.9g\n", r.re, r.im, r.err);
                body << r.param << buf;
            }
        }
        if (path.empty() || path == "-") {
            std::cout << body.str();
        } else {
            std::ofstream f(path);
            if (!f) throw horolab::validation_error("cannot open output file " + path);
            f << body.str();
        }
    }
};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct CommonOpts {
    double eps = 1e-10;
    int threads = 0;
    std::string format = "csv";
    std::string output = "-";

    void attach(CLI::App* app) {
        app->add_option("--eps", eps, "truncation budget (absolute)")
            ->check(CLI::Range(1e-14, 1e-2));
        app->add_option("--threads", threads,
                        "worker threads (0: HOROLAB_THREADS or hardware)");
        app->add_option("--out", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        app->add_option("--output", output, "output path ('-' for stdout)");
    }

    json meta(const std::string& command, json config) const {
        config["eps"] = eps;
        config["threads"] = threads;
        return json{{"version", kVersion}, {"command", command}, {"config", config}};
    }
};

struct FnOpts {
    std::string name = "poincare_typeII";
    double alpha_re = 0.3, alpha_im = 0.0;
    double beta = 0.5;
    int kappa = 1;
    int n = 0;
    double s0 = 1.25;

    void attach(CLI::App* app) {
        app->add_option("--fn", name,
                        "builtin: delta_cusp | eisenstein_fixed | poincare_typeII | "
                        "poincare_heterotic | j_invariant");
        app->add_option("--alpha", alpha_re, "Re alpha (poincare builtins)");
        app->add_option("--alpha-im", alpha_im, "Im alpha");
        app->add_option("--beta", beta, "beta (poincare_heterotic)");
        app->add_option("--kappa", kappa, "kappa (poincare_heterotic)");
        app->add_option("--n", n, "log power (poincare_typeII)");
        app->add_option("--s0", s0, "s0 (eisenstein_fixed)");
    }

    horolab::ModularFunctionSpec make() const {
        horolab::BuiltinParams p;
        p.alpha = cplx(alpha_re, alpha_im);
        p.beta = beta;
        p.kappa = kappa;
        p.n = n;
        p.s0 = s0;
        return horolab::make_builtin(name, p);
    }

    json config() const {
        return json{{"fn", name}, {"alpha", alpha_re}, {"alpha_im", alpha_im},
                    {"beta", beta}, {"kappa", kappa},  {"n", n},
                    {"s0", s0}};
    }
};

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 1)
        throw horolab::validation_error("grid: need 0 < lo < hi and points >= 1");
    std::vector<double> g;
    if (points == 1) {
        g.push_back(lo);
        return g;
    }
    for (int i = 0; i < points; ++i)
        g.push_back(lo * std::pow(hi / lo, double(i) / (points - 1)));
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"horolab: long-horocycle averages of modular-invariant functions"};
    app.require_subcommand(1);

    auto* c_reduce = app.add_subcommand("reduce", "reduce a point to the fundamental domain");
    CommonOpts o_reduce;
    double rx = 0.0, ry = 1.0;
    o_reduce.attach(c_reduce);
    c_reduce->add_option("--x", rx)->required();
    c_reduce->add_option("--y", ry)->required();

    auto* c_plot = app.add_subcommand("horocycle-plot", "reduced horocycle point cloud");
    CommonOpts o_plot;
    double plot_y = 0.01;
    std::int64_t plot_n = 1000;
    o_plot.attach(c_plot);
    c_plot->add_option("--y", plot_y)->required();
    c_plot->add_option("--n", plot_n)->required();

    auto* c_eval = app.add_subcommand("eval", "evaluate a lattice series");
    CommonOpts o_eval;
    std::string series = "theta2";
    double ev_t = 1.0, ev_u = 1.0, ev_sre = 1.5, ev_sim = 0.0, ev_x = 0.0, ev_y = 1.0;
    o_eval.attach(c_eval);
    c_eval->add_option("--series", series)
        ->check(CLI::IsMember({"theta1", "theta2", "eisenstein", "estar"}));
    c_eval->add_option("--t", ev_t);
    c_eval->add_option("--u", ev_u);
    c_eval->add_option("--s-re", ev_sre);
    c_eval->add_option("--s-im", ev_sim);
    c_eval->add_option("--x", ev_x);
    c_eval->add_option("--y", ev_y);

    auto* c_avg = app.add_subcommand("avg", "constant-term sweep a0(y)");
    CommonOpts o_avg;
    FnOpts f_avg;
    double avg_lo = 0.05, avg_hi = 10.0;
    int avg_pts = 20;
    bool avg_quad = false;
    o_avg.attach(c_avg);
    f_avg.attach(c_avg);
    c_avg->add_option("--y-min", avg_lo);
    c_avg->add_option("--y-max", avg_hi);
    c_avg->add_option("--points", avg_pts);
    c_avg->add_flag("--quadrature", avg_quad, "force the quadrature route");

    auto* c_unf = app.add_subcommand("unfold-check", "theta pairing vs i(t)");
    CommonOpts o_unf;
    FnOpts f_unf;
    double unf_t = 2.0;
    o_unf.attach(c_unf);
    f_unf.attach(c_unf);
    c_unf->add_option("--t", unf_t);

    auto* c_lem = app.add_subcommand("lemma-check", "theta inversion identity residuals");
    CommonOpts o_lem;
    FnOpts f_lem;
    double lem_lo = 0.2, lem_hi = 5.0;
    int lem_pts = 9;
    o_lem.attach(c_lem);
    f_lem.attach(c_lem);
    c_lem->add_option("--t-min", lem_lo);
    c_lem->add_option("--t-max", lem_hi);
    c_lem->add_option("--points", lem_pts);

    auto* c_ia = app.add_subcommand("i-asym", "i(t) sweep with asymptotic ratios");
    CommonOpts o_ia;
    FnOpts f_ia;
    double ia_lo = 1e-3, ia_hi = 100.0;
    int ia_pts = 13;
    o_ia.attach(c_ia);
    f_ia.attach(c_ia);
    c_ia->add_option("--t-min", ia_lo);
    c_ia->add_option("--t-max", ia_hi);
    c_ia->add_option("--points", ia_pts);

    auto* c_rs = app.add_subcommand("rs", "Rankin-Selberg transform values and pole fits");
    CommonOpts o_rs;
    FnOpts f_rs;
    double rs_sre = 1.5, rs_sim = 0.0;
    double rs_pole = 0.0;
    bool rs_do_pole = false;
    o_rs.attach(c_rs);
    f_rs.attach(c_rs);
    c_rs->add_option("--s-re", rs_sre);
    c_rs->add_option("--s-im", rs_sim);
    auto* pole_opt = c_rs->add_option("--residue-at", rs_pole, "fit the residue at this pole");

    auto* c_fit = app.add_subcommand("fit", "asymptotic fit of a0 near y = 0");
    CommonOpts o_fit;
    FnOpts f_fit;
    double fit_lo = 1e-3, fit_hi = 5e-2;
    int fit_pts = 40;
    bool fit_zeros = false;
    o_fit.attach(c_fit);
    f_fit.attach(c_fit);
    c_fit->add_option("--y-min", fit_lo);
    c_fit->add_option("--y-max", fit_hi);
    c_fit->add_option("--points", fit_pts);
    c_fit->add_flag("--zero-terms", fit_zeros, "include zeta-zero oscillation basis");

    auto* c_eq = app.add_subcommand("equidist", "horocycle equidistribution ratios");
    CommonOpts o_eq;
    std::vector<double> eq_ys{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    std::int64_t eq_n = 1000000;
    std::vector<double> eq_box{0.1, 0.4, 1.2, 2.0};
    o_eq.attach(c_eq);
    c_eq->add_option("--y", eq_ys, "heights (repeatable)");
    c_eq->add_option("--n", eq_n);
    c_eq->add_option("--box", eq_box, "x_lo x_hi y_lo y_hi")->expected(4);

    auto* c_cp = app.add_subcommand("cusp-probe", "vertical approach to a rational cusp");
    CommonOpts o_cp;
    FnOpts f_cp;
    f_cp.name = "poincare_heterotic";
    std::int64_t cp_a = 1, cp_c = 2;
    double cp_lo = 5e-3, cp_hi = 2e-2;
    int cp_pts = 6, cp_farey_q = 0;
    o_cp.attach(c_cp);
    f_cp.attach(c_cp);
    c_cp->add_option("--a", cp_a, "cusp numerator");
    c_cp->add_option("--c", cp_c, "cusp denominator");
    c_cp->add_option("--y-min", cp_lo);
    c_cp->add_option("--y-max", cp_hi);
    c_cp->add_option("--points", cp_pts);
    c_cp->add_option("--farey-q", cp_farey_q, "probe every Farey cusp with denominator <= q");

    auto* c_z = app.add_subcommand("zeros", "critical-line zeta zeros from the in-repo finder");
    CommonOpts o_z;
    int z_count = 3;
    o_z.attach(c_z);
    c_z->add_option("--count", z_count);

    CLI11_PARSE(app, argc, argv);
    rs_do_pole = pole_opt->count() > 0;

    try {
        using namespace horolab;
        Report rep;

        if (*c_reduce) {
            auto r = reduce_to_fundamental({rx, ry});
            rep.meta = o_reduce.meta(
                "reduce", {{"x", rx},
                           {"y", ry},
                           {"matrix", {r.matrix.a, r.matrix.b, r.matrix.c, r.matrix.d}},
                           {"steps", r.steps}});
            rep.rows.push_back({"point", r.point.x, r.point.y, 0.0});
            rep.emit(o_reduce.format, o_reduce.output);
        } else if (*c_plot) {
            rep.meta = o_plot.meta("horocycle-plot", {{"y", plot_y}, {"n", plot_n}});
            auto pts = horocycle_image(plot_y, plot_n, o_plot.threads);
            rep.rows.reserve(pts.size());
            for (size_t k = 0; k < pts.size(); ++k)
                rep.rows.push_back({std::to_string(k), pts[k].point.x, pts[k].point.y, 0.0});
            rep.emit(o_plot.format, o_plot.output);
        } else if (*c_eval) {
            TruncationBudget b(o_eval.eps);
            rep.meta = o_eval.meta("eval", {{"series", series}, {"t", ev_t}, {"u", ev_u},
                                            {"s_re", ev_sre},   {"s_im", ev_sim},
                                            {"x", ev_x},        {"y", ev_y}});
            cplx v;
            std::string param;
            if (series == "theta1") {
                v = theta1(ev_u, b);
                param = fmt_double(ev_u);
            } else if (series == "theta2") {
                v = theta2(ev_t, {ev_x, ev_y}, b);
                param = fmt_double(ev_t);
            } else if (series == "eisenstein") {
                v = eisenstein_direct({ev_sre, ev_sim}, {ev_x, ev_y}, b);
                param = fmt_double(ev_sre);
            } else {
                v = eisenstein_star({ev_sre, ev_sim}, {ev_x, ev_y}, b);
                param = fmt_double(ev_sre);
            }
            rep.rows.push_back({param, v.real(), v.imag(), o_eval.eps});
            rep.emit(o_eval.format, o_eval.output);
        } else if (*c_avg) {
            auto f = f_avg.make();
            json cfg = f_avg.config();
            cfg["y_min"] = avg_lo;
            cfg["y_max"] = avg_hi;
            cfg["points"] = avg_pts;
            cfg["quadrature"] = avg_quad;
            rep.meta = o_avg.meta("avg", cfg);
            auto grid = log_grid(avg_lo, avg_hi, avg_pts);
            std::vector<Row> rows(grid.size());
            detail::parallel_for(std::int64_t(grid.size()), o_avg.threads,
                                 [&](std::int64_t i) {
                                     cplx v = constant_term(f, grid[size_t(i)],
                                                            TruncationBudget(o_avg.eps),
                                                            !avg_quad);
                                     rows[size_t(i)] = {fmt_double(grid[size_t(i)]),
                                                        v.real(), v.imag(), o_avg.eps};
                                 });
            rep.rows = std::move(rows);
            rep.emit(o_avg.format, o_avg.output);
        } else if (*c_unf) {
            auto f = f_unf.make();
            json cfg = f_unf.config();
            cfg["t"] = unf_t;
            rep.meta = o_unf.meta("unfold-check", cfg);
            TruncationBudget b(o_unf.eps);
            cplx pair = theta_pairing(f, unf_t, b);
            cplx it = i_of_t(f, unf_t, b);
            double resid = std::abs(pair - it) / (1.0 + std::abs(it));
            rep.rows.push_back({"theta_pairing", pair.real(), pair.imag(), o_unf.eps});
            rep.rows.push_back({"i_of_t", it.real(), it.imag(), o_unf.eps});
            rep.rows.push_back({"relative_residual", resid, 0.0, 0.0});
            rep.emit(o_unf.format, o_unf.output);
        } else if (*c_lem) {
            auto f = f_lem.make();
            if (!f.exact_C0) throw validation_error("lemma-check: builtin carries no closed C0");
            json cfg = f_lem.config();
            cfg["t_min"] = lem_lo;
            cfg["t_max"] = lem_hi;
            cfg["points"] = lem_pts;
            rep.meta = o_lem.meta("lemma-check", cfg);
            const cplx C0 = *f.exact_C0;
            for (double t : log_grid(lem_lo, lem_hi, lem_pts)) {
                TruncationBudget b(o_lem.eps);
                cplx lhs = i_of_t(f, t, b);
                cplx rhs = i_of_t(f, 1.0 / t, b) / t + C0 / t - C0;
                double resid = std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
                rep.rows.push_back({fmt_double(t), resid, 0.0, o_lem.eps});
            }
            rep.emit(o_lem.format, o_lem.output);
        } else if (*c_ia) {
            auto f = f_ia.make();
            json cfg = f_ia.config();
            cfg["t_min"] = ia_lo;
            cfg["t_max"] = ia_hi;
            cfg["points"] = ia_pts;
            rep.meta = o_ia.meta("i-asym", cfg);
            for (double t : log_grid(ia_lo, ia_hi, ia_pts)) {
                cplx v = i_of_t(f, t, TruncationBudget(o_ia.eps));
                rep.rows.push_back({fmt_double(t), v.real(), v.imag(), o_ia.eps});
            }
            if (f.growth.kind == GrowthProfile::Kind::Polynomial && !f.growth.terms.empty()) {
                const auto& lead = f.growth.terms.front();
                cplx law = 2.0 * lead.c * zeta_star(2.0 * lead.alpha - 1.0) *
                           std::pow(cplx(ia_hi), lead.alpha - 1.0);
                cplx ratio = i_of_t(f, ia_hi, TruncationBudget(o_ia.eps)) / law;
                rep.rows.push_back({"large_t_ratio", ratio.real(), ratio.imag(), 0.0});
            }
            if (f.exact_C0) {
                cplx ratio = ia_lo * i_of_t(f, ia_lo, TruncationBudget(o_ia.eps)) / *f.exact_C0;
                rep.rows.push_back({"small_t_C0_ratio", ratio.real(), ratio.imag(), 0.0});
            }
            rep.emit(o_ia.format, o_ia.output);
        } else if (*c_rs) {
            auto f = f_rs.make();
            json cfg = f_rs.config();
            cfg["s_re"] = rs_sre;
            cfg["s_im"] = rs_sim;
            cfg["residue_fit"] = rs_do_pole;
            rep.meta = o_rs.meta("rs", cfg);
            if (rs_do_pole) {
                cplx res = rs_residue(f, {rs_pole, 0.0}, TruncationBudget(o_rs.eps));
                rep.rows.push_back(
                    {"residue@" + fmt_double(rs_pole), res.real(), res.imag(), o_rs.eps});
            } else {
                cplx v = rs_transform(f, {rs_sre, rs_sim}, TruncationBudget(o_rs.eps));
                rep.rows.push_back({fmt_double(rs_sre), v.real(), v.imag(), o_rs.eps});
            }
            rep.emit(o_rs.format, o_rs.output);
        } else if (*c_fit) {
            auto f = f_fit.make();
            json cfg = f_fit.config();
            cfg["y_min"] = fit_lo;
            cfg["y_max"] = fit_hi;
            cfg["points"] = fit_pts;
            cfg["zero_terms"] = fit_zeros;
            std::vector<std::pair<double, cplx>> samples;
            for (double y : log_grid(fit_lo, fit_hi, fit_pts))
                samples.push_back({y, constant_term(f, y, TruncationBudget(o_fit.eps))});
            auto fit = asymptotic_fit(samples, f.growth, fit_zeros);
            cfg["condition_number"] = fit.condition_number;
            cfg["residual_exponent"] = fit.residual_exponent;
            cfg["reliable"] = fit.reliable;
            rep.meta = o_fit.meta("fit", cfg);
            rep.rows.push_back({"C0_hat", fit.C0_hat.real(), fit.C0_hat.imag(), o_fit.eps});
            for (const auto& [label, coef] : fit.term_coeffs)
                rep.rows.push_back({label, coef.real(), coef.imag(), o_fit.eps});
            rep.emit(o_fit.format, o_fit.output);
        } else if (*c_eq) {
            Box u{eq_box[0], eq_box[1], eq_box[2], eq_box[3]};
            rep.meta = o_eq.meta("equidist", {{"y", eq_ys}, {"n", eq_n}, {"box", eq_box}});
            const double want = box_area(u) / (kPi / 3.0);
            for (double y : eq_ys) {
                double r = equidist_ratio(y, u, eq_n, o_eq.threads);
                rep.rows.push_back({fmt_double(y), r, 0.0, 1.0 / double(eq_n)});
            }
            rep.rows.push_back({"area_ratio", want, 0.0, 0.0});
            if (eq_ys.size() >= 4) {
                bool flagged = false;
                double expo = equidist_exponent(u, eq_ys, eq_n, &flagged, o_eq.threads);
                rep.rows.push_back({"exponent", expo, 0.0, flagged ? 1.0 : 0.0});
            }
            rep.emit(o_eq.format, o_eq.output);
        } else if (*c_cp) {
            auto f = f_cp.make();
            json cfg = f_cp.config();
            cfg["a"] = cp_a;
            cfg["c"] = cp_c;
            cfg["y_min"] = cp_lo;
            cfg["y_max"] = cp_hi;
            cfg["points"] = cp_pts;
            cfg["farey_q"] = cp_farey_q;
            rep.meta = o_cp.meta("cusp-probe", cfg);
            std::vector<FareyFraction> cusps;
            if (cp_farey_q > 0)
                cusps = farey_sequence(cp_farey_q);
            else
                cusps.emplace_back(cp_a, cp_c);
            auto ys = log_grid(cp_lo, cp_hi, cp_pts);
            for (const auto& cusp : cusps) {
                auto pts = cusp_probe(f, cusp, ys, TruncationBudget(o_cp.eps));
                std::string tag = std::to_string(cusp.a) + "/" + std::to_string(cusp.c);
                for (const auto& p : pts)
                    rep.rows.push_back({tag + "@" + fmt_double(p.y), p.log_abs_f, 0.0, o_cp.eps});
                double slope = cusp_probe_slope(pts);
                rep.rows.push_back({tag + "@slope", slope, 0.0, 0.0});
                // both candidate exponents, normalized as slope of log|f| vs 1/y
                rep.rows.push_back({tag + "@transport_slope",
                                    pts[0].predicted_transport * pts[0].y, 0.0, 0.0});
                rep.rows.push_back({tag + "@printed_slope",
                                    pts[0].predicted_printed * pts[0].y, 0.0, 0.0});
            }
            rep.emit(o_cp.format, o_cp.output);
        } else if (*c_z) {
            rep.meta = o_z.meta("zeros", {{"count", z_count}});
            for (int k = 1; k <= z_count; ++k)
                rep.rows.push_back({std::to_string(k), zeta_zero_find(k), 0.0, 1e-10});
            rep.emit(o_z.format, o_z.output);
        }
        return 0;
    } catch (const horolab::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const horolab::pole_error& e) {
        std::cerr << "numerical failure (pole): " << e.what() << "\n";
        return 3;
    } catch (const horolab::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

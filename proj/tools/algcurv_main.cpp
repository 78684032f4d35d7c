#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "algcurv/oracle.hpp"
#include "algcurv/parse.hpp"
#include "algcurv/report.hpp"

using namespace algcurv;

namespace {

struct CommonArgs {
    std::string f_text;
    std::string g_text;
    std::string point_text;
    std::string vars_text;
    int max_order = 0;
    bool json = false;
    bool oracle = false;
};

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        out.push_back(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

void print_value(std::ostream& os, const CurvatureValue& k) {
    if (k.finite)
        os << k.value;
    else
        os << "inf";
}

std::string format_direction(const std::vector<Complex>& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        char buf[64];
        if (v[i].imag() == 0.0)
            std::snprintf(buf, sizeof buf, "%.6g", v[i].real());
        else
            std::snprintf(buf, sizeof buf, "%.6g%+.6gi", v[i].real(), v[i].imag());
        out += buf;
    }
    return out + ")";
}

int run_plane(const CommonArgs& args) {
    std::vector<std::string> vars = args.vars_text.empty() ? std::vector<std::string>{"x", "y"}
                                                           : split_names(args.vars_text);
    std::vector<Rational> point = point_from_string(args.point_text);
    Poly f = parse_poly(args.f_text, vars);
    auto t0 = std::chrono::steady_clock::now();
    PlaneAnalysis a = plane_branch_curvatures(f, point, args.max_order);
    double elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    Json report = plane_report(args.f_text, point, a);

    if (args.oracle) {
        for (std::size_t i = 0; i < a.branches.size(); ++i) {
            const PlaneBranch& b = a.branches[i];
            if (!b.tangent.is_real || !b.curvature.finite) continue;
            try {
                auto traces = trace_plane_fan(f, point,
                                              {b.tangent.components[0].real(), b.tangent.components[1].real()});
                double best = std::numeric_limits<double>::quiet_NaN(), gap = 1e300;
                for (const auto& tr : traces) {
                    double est = estimate_curvature(tr.samples, point);
                    if (std::abs(est - b.curvature.value) < gap) {
                        gap = std::abs(est - b.curvature.value);
                        best = est;
                    }
                }
                report["branches"][i]["oracle_curvature"] = best;
            } catch (const Error&) {
                // tracing is best-effort decoration
            }
        }
    }

    if (args.json) {
        (void)elapsed_ms;  // timing stays out of the byte-stable JSON
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "plane curve: " << args.f_text << "\npoint: " << args.point_text
                  << "\nmultiplicity: " << a.multiplicity << "\n";
        for (const PlaneBranch& b : a.branches) {
            std::cout << "  tangent " << format_direction(b.tangent.components) << "  x" << b.multiplicity
                      << "  curvature ";
            print_value(std::cout, b.curvature);
            std::cout << "  [" << to_string(b.diagnostics) << "]\n";
        }
        for (const std::string& w : a.warnings) std::cout << "  note: " << w << "\n";
        std::cout << "elapsed: " << elapsed_ms << " ms\n";
    }
    return 0;
}

int run_surface(const CommonArgs& args) {
    std::vector<std::string> vars = args.vars_text.empty() ? std::vector<std::string>{"x", "y", "z"}
                                                           : split_names(args.vars_text);
    std::vector<Rational> point = point_from_string(args.point_text);
    Poly f = parse_poly(args.f_text, vars);
    auto t0 = std::chrono::steady_clock::now();
    SurfaceAnalysis a = surface_branch_curvatures(f, point, args.max_order);
    double elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    Json report = surface_report(args.f_text, point, a);

    if (args.oracle) {
        for (std::size_t i = 0; i < a.branches.size(); ++i) {
            const SurfaceBranch& b = a.branches[i];
            if (!b.normal.is_real || !b.curvature_defined) continue;
            try {
                std::array<double, 3> n{b.normal.components[0].real(), b.normal.components[1].real(),
                                        b.normal.components[2].real()};
                std::array<double, 3> seed{1, 0, 0};
                if (std::abs(n[0]) > 0.9) seed = {0, 1, 0};
                std::array<double, 3> u{}, w{};
                double dots = seed[0] * n[0] + seed[1] * n[1] + seed[2] * n[2];
                double ul = 0;
                for (int c = 0; c < 3; ++c) {
                    u[c] = seed[c] - dots * n[c];
                    ul += u[c] * u[c];
                }
                ul = std::sqrt(ul);
                for (int c = 0; c < 3; ++c) u[c] /= ul;
                w = {n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]};
                // probe four sections offset from the frame axes; sections right
                // along an asymptotic direction of a singular sheet can carry
                // fractional-power terms that spoil the estimate
                std::array<double, 4> theta{}, kappa{};
                for (int a = 0; a < 4; ++a) {
                    theta[a] = (22.5 + 45.0 * a) * M_PI / 180.0;
                    std::array<double, 3> dir{};
                    for (int c = 0; c < 3; ++c)
                        dir[c] = std::cos(theta[a]) * u[c] + std::sin(theta[a]) * w[c];
                    kappa[a] = normal_section_curvature(f, point, n, dir);
                }
                // Euler's relation: kappa(theta) = H + A cos 2theta + B sin 2theta
                double hmean = (kappa[0] + kappa[1] + kappa[2] + kappa[3]) / 4.0;
                double acoef = 0.0, bcoef = 0.0;
                for (int a = 0; a < 4; ++a) {
                    acoef += kappa[a] * std::cos(2 * theta[a]) / 2.0;
                    bcoef += kappa[a] * std::sin(2 * theta[a]) / 2.0;
                }
                report["branches"][i]["oracle_mean_abs"] = std::abs(hmean);
                report["branches"][i]["oracle_gauss"] = hmean * hmean - acoef * acoef - bcoef * bcoef;
            } catch (const Error&) {
            }
        }
    }

    if (args.json) {
        (void)elapsed_ms;
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "surface: " << args.f_text << "\npoint: " << args.point_text
                  << "\nmultiplicity: " << a.multiplicity << "\n";
        for (const SurfaceBranch& b : a.branches) {
            std::cout << "  normal " << format_direction(b.normal.components);
            if (b.curvature_defined)
                std::cout << "  K_gauss " << b.gauss << "  K_mean " << b.mean_signed << "  |K_mean| "
                          << b.mean_abs;
            std::cout << "  [" << to_string(b.diagnostics) << "]\n";
        }
        for (const std::string& w : a.warnings) std::cout << "  note: " << w << "\n";
        std::cout << "elapsed: " << elapsed_ms << " ms\n";
    }
    return 0;
}

int run_space(const CommonArgs& args) {
    std::vector<std::string> vars = args.vars_text.empty() ? std::vector<std::string>{"x", "y", "z"}
                                                           : split_names(args.vars_text);
    std::vector<Rational> point = point_from_string(args.point_text);
    Poly f = parse_poly(args.f_text, vars);
    Poly g = parse_poly(args.g_text, vars);
    auto t0 = std::chrono::steady_clock::now();
    SpaceAnalysis a = space_branch_frenet(f, g, point, args.max_order > 0 ? args.max_order : 10);
    double elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    Json report = space_report(args.f_text, args.g_text, point, a);

    if (args.oracle) {
        for (std::size_t i = 0; i < a.branches.size(); ++i) {
            const SpaceBranch& b = a.branches[i];
            if (!b.tangent.is_real || !b.curvature.finite) continue;
            try {
                auto samples = trace_space_branch(f, g, point,
                                                  {b.tangent.components[0].real(), b.tangent.components[1].real(),
                                                   b.tangent.components[2].real()});
                auto [k, tau] = estimate_frenet(samples, point);
                report["branches"][i]["oracle_curvature"] = k;
                report["branches"][i]["oracle_torsion"] = tau;
            } catch (const Error&) {
            }
        }
    }

    if (args.json) {
        (void)elapsed_ms;
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "space curve: " << args.f_text << " = " << args.g_text << " = 0\npoint: " << args.point_text
                  << "\nmultiplicity: " << a.multiplicity << "\n";
        for (const SpaceBranch& b : a.branches) {
            std::cout << "  tangent " << format_direction(b.tangent.components) << "  x" << b.multiplicity
                      << "  curvature ";
            print_value(std::cout, b.curvature);
            std::cout << "  torsion ";
            if (b.torsion.defined)
                std::cout << b.torsion.value;
            else
                std::cout << "undetermined";
            std::cout << "  [" << to_string(b.diagnostics) << "]\n";
        }
        for (const std::string& w : a.warnings) std::cout << "  note: " << w << "\n";
        std::cout << "elapsed: " << elapsed_ms << " ms\n";
    }
    return 0;
}

struct TraceArgs {
    std::string f_text;
    std::string g_text;
    std::string point_text;
    std::string direction_text;
    std::string vars_text;
    std::string out_path;
    double h0 = 1e-2;
    int steps = 12;
};

int run_trace(const TraceArgs& args) {
    bool space = !args.g_text.empty();
    std::vector<std::string> vars = args.vars_text.empty()
                                        ? (space ? std::vector<std::string>{"x", "y", "z"}
                                                 : std::vector<std::string>{"x", "y"})
                                        : split_names(args.vars_text);
    std::vector<Rational> point = point_from_string(args.point_text);
    std::vector<Rational> dir = point_from_string(args.direction_text);

    std::vector<TraceSample> samples;
    if (space) {
        Poly f = parse_poly(args.f_text, vars);
        Poly g = parse_poly(args.g_text, vars);
        samples = trace_space_branch(f, g, point, {to_double(dir.at(0)), to_double(dir.at(1)), to_double(dir.at(2))},
                                     args.h0, args.steps);
    } else {
        Poly f = parse_poly(args.f_text, vars);
        samples = trace_plane_branch(f, point, {to_double(dir.at(0)), to_double(dir.at(1))}, args.h0, args.steps);
    }

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!args.out_path.empty()) {
        file.open(args.out_path);
        if (!file) throw Error(ErrorCode::BadInput, "cannot open output file " + args.out_path);
        os = &file;
    }
    *os << (space ? "idx,h,x,y,z,residual\n" : "idx,h,x,y,residual\n");
    os->precision(17);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        *os << i << "," << samples[i].h;
        for (double c : samples[i].x) *os << "," << c;
        *os << "," << samples[i].residual << "\n";
    }
    return 0;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_g) {
    cmd->add_option("--f", args.f_text, "polynomial F")->required();
    if (with_g) cmd->add_option("--g", args.g_text, "polynomial G")->required();
    cmd->add_option("--point", args.point_text, "comma-separated rational coordinates")->required();
    cmd->add_option("--max-order", args.max_order, "jet order cap");
    cmd->add_option("--vars", args.vars_text, "comma-separated variable names");
    cmd->add_flag("--json", args.json, "machine-readable output");
    cmd->add_flag("--oracle", args.oracle, "append traced numeric estimates per real branch");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature at singular and regular points of algebraic curves and surfaces"};
    app.require_subcommand(1);

    CommonArgs plane_args, surface_args, space_args;
    TraceArgs trace_args;

    CLI::App* plane_cmd = app.add_subcommand("plane", "branch curvatures of a plane curve F(x,y) = 0");
    add_common(plane_cmd, plane_args, false);

    CLI::App* surface_cmd = app.add_subcommand("surface", "branch curvatures of a surface F(x,y,z) = 0");
    add_common(surface_cmd, surface_args, false);

    CLI::App* space_cmd = app.add_subcommand("space", "curvature and torsion of the curve F = G = 0");
    add_common(space_cmd, space_args, true);

    CLI::App* trace_cmd = app.add_subcommand("trace", "trace a branch numerically and emit CSV samples");
    trace_cmd->add_option("--f", trace_args.f_text, "polynomial F")->required();
    trace_cmd->add_option("--g", trace_args.g_text, "second polynomial for space curves");
    trace_cmd->add_option("--point", trace_args.point_text, "base point")->required();
    trace_cmd->add_option("--direction", trace_args.direction_text, "trace direction")->required();
    trace_cmd->add_option("--h0", trace_args.h0, "starting radius (default 1e-2)");
    trace_cmd->add_option("--steps", trace_args.steps, "number of radius halvings (default 12)");
    trace_cmd->add_option("--vars", trace_args.vars_text, "comma-separated variable names");
    trace_cmd->add_option("--out", trace_args.out_path, "write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string kind;
    const CommonArgs* active = nullptr;
    try {
        if (plane_cmd->parsed()) {
            kind = "plane";
            active = &plane_args;
            return run_plane(plane_args);
        }
        if (surface_cmd->parsed()) {
            kind = "surface";
            active = &surface_args;
            return run_surface(surface_args);
        }
        if (space_cmd->parsed()) {
            kind = "space";
            active = &space_args;
            return run_space(space_args);
        }
        kind = "trace";
        return run_trace(trace_args);
    } catch (const Error& e) {
        bool json = active && active->json;
        if (json) {
            std::optional<std::string> g;
            if (!active->g_text.empty()) g = active->g_text;
            std::cout << error_report(kind, active->f_text, g, error_name(e.code()), e.what()).dump(2) << "\n";
        } else {
            std::cerr << e.what() << "\n";
        }
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

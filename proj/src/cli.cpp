#include "slgreen/cli.hpp"

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "slgreen/check.hpp"
#include "slgreen/config.hpp"
#include "slgreen/hilbert.hpp"

namespace slgreen {

namespace {

using Cplx = std::complex<double>;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), errc::invalid_argument, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// write-temp-then-rename so readers never observe a partial file
void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    const std::string tmp = out_path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), errc::invalid_argument, "cannot write '" + tmp + "'");
        out << payload;
    }
    require(std::rename(tmp.c_str(), out_path.c_str()) == 0, errc::invalid_argument,
            "cannot move '" + tmp + "' to '" + out_path + "'");
}

bool usage_class(errc code) {
    switch (code) {
        case errc::syntax_error:
        case errc::missing_key:
        case errc::bad_geometry:
        case errc::nonpositive_coupling_minor:
        case errc::zero_boundary_row:
        case errc::nonpositive_delta0:
        case errc::bad_range:
        case errc::invalid_argument:
            return true;
        default:
            return false;
    }
}

struct CommonFlags {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    double tol_lambda = 1e-10;
    int max_steps = 100000;

    Tolerances tolerances() const { return {abs_tol, rel_tol, max_steps}; }

    void attach(CLI::App* cmd) {
        cmd->add_option("--abs-tol", abs_tol, "integrator absolute tolerance");
        cmd->add_option("--rel-tol", rel_tol, "integrator relative tolerance");
        cmd->add_option("--tol-lambda", tol_lambda, "eigenvalue refinement tolerance");
        cmd->add_option("--max-steps", max_steps, "integrator step limit per side");
    }
};

int cmd_validate(const std::string& cfg_path) {
    const Problem p = parse_config(slurp(cfg_path));
    std::ostringstream out;
    out << "valid\n";
    out << "mode = " << (p.mode == ValidateMode::full ? "full" : "spectrum_only") << "\n";
    out << "d12 = " << fmt_double(p.minors.d12) << "\n";
    out << "d13 = " << fmt_double(p.minors.d13) << "\n";
    out << "d14 = " << fmt_double(p.minors.d14) << "\n";
    out << "d23 = " << fmt_double(p.minors.d23) << "\n";
    out << "d24 = " << fmt_double(p.minors.d24) << "\n";
    out << "d34 = " << fmt_double(p.minors.d34) << "\n";
    out << "delta0 = " << fmt_double(p.delta0()) << "\n";
    if (p.delta0_zero_warning)
        out << "warning: delta0 = 0, spectrum-only use (no Hilbert-space operations)\n";
    std::cout << out.str();
    return 0;
}

int cmd_eigs(const std::string& cfg_path, double lmin, double lmax, const CommonFlags& flags,
             const std::string& out_path) {
    const Problem p = parse_config(slurp(cfg_path));
    const std::vector<double> eigs =
        eigenvalues_in(p, lmin, lmax, flags.tolerances(), flags.tol_lambda);
    std::ostringstream csv;
    csv << "index,lambda,omega_residual\n";
    for (size_t i = 0; i < eigs.size(); ++i) {
        const double residual = std::fabs(omega_value(p, eigs[i], flags.tolerances()));
        csv << (i + 1) << "," << fmt_double(eigs[i]) << "," << fmt_double(residual) << "\n";
    }
    emit(out_path, csv.str());
    return 0;
}

int cmd_eigfun(const std::string& cfg_path, int index, double lmin, double lmax, int samples,
               const CommonFlags& flags, const std::string& out_path) {
    require(index >= 1, errc::invalid_argument, "--index is 1-based");
    require(samples >= 2, errc::invalid_argument, "--samples must be at least 2");
    const Problem p = parse_config(slurp(cfg_path));
    const std::vector<double> eigs =
        eigenvalues_in(p, lmin, lmax, flags.tolerances(), flags.tol_lambda);
    require(static_cast<size_t>(index) <= eigs.size(), errc::not_an_eigenvalue,
            "only " + std::to_string(eigs.size()) + " eigenvalues in [" + fmt_double(lmin) + ", " +
                fmt_double(lmax) + "]");
    Eigenpair pair = eigenfunction(p, eigs[static_cast<size_t>(index - 1)], flags.tolerances());
    pair.index = index;

    std::ostringstream csv;
    csv << "x,u,du\n";
    const double a = p.interval.a, c = p.interval.c, b = p.interval.b;
    for (int i = 0; i < samples; ++i) {
        const double x = a + (b - a) * i / (samples - 1);
        const State<double> s =
            x <= c ? pair.u_left.eval(std::min(x, c)) : pair.u_right.eval(x);
        csv << fmt_double(x) << "," << fmt_double(s.y) << "," << fmt_double(s.dy) << "\n";
    }
    csv << "tprime_b," << fmt_double(pair.tprime_b) << ",\n";
    emit(out_path, csv.str());
    return 0;
}

int cmd_charfn(const std::string& cfg_path, double lmin, double lmax, int n,
               const CommonFlags& flags, const std::string& out_path) {
    require(n >= 2, errc::invalid_argument, "--n must be at least 2");
    require(lmin < lmax, errc::bad_range, "need --min < --max");
    const Problem p = parse_config(slurp(cfg_path));
    std::vector<double> lambdas(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) lambdas[static_cast<size_t>(i)] = lmin + (lmax - lmin) * i / (n - 1);

    std::ostringstream csv;
    csv << "lambda,w_minus,w_plus,omega\n";
    for (double lambda : lambdas) {
        const auto basis = char_fn<double>(p, lambda, flags.tolerances());
        csv << fmt_double(lambda) << "," << fmt_double(basis.w_minus) << ","
            << fmt_double(basis.w_plus) << "," << fmt_double(basis.omega) << "\n";
    }
    emit(out_path, csv.str());
    return 0;
}

template <Scalar S>
std::string green_point(const Problem& p, S lambda, double x, double y,
                        const Tolerances& tol) {
    const auto basis = char_fn<S>(p, lambda, tol);
    const S g = green_eval(p, basis, x, y);
    if constexpr (is_complex_v<S>)
        return fmt_complex(g);
    else
        return fmt_double(g);
}

template <Scalar S>
std::string green_grid(const Problem& p, S lambda, int nx, int ny, const Tolerances& tol) {
    const auto basis = char_fn<S>(p, lambda, tol);
    const double a = p.interval.a, c = p.interval.c, b = p.interval.b;
    std::ostringstream csv;
    csv << "x,y,g0\n";
    for (int i = 0; i < nx; ++i) {
        const double x = a + (b - a) * (i + 0.5) / nx;
        if (std::fabs(x - c) < 1e-12 * (b - a)) continue;
        for (int j = 0; j < ny; ++j) {
            const double y = a + (b - a) * (j + 0.5) / ny;
            if (std::fabs(y - c) < 1e-12 * (b - a)) continue;
            const S g = green_eval(p, basis, x, y);
            csv << fmt_double(x) << "," << fmt_double(y) << ",";
            if constexpr (is_complex_v<S>)
                csv << fmt_complex(g);
            else
                csv << fmt_double(g);
            csv << "\n";
        }
    }
    return csv.str();
}

int cmd_green(const std::string& cfg_path, const std::string& lambda_text, double x, double y,
              int nx, int ny, bool grid_mode, const CommonFlags& flags,
              const std::string& out_path) {
    const Problem p = parse_config(slurp(cfg_path));
    const Cplx lambda = parse_complex(lambda_text);
    const Tolerances tol = flags.tolerances();
    if (grid_mode) {
        require(nx >= 1 && ny >= 1, errc::invalid_argument, "--nx/--ny must be positive");
        const std::string csv = lambda.imag() == 0.0 ? green_grid<double>(p, lambda.real(), nx, ny, tol)
                                                     : green_grid<Cplx>(p, lambda, nx, ny, tol);
        emit(out_path, csv);
    } else {
        const std::string v = lambda.imag() == 0.0
                                  ? green_point<double>(p, lambda.real(), x, y, tol)
                                  : green_point<Cplx>(p, lambda, x, y, tol);
        emit(out_path, v + "\n");
    }
    return 0;
}

template <Scalar S>
std::string resolve_csv(const Problem& p, S lambda, const RhsSpec& rhs, int samples,
                        const Tolerances& tol) {
    const auto basis = char_fn<S>(p, lambda, tol);
    H1Element<S> f;
    if constexpr (is_complex_v<S>) {
        f = to_h1_complex(PolyElement{rhs.left, rhs.right, 0.0});
        f.f1 = rhs.f1;
    } else {
        f = to_h1(PolyElement{rhs.left, rhs.right, rhs.f1.real()});
    }
    const H1Element<S> y = resolvent_apply(p, basis, f);
    const ResidualReport report = residual_report(p, lambda, y, f);

    std::ostringstream csv;
    csv << "x,y,dy\n";
    const double a = p.interval.a, c = p.interval.c, b = p.interval.b;
    auto cell = [](const S& v) {
        if constexpr (is_complex_v<S>)
            return fmt_complex(v);
        else
            return fmt_double(v);
    };
    for (int i = 0; i < samples; ++i) {
        const double x = a + (b - a) * i / (samples - 1);
        const State<S> s = x <= c ? y.left(std::min(x, c)) : y.right(x);
        csv << fmt_double(x) << "," << cell(s.y) << "," << cell(s.dy) << "\n";
    }
    csv << "tprime_b," << cell(y.f1) << ",\n";

    std::cerr << "residuals: ode=" << fmt_double(report.ode_residual)
              << " tau1=" << fmt_double(report.tau1_res) << " tau3=" << fmt_double(report.tau3_res)
              << " tau4=" << fmt_double(report.tau4_res)
              << " tau2-f1=" << fmt_double(report.tau2_defect)
              << " second=" << fmt_double(report.second_defect) << "\n";
    return csv.str();
}

int cmd_resolve(const std::string& cfg_path, const std::string& lambda_text,
                const std::string& rhs_path, int samples, const CommonFlags& flags,
                const std::string& out_path) {
    require(samples >= 2, errc::invalid_argument, "--samples must be at least 2");
    const Problem p = parse_config(slurp(cfg_path));
    const RhsSpec rhs = parse_rhs(slurp(rhs_path));
    const Cplx lambda = parse_complex(lambda_text);
    const Tolerances tol = flags.tolerances();
    const bool complex_path = lambda.imag() != 0.0 || rhs.f1.imag() != 0.0;
    const std::string csv = complex_path
                                ? resolve_csv<Cplx>(p, lambda, rhs, samples, tol)
                                : resolve_csv<double>(p, lambda.real(), rhs, samples, tol);
    emit(out_path, csv);
    return 0;
}

int cmd_check(const std::string& cfg_path, double lmin, double lmax, const CommonFlags& flags) {
    const Problem p = parse_config(slurp(cfg_path));
    CheckOptions opts;
    opts.lambda_min = lmin;
    opts.lambda_max = lmax;
    opts.tol = flags.tolerances();
    opts.tol_lambda = flags.tol_lambda;
    const int failures = run_check(p, opts, std::cout);
    if (failures > 0) {
        std::cerr << "error: " << failures << " invariant check(s) failed\n";
        return 1;
    }
    return 0;
}

} // namespace

int run_command(int argc, const char* const* argv) {
    CLI::App app{"Sturm-Liouville problems with an interior transmission point and an "
                 "eigenparameter-dependent boundary condition: eigenvalues, eigenfunctions, "
                 "Green's function, resolvent and self-adjointness checks"};
    app.require_subcommand(1);

    std::string cfg_path, out_path, rhs_path, lambda_text = "0";
    double lmin = 0.0, lmax = 100.0;
    double x = 0.0, y = 0.0;
    int index = 1, samples = 201, n_grid = 101, nx = 0, ny = 0;
    CommonFlags flags;

    auto* validate = app.add_subcommand("validate", "parse and validate a problem file");
    validate->add_option("config", cfg_path, "problem file")->required();

    auto* eigs = app.add_subcommand("eigs", "eigenvalues in a range, as CSV");
    eigs->add_option("config", cfg_path, "problem file")->required();
    eigs->add_option("--min", lmin, "lower end of the lambda range");
    eigs->add_option("--max", lmax, "upper end of the lambda range");
    eigs->add_option("--out", out_path, "output CSV (default stdout)");
    flags.attach(eigs);

    auto* eigfun = app.add_subcommand("eigfun", "sampled eigenfunction of the n-th eigenvalue");
    eigfun->add_option("config", cfg_path, "problem file")->required();
    eigfun->add_option("--index", index, "1-based eigenvalue index in the range")->required();
    eigfun->add_option("--min", lmin, "lower end of the lambda range");
    eigfun->add_option("--max", lmax, "upper end of the lambda range");
    eigfun->add_option("--samples", samples, "number of sample rows");
    eigfun->add_option("--out", out_path, "output CSV (default stdout)");
    flags.attach(eigfun);

    auto* charfn = app.add_subcommand("charfn", "characteristic function on a lambda grid");
    charfn->add_option("config", cfg_path, "problem file")->required();
    charfn->add_option("--min", lmin, "lower end of the lambda range")->required();
    charfn->add_option("--max", lmax, "upper end of the lambda range")->required();
    charfn->add_option("--n", n_grid, "number of grid points");
    charfn->add_option("--out", out_path, "output CSV (default stdout)");
    flags.attach(charfn);

    auto* green = app.add_subcommand("green", "Green's function at a point or on a grid");
    green->add_option("config", cfg_path, "problem file")->required();
    green->add_option("--lambda", lambda_text, "spectral parameter (real or <re>+<im>i)")
        ->required();
    green->add_option("--x", x, "first argument");
    green->add_option("--y", y, "second argument");
    green->add_option("--nx", nx, "grid points in x (grid mode)");
    green->add_option("--ny", ny, "grid points in y (grid mode)");
    green->add_option("--out", out_path, "output (default stdout)");
    flags.attach(green);

    auto* resolve = app.add_subcommand("resolve", "apply the resolvent to a right-hand side");
    resolve->add_option("config", cfg_path, "problem file")->required();
    resolve->add_option("--lambda", lambda_text, "spectral parameter (real or <re>+<im>i)")
        ->required();
    resolve->add_option("--rhs", rhs_path, "right-hand-side file")->required();
    resolve->add_option("--samples", samples, "number of sample rows");
    resolve->add_option("--out", out_path, "output CSV (default stdout)");
    flags.attach(resolve);

    auto* check = app.add_subcommand("check", "run the numerical invariant suite");
    check->add_option("config", cfg_path, "problem file")->required();
    check->add_option("--min", lmin, "lambda sweep lower end")->default_val(-10.0);
    check->add_option("--max", lmax, "lambda sweep upper end")->default_val(60.0);
    flags.attach(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(cfg_path);
        if (eigs->parsed()) return cmd_eigs(cfg_path, lmin, lmax, flags, out_path);
        if (eigfun->parsed())
            return cmd_eigfun(cfg_path, index, lmin, lmax, samples, flags, out_path);
        if (charfn->parsed()) return cmd_charfn(cfg_path, lmin, lmax, n_grid, flags, out_path);
        if (green->parsed())
            return cmd_green(cfg_path, lambda_text, x, y, nx, ny, nx > 0 || ny > 0, flags,
                             out_path);
        if (resolve->parsed())
            return cmd_resolve(cfg_path, lambda_text, rhs_path, samples, flags, out_path);
        if (check->parsed()) return cmd_check(cfg_path, lmin, lmax, flags);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage_class(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace slgreen

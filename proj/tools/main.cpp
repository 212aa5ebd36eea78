#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ergopt/errors.hpp"
#include "ergopt/io.hpp"
#include "ergopt/oracle.hpp"

namespace {

using namespace ergopt;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write \"" + path + "\"");
    out << content;
}

PrecisionConfig precision_config(const RunOptions& options) {
    PrecisionConfig cfg;
    cfg.mantissa_bits = options.precision_bits;
    return cfg;
}

int cmd_analyze(const SystemSpec& spec, const std::string& in_path, const std::string& out_path) {
    Analysis a = analyze_spec(spec);
    std::cout << analysis_text_report(spec, a);
    const std::string copy = out_path.empty() ? in_path + ".analysis.json" : out_path;
    write_file(copy, analysis_json_report(spec, a));
    std::cout << "machine-readable copy: " << copy << "\n";
    return 0;
}

int cmd_pressure(const SystemSpec& spec, const std::string& out_path) {
    Analysis a = analyze_spec(spec);
    PrecisionConfig cfg = precision_config(spec.options);
    check_precision(cfg, spec.options.beta_max, a.rate.lambda);

    BigFloat h = entropy_extended(a.normalized, a.decomp, cfg);
    auto points = pressure_sweep(a.normalized, beta_grid(spec.options), h, cfg);
    std::string csv = sweep_csv(points, finite_difference_slopes(points));
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_file(out_path, csv);
        std::cout << "wrote " << points.size() << " rows to " << out_path << "\n";
    }
    return 0;
}

int cmd_verify(const SystemSpec& spec) {
    Analysis a = analyze_spec(spec);
    std::cout << analysis_text_report(spec, a);

    PrecisionConfig cfg = precision_config(spec.options);
    check_precision(cfg, spec.options.beta_max, a.rate.lambda);

    BigFloat h = entropy_extended(a.normalized, a.decomp, cfg);
    auto points = pressure_sweep(a.normalized, beta_grid(spec.options), h, cfg);
    RateReport report = empirical_rate(std::move(points));
    report = verify_rate_bound(std::move(report), a.rate, spec.options.tol_verify);

    std::cout << "pressure guards: monotone " << (report.monotone ? "ok" : "VIOLATED")
              << ", convex " << (report.convex ? "ok" : "VIOLATED") << "\n";
    if (report.exact_zero) {
        std::cout << "rate = -inf (P identical to h on the whole grid)\n";
    } else {
        std::cout << "empirical rate gamma = " << format_double(report.gamma_estimate) << "\n";
        double beta_diag = 0.0;
        for (const auto& p : report.points)
            if (p.trusted) beta_diag = std::max(beta_diag, p.beta);
        if (beta_diag > 0) {
            EigenfunctionResult eig = eigenfunction(a.normalized, beta_diag, cfg);
            std::cout << proposition_diagnostic_table(a, report, eig, beta_diag);
        }
    }
    if (report.lambda_vacuous)
        std::cout << "lambda = -inf: the bound is vacuous (nothing lies outside the Aubry set)\n";
    else
        std::cout << "rate bound lambda = " << format_double(report.lambda.value()) << " (tol "
                  << format_double(report.tol) << ")\n";
    std::cout << (report.pass ? "PASS" : "FAIL") << ": empirical rate "
              << (report.pass ? "respects" : "violates") << " the lower bound\n";
    return report.pass ? 0 : 2;
}

int cmd_oracle(const SystemSpec& spec, int max_length) {
    OracleOptions opt;
    if (max_length > 0) opt.max_len = max_length;
    opt.pressure_bits = spec.options.precision_bits;
    auto reports = run_oracle_checks(spec.system, spec.potential, opt);

    bool all_pass = true;
    for (const auto& r : reports) {
        if (r.skipped) {
            std::cout << "[skip] " << r.checked_quantity << ": " << r.note << "\n";
            continue;
        }
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "[ ok ] " : "[FAIL] ") << r.checked_quantity << ": optimized "
                  << format_double(r.optimized_value) << ", oracle "
                  << format_double(r.oracle_value) << ", discrepancy "
                  << format_double(r.discrepancy);
        if (!r.note.empty()) std::cout << " (" << r.note << ")";
        std::cout << "\n";
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-temperature analysis of locally constant potentials on subshifts"};
    app.require_subcommand(1);

    std::string file, out_path;
    double beta_min = 0, beta_max = 0, tol = 0;
    long steps = 0, bits = 0;
    int max_length = 0;

    auto* analyze = app.add_subcommand("analyze", "components, entry costs and the rate bound");
    analyze->add_option("file", file)->required();
    analyze->add_option("--out", out_path, "path of the machine-readable copy");

    auto* pressure_cmd = app.add_subcommand("pressure", "extended-precision pressure sweep (CSV)");
    pressure_cmd->add_option("file", file)->required();
    pressure_cmd->add_option("--beta-min", beta_min);
    pressure_cmd->add_option("--beta-max", beta_max);
    pressure_cmd->add_option("--steps", steps);
    pressure_cmd->add_option("--precision-bits", bits);
    pressure_cmd->add_option("--out", out_path);

    auto* verify = app.add_subcommand("verify", "check the empirical rate against the bound");
    verify->add_option("file", file)->required();
    verify->add_option("--tol", tol, "verdict tolerance (default 1e-3)");

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force cross checks");
    oracle_cmd->add_option("file", file)->required();
    oracle_cmd->add_option("--max-length", max_length, "walk enumeration cap");

    CLI11_PARSE(app, argc, argv);

    try {
        SystemSpec spec = parse_system_file(file);
        if (app.got_subcommand("analyze")) return cmd_analyze(spec, file, out_path);
        if (app.got_subcommand("pressure")) {
            if (pressure_cmd->count("--beta-min")) spec.options.beta_min = beta_min;
            if (pressure_cmd->count("--beta-max")) spec.options.beta_max = beta_max;
            if (pressure_cmd->count("--steps")) spec.options.beta_steps = steps;
            if (pressure_cmd->count("--precision-bits")) spec.options.precision_bits = bits;
            return cmd_pressure(spec, out_path);
        }
        if (app.got_subcommand("verify")) {
            if (verify->count("--tol")) spec.options.tol_verify = tol;
            return cmd_verify(spec);
        }
        if (app.got_subcommand("oracle")) return cmd_oracle(spec, max_length);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

#pragma once

#include <string>
#include <vector>

#include "ergopt/aubry.hpp"
#include "ergopt/barriers.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/pressure.hpp"
#include "ergopt/sft.hpp"

namespace ergopt {

struct RunOptions {
    long precision_bits = 256;
    double beta_min = 1.0;
    double beta_max = 50.0;
    long beta_steps = 50;
    double tol_h = 1e-9;
    double tol_zero = 1e-9;
    double tol_verify = 1e-3;
};

struct SystemSpec {
    SymbolicSystem system;
    LocallyConstantPotential potential;
    RunOptions options;
};

/// Parse the JSON system description; numbers may be plain JSON numbers or
/// exact-rational strings ("p/q", decimals). ParseError carries position
/// information; ValidationError lists every missing cylinder word at once.
SystemSpec parse_system_file(const std::string& path);
SystemSpec parse_system_text(const std::string& text, const std::string& origin);

/// Canonical JSON serialization; parse(serialize(s)) reproduces s exactly.
std::string serialize_system(const SystemSpec& spec);

/// Everything the zero-temperature analysis produces.
struct Analysis {
    WeightedEdgeGraph graph;       // with the potential attached
    NormalizationData norm;
    WeightedEdgeGraph normalized;  // weights replaced by the normalized ones
    AubryDecomposition decomp;
    ManeData mane;
    ExtCostMatrix ext;
    RateBound rate;
};

Analysis analyze_spec(const SystemSpec& spec);

std::vector<double> beta_grid(const RunOptions& options);

std::string analysis_text_report(const SystemSpec& spec, const Analysis& a);
std::string analysis_json_report(const SystemSpec& spec, const Analysis& a);

/// CSV columns: beta,pressure,residual,log_residual,slope,trusted.
/// Extended-precision columns carry 25 significant digits; the slope cell is
/// empty where no preceding trusted point exists; untrusted rows are flagged,
/// never dropped.
std::string sweep_csv(const std::vector<PressurePoint>& points, const std::vector<double>& slopes);

/// Per-pair diagnostic table of the entry-cost inequality
/// gamma + V(O_i) >= S_ext(j,i) + V(O_j) for maximal-entropy i, evaluated
/// with the finite-beta eigenfunction as V. Informational only; the caveat
/// line explains why it is not asserted.
std::string proposition_diagnostic_table(const Analysis& a, const RateReport& report,
                                         const EigenfunctionResult& eig, double beta_used);

std::string format_double(double v);  // shortest round-trip, deterministic

} // namespace ergopt

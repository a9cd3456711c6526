#pragma once

#include "lrcvar/chains.hpp"
#include "lrcvar/lp.hpp"
#include "lrcvar/model.hpp"
#include "lrcvar/risk.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lrcvar {

/// Tolerance on certificate gaps and on primal/dual agreement.
inline constexpr double kCertificateTolerance = 2e-6;
/// Tolerance used when locating VaR on LP-produced laws.
inline constexpr double kQuantileTolerance = 1e-9;

enum class SolveMode { dual_only, dual_primal };

struct SolverOptions {
    SolveMode mode = SolveMode::dual_only;
    bool waive_assumption = false;
    std::uint64_t policy_cap = kDefaultPolicyCap;
    /// Deterministic policies are enumerated for the report only up to this count.
    std::uint64_t enumerate_cap = 100'000;
    double tol = 1e-8;
};

struct VerificationReport {
    double saddle_left_gap = 0.0;  ///< max_x v(x, y) - v*
    double saddle_right_gap = 0.0; ///< v* - min_y v(x*, y)
    double oracle_gap = 0.0;       ///< |v* - oracle value|
    double oracle_value = 0.0;
    double oracle_y = 0.0;
    std::optional<double> deterministic_best;
    std::vector<std::string> flags;

    bool certified(double tol = kCertificateTolerance) const noexcept {
        return saddle_left_gap <= tol && saddle_right_gap <= tol && oracle_gap <= tol &&
               saddle_left_gap >= -tol && saddle_right_gap >= -tol;
    }
};

struct SaddleSolution {
    double v_star = 0.0;
    OccupationMeasure x_star;      ///< sparsified when possible
    OccupationMeasure x_dual;      ///< raw optimum of the dual program
    double y_star = 0.0;           ///< VaR of the optimal reward law (a reward value)
    double saddle_y = 0.0;         ///< minimizer of max_x v(x, .)
    StationaryPolicy policy;
    std::size_t n_rand = 0;
    double cvar_component = 0.0;
    double mean_component = 0.0;
    double z2 = 0.0;
    std::optional<double> z1; ///< primal optimum (dual+primal mode)
    std::size_t n_vertices = 0;
    VerificationReport certificates;
    std::vector<std::string> flags;
};

struct SparsifyResult {
    OccupationMeasure x;
    bool sparsified = false;
    bool quantile_tie = false;
    double objective = 0.0;
    double x0 = 0.0;
    std::vector<std::string> flags;
};

/// Solves the saddle problem and certifies the result.
SaddleSolution solve_cvar(const MdpInstance& mdp, const RiskParams& params, const SolverOptions& options = {});

/// Vertex of the VaR-constrained program; falls back to x_star on a quantile tie.
SparsifyResult sparsify(const MdpInstance& mdp, const OccupationMeasure& x_star, double y_star,
                        const RiskParams& params, double v_star);

struct EnumerationRow {
    DeterministicPolicy policy;
    double mean = 0.0;
    double cvar = 0.0;
    double j = 0.0; ///< cvar + beta * mean
    bool multichain = false;  ///< values are for the best recurrent class
    bool aperiodic = true;
};

struct EnumerationResult {
    std::vector<EnumerationRow> rows; ///< lexicographic policy order
    std::size_t best = 0;             ///< first row with the largest j
};

EnumerationResult enumerate_deterministic(const MdpInstance& mdp, const RiskParams& params,
                                          std::uint64_t cap = kDefaultPolicyCap);

struct ScanRow {
    double y;
    double value; ///< max_x v(x, y)
};

struct ScanResult {
    std::vector<ScanRow> rows; ///< one per breakpoint, increasing y
    std::size_t argmin = 0;    ///< leftmost best row
    double value = 0.0;        ///< exact min_y max_x v(x, y)
    double y = 0.0;            ///< where it is attained
};

/// Independent route to v*: evaluates max_x v(x, y) at every reward value,
/// then minimizes exactly over the two intervals next to the best one (the
/// envelope is convex but can bend between reward values).
ScanResult endpoint_scan_oracle(const MdpInstance& mdp, const RiskParams& params);

/// max_x v(x, y) by the average-reward program.
double envelope_value(const MdpInstance& mdp, double y, const RiskParams& params);

VerificationReport verify_saddle(const MdpInstance& mdp, const OccupationMeasure& x_star, double y,
                                 double v_star, const RiskParams& params);

struct DegenerationRecord {
    double v_star = 0.0;          ///< solve_cvar at alpha = 0, beta = 0
    double average_optimum = 0.0; ///< max_x E_x[r]
    std::optional<double> deterministic_best_mean;
    double difference() const noexcept { return v_star - average_optimum; }
};

DegenerationRecord alpha_zero_degeneration(const MdpInstance& mdp, const SolverOptions& options = {});

} // namespace lrcvar

#include "lrcvar/solver.hpp"

#include "lrcvar/errors.hpp"
#include "lrcvar/lp_builders.hpp"

#include <algorithm>
#include <cmath>

namespace lrcvar {
namespace {

constexpr double kTieThreshold = 1e-9;
constexpr double kValueConsistency = 1e-6;
constexpr double kSupportThreshold = 1e-8;

LpSolution solve_or_throw(const LinearProgram& lp, const std::string& what, double tol) {
    LpSolution s = solve(lp, {true, tol, 200000});
    if (s.status != LpStatus::optimal) {
        throw SolverError(what + " is " + to_string(s.status));
    }
    return s;
}

OccupationMeasure collect(const LpSolution& s, const std::vector<std::size_t>& idx) {
    // basic variables can carry round-off of order tol; drop it and renormalize
    OccupationMeasure x{std::vector<double>(idx.size())};
    double total = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const double v = s.values[idx[k]];
        x.values[k] = v > kSupportThreshold ? v : 0.0;
        total += x.values[k];
    }
    if (total > 0.0) {
        for (double& v : x.values) v /= total;
    }
    return x;
}

void add_flag(std::vector<std::string>& flags, const std::string& f) {
    if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

} // namespace

double envelope_value(const MdpInstance& mdp, double y, const RiskParams& params) {
    const auto avg = build_average_lp(mdp, y, params);
    return solve_or_throw(avg.lp, "average-reward program", 1e-8).objective;
}

ScanResult endpoint_scan_oracle(const MdpInstance& mdp, const RiskParams& params) {
    params.check();
    const Breakpoints bp = breakpoints(mdp);
    ScanResult out;
    for (double y : bp.values) out.rows.push_back({y, envelope_value(mdp, y, params)});
    for (std::size_t r = 1; r < out.rows.size(); ++r) {
        if (out.rows[r].value < out.rows[out.argmin].value) out.argmin = r;
    }
    out.value = out.rows[out.argmin].value;
    out.y = out.rows[out.argmin].y;

    const auto refine = [&](std::size_t a, std::size_t b) {
        const auto env = build_envelope_lp(mdp, bp.values[a], bp.values[b], params);
        const auto s = solve_or_throw(env.lp, "envelope program", 1e-8);
        if (s.objective < out.value - 1e-12 * std::max(1.0, std::abs(out.value))) {
            out.value = s.objective;
            out.y = s.values[env.y];
        }
    };
    if (out.argmin > 0) refine(out.argmin - 1, out.argmin);
    if (out.argmin + 1 < out.rows.size()) refine(out.argmin, out.argmin + 1);
    return out;
}

VerificationReport verify_saddle(const MdpInstance& mdp, const OccupationMeasure& x_star, double y,
                                 double v_star, const RiskParams& params) {
    VerificationReport rep;
    rep.saddle_left_gap = envelope_value(mdp, y, params) - v_star;
    const RewardOutcomes outcomes = reward_outcomes(mdp);
    double lowest = kInfinity;
    for (double b : breakpoints(mdp).values) lowest = std::min(lowest, saddle_value(outcomes, x_star, b, params));
    rep.saddle_right_gap = v_star - lowest;
    return rep;
}

SparsifyResult sparsify(const MdpInstance& mdp, const OccupationMeasure& x_star, double y_star,
                        const RiskParams& params, double v_star) {
    const Breakpoints bp = breakpoints(mdp);
    if (!std::binary_search(bp.values.begin(), bp.values.end(), y_star)) {
        throw InputError("sparsification level is not a reward value");
    }
    const auto sp = build_sparsify_lp(mdp, y_star, params, bp.delta);
    const LpSolution s = solve(sp.lp, {true, 1e-8, 200000});
    if (s.status != LpStatus::optimal) {
        throw SolverError("sparsification program is " + to_string(s.status) +
                          "; the optimal occupation measure should be feasible");
    }
    SparsifyResult out;
    out.objective = s.objective;
    out.x0 = s.values[sp.x0];
    out.x = x_star;
    if (out.x0 <= kTieThreshold) {
        out.quantile_tie = true;
        out.flags.push_back("quantile-tie");
        return out;
    }
    // judge x' by its own criterion value: the relaxed quantile row can lift the
    // LP objective above v(x', y*) without changing the law's CVaR
    OccupationMeasure x = collect(s, sp.x);
    const auto law = reward_distribution(mdp, x);
    if (std::abs(cvar_right(law, params.alpha) + params.beta * law.mean() - v_star) > kValueConsistency) {
        out.flags.push_back("sparsify-mismatch");
        return out;
    }
    out.x = std::move(x);
    out.sparsified = true;
    return out;
}

EnumerationResult enumerate_deterministic(const MdpInstance& mdp, const RiskParams& params, std::uint64_t cap) {
    params.check();
    const std::uint64_t count = mdp.n_deterministic_policies();
    if (count > cap) {
        throw InputError("instance has " + std::to_string(count) +
                         " deterministic policies, above the cap of " + std::to_string(cap));
    }
    EnumerationResult out;
    for_each_deterministic_policy(mdp, [&](const DeterministicPolicy& d) {
        const StationaryPolicy sp = StationaryPolicy::deterministic(mdp, d);
        const auto cls = classify_chain(mdp, sp);
        EnumerationRow row{d, 0.0, 0.0, -kInfinity, !cls.unichain(), cls.unichain_aperiodic()};
        for (const auto& x : class_stationary_distributions(mdp, sp)) {
            const auto law = reward_distribution(mdp, x);
            const double cvar = cvar_right(law, params.alpha);
            const double mean = law.mean();
            const double j = cvar + params.beta * mean;
            if (j > row.j) {
                row.cvar = cvar;
                row.mean = mean;
                row.j = j;
            }
        }
        out.rows.push_back(std::move(row));
        return true;
    });
    for (std::size_t r = 1; r < out.rows.size(); ++r) {
        if (out.rows[r].j > out.rows[out.best].j) out.best = r;
    }
    return out;
}

SaddleSolution solve_cvar(const MdpInstance& mdp, const RiskParams& params, const SolverOptions& options) {
    params.check();
    const auto report = validate(mdp);
    if (!report.ok()) throw InputError("invalid instance:\n" + report.to_string());

    SaddleSolution sol;
    bool assumption_violated = false;
    if (options.waive_assumption) {
        add_flag(sol.flags, "assumption-waived");
    } else {
        assumption_violated = !check_assumption(mdp, options.policy_cap).ok();
    }

    const auto dual = build_dual_lp(mdp, params);
    const LpSolution ds = solve_or_throw(dual.lp, "dual program", options.tol);
    sol.z2 = ds.objective;
    sol.v_star = ds.objective;
    sol.x_dual = collect(ds, dual.x);
    sol.y_star = var(reward_distribution(mdp, sol.x_dual), params.alpha, kQuantileTolerance);

    const ScanResult oracle = endpoint_scan_oracle(mdp, params);
    sol.saddle_y = oracle.y;
    if (options.mode == SolveMode::dual_primal) {
        const VertexSet vs = polytope_vertices(mdp, options.policy_cap);
        sol.n_vertices = vs.vertices.size();
        const auto primal = build_primal_lp(mdp, vs, params);
        const LpSolution ps = solve_or_throw(primal.lp, "primal program", options.tol);
        sol.z1 = ps.objective;
        sol.saddle_y = ps.values[primal.y];
        if (std::abs(ps.objective - ds.objective) > kCertificateTolerance) {
            throw SolverError("primal and dual optima differ: z1 = " + std::to_string(ps.objective) +
                              ", z2 = " + std::to_string(ds.objective));
        }
    }

    SparsifyResult sp = sparsify(mdp, sol.x_dual, sol.y_star, params, sol.v_star);
    for (const auto& f : sp.flags) add_flag(sol.flags, f);
    sol.x_star = std::move(sp.x);
    sol.policy = extract_policy(mdp, sol.x_star);
    sol.n_rand = n_randomizations(sol.policy);

    const auto law = reward_distribution(mdp, sol.x_star);
    sol.cvar_component = cvar_right(law, params.alpha);
    sol.mean_component = law.mean();
    if (std::abs(sol.cvar_component + params.beta * sol.mean_component - sol.v_star) > kValueConsistency) {
        add_flag(sol.flags, "value-inconsistent");
    }

    const auto cls = classify_chain(mdp, sol.policy);
    if (!cls.unichain()) add_flag(sol.flags, "policy-multichain");
    if (!std::all_of(cls.aperiodic.begin(), cls.aperiodic.end(), [](bool a) { return a; })) {
        add_flag(sol.flags, "policy-periodic");
    }
    if (assumption_violated) {
        if (!cls.unichain_aperiodic()) {
            throw InputError("instance violates the unichain/aperiodic assumption and the optimal policy is "
                             "not unichain and aperiodic; rerun with --waive-assumption to accept it");
        }
        add_flag(sol.flags, "assumption-violation");
    }

    sol.certificates = verify_saddle(mdp, sol.x_star, sol.saddle_y, sol.v_star, params);
    sol.certificates.oracle_value = oracle.value;
    sol.certificates.oracle_y = oracle.y;
    sol.certificates.oracle_gap = std::abs(sol.v_star - oracle.value);
    if (mdp.n_deterministic_policies() <= options.enumerate_cap) {
        const auto en = enumerate_deterministic(mdp, params, options.enumerate_cap);
        sol.certificates.deterministic_best = en.rows[en.best].j;
        if (sol.v_star < en.rows[en.best].j - 1e-8) add_flag(sol.flags, "dominance-violation");
    }
    if (!sol.certificates.certified()) add_flag(sol.flags, "uncertified");
    sol.certificates.flags = sol.flags;
    return sol;
}

DegenerationRecord alpha_zero_degeneration(const MdpInstance& mdp, const SolverOptions& options) {
    const RiskParams params{0.0, 0.0};
    DegenerationRecord rec;
    rec.v_star = solve_cvar(mdp, params, options).v_star;
    const auto avg = build_average_lp(mdp, breakpoints(mdp).lower, params);
    rec.average_optimum = solve_or_throw(avg.lp, "average-reward program", options.tol).objective;
    if (mdp.n_deterministic_policies() <= options.enumerate_cap) {
        const auto en = enumerate_deterministic(mdp, params, options.enumerate_cap);
        double best = -kInfinity;
        for (const auto& row : en.rows) best = std::max(best, row.mean);
        rec.deterministic_best_mean = best;
    }
    return rec;
}

} // namespace lrcvar

#pragma once

#include "lrcvar/model.hpp"
#include "lrcvar/risk.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lrcvar {

struct CvarSequence {
    std::vector<double> per_step; ///< CVaR_alpha(R_t), t = 0..T-1
    std::vector<double> cesaro;   ///< running averages of per_step
    double alpha = 0.0;
    std::size_t initial_state = 0;
    std::string policy;
};

/// Exact per-step CVaR of the reward at each time, from the forward state-action law.
CvarSequence cvar_sequence(const MdpInstance& mdp, const MarkovPolicy& policy, std::size_t s0,
                           std::size_t horizon, double alpha);

struct LimitEstimate {
    double limsup = 0.0;
    double liminf = 0.0;
    std::size_t window = 0;
};

/// Max and min of the Cesaro averages over the trailing window. These are
/// finite-horizon estimates, not limits.
LimitEstimate limsup_liminf_estimate(const CvarSequence& seq, std::size_t window);

/// Block index of time t in the schedule with boundaries (3^k - 1)/2:
/// block 0 = {0}, block 1 = {1,2,3}, block 2 = {4..12}, ...
std::size_t example1_block(std::uint64_t t);

/// Switching schedule for the two-state example: even blocks are spent in
/// the first state, odd blocks in the second. The rule at time t steers
/// towards the state of the block containing t + 1.
TimeDependentPolicy example1_policy(std::size_t horizon);

/// Sum of the per-step CVaR values of the schedule through time t, in closed
/// form: blocks contribute +-2 * 3^k.
double example1_cumulative(std::uint64_t t);

struct MonteCarloResult {
    std::vector<double> values;                     ///< distinct reward values
    std::vector<std::vector<std::uint64_t>> counts; ///< counts[t][value index]
    std::vector<double> cvar;                       ///< empirical CVaR per step
    std::size_t replications = 0;
};

/**
 * Simulates independent trajectories. Replication r draws from its own
 * generator seeded by (seed, r), so results do not depend on the thread
 * count; histograms are merged by summation.
 */
MonteCarloResult monte_carlo_eval(const MdpInstance& mdp, const MarkovPolicy& policy, std::size_t s0,
                                  std::size_t horizon, std::size_t replications, std::uint64_t seed,
                                  double alpha, unsigned threads = 0);

struct GapBound {
    double gap = 0.0;
    double bound = 0.0;
    bool holds(double slack = 1e-10) const noexcept { return gap <= bound + slack; }
};

/// |CVaR(R_t) - CVaR(R^d)| against (U - L) / (1 - alpha) * sum |P_t - pi|.
GapBound lemma2_gap(const MdpInstance& mdp, const StationaryPolicy& d, std::size_t s0, std::size_t t,
                    double alpha);

/// Columns t, cvar_t, cesaro_t.
void write_sequence_csv(const CvarSequence& seq, std::ostream& out);

} // namespace lrcvar

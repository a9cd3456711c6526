#pragma once

#include "lrcvar/chains.hpp"
#include "lrcvar/lp.hpp"
#include "lrcvar/model.hpp"
#include "lrcvar/risk.hpp"

#include <vector>

namespace lrcvar {

// Builders for the programs of the saddle-point reduction. Variable names
// follow x_i_a, w_i_a (w_i_a_j with next-state rewards), y, z1, z2, x0 with
// 0-based state and action indices.

/// Adds x(i,a) >= 0 with flow balance per state and sum x = 1. Returns the x indices by pair.
std::vector<std::size_t> add_occupation_polytope(LinearProgram& lp, const MdpInstance& mdp);

struct DualLp {
    LinearProgram lp;
    std::vector<std::size_t> x;   ///< by pair
    std::size_t z2 = 0;
    std::vector<double> endpoints; ///< endpoint of each tail row, in row order
};

/// max z2 over the occupation polytope with one tail row per distinct reward
/// value (or per pair / per transition when per_pair_rows is set).
DualLp build_dual_lp(const MdpInstance& mdp, const RiskParams& params, bool per_pair_rows = false);

struct PrimalLp {
    LinearProgram lp;
    std::size_t y = 0;
    std::size_t z1 = 0;
    std::vector<std::size_t> w; ///< by reward outcome (see reward_outcomes)
};

/// min z1 over y in [L_r, U_r] and excess variables w, one row per vertex.
PrimalLp build_primal_lp(const MdpInstance& mdp, const VertexSet& vertices, const RiskParams& params);

struct SparsifyLp {
    LinearProgram lp;
    std::vector<std::size_t> x;
    std::size_t x0 = 0;
};

/// max v(x, y_star) subject to VaR_alpha of the reward law of x being y_star.
SparsifyLp build_sparsify_lp(const MdpInstance& mdp, double y_star, const RiskParams& params, double delta);

struct AverageLp {
    LinearProgram lp;
    std::vector<std::size_t> x;
};

/// max_x v(x, y) for a fixed y: an average-reward LP with per-pair rewards.
AverageLp build_average_lp(const MdpInstance& mdp, double y, const RiskParams& params);

struct EnvelopeLp {
    LinearProgram lp;
    std::size_t g = 0;
    std::size_t y = 0;
    std::vector<std::size_t> h; ///< by state
};

/**
 * min over y in [lo, hi] of max_x v(x, y), for adjacent reward values lo < hi.
 * On such an interval every excess (r - y)^+ is affine in y, so the inner
 * maximum is an average-reward LP whose dual (gain g, bias h) can be
 * minimized jointly with y.
 */
EnvelopeLp build_envelope_lp(const MdpInstance& mdp, double lo, double hi, const RiskParams& params);

} // namespace lrcvar

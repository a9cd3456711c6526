#pragma once

#include "lrcvar/model.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace lrcvar {

struct Atom {
    double value;
    double prob;

    friend bool operator==(const Atom&, const Atom&) = default;
};

/**
 * Finite discrete distribution in canonical form: atoms sorted by value,
 * exactly equal values merged, zero-probability atoms dropped.
 *
 * Tiny negative probabilities (above -1e-9, solver noise) are clamped to zero.
 * Throws InputError on non-finite values, larger negative probabilities or a
 * total mass further than 1e-9 from one. Mass is never renormalized.
 */
class DiscreteDistribution {
  public:
    DiscreteDistribution() = default;
    explicit DiscreteDistribution(std::vector<Atom> atoms);

    static DiscreteDistribution dirac(double value) { return DiscreteDistribution({{value, 1.0}}); }

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }

    double mean() const noexcept;
    double min() const { return atoms_.front().value; }
    double max() const { return atoms_.back().value; }
    double total_mass() const noexcept;
    /// P(X <= z)
    double cdf(double z) const noexcept;

  private:
    std::vector<Atom> atoms_;
};

/// alpha is the probability level in [0,1); beta >= 0 weighs the mean.
struct RiskParams {
    double alpha = 0.0;
    double beta = 0.0;

    /// Throws InputError if out of range.
    void check() const;
};

/// Sorted distinct reward values with the smallest adjacent gap.
struct Breakpoints {
    std::vector<double> values;
    double delta = 0.0; ///< meaningful only when values.size() >= 2
    double lower = 0.0; ///< L_r
    double upper = 0.0; ///< U_r
};

/// inf{z : F(z) >= alpha - tol}. For alpha = 0 this is the smallest support value.
double var(const DiscreteDistribution& dist, double alpha, double tol = 0.0);

/// Mean of the upper (1 - alpha) quantile mass; the mean itself at alpha = 0.
double cvar_right(const DiscreteDistribution& dist, double alpha);

/// Mean of the lower alpha quantile mass, alpha in (0,1].
double cvar_left(const DiscreteDistribution& dist, double alpha);

/// y + E[X - y]^+ / (1 - alpha)
double ru_objective(const DiscreteDistribution& dist, double y, double alpha);

struct RuMinimum {
    double value;
    double argmin;
};

/// Minimizes ru_objective over the support; ties resolve to the leftmost point.
RuMinimum cvar_via_ru(const DiscreteDistribution& dist, double alpha);

/**
 * Flattened reward outcomes of an instance. In state-action mode there is one
 * outcome per pair with probability 1; in next-state mode one per possible
 * transition (i,a,j) with probability P(j|i,a).
 */
struct RewardOutcomes {
    std::vector<std::size_t> pair;
    std::vector<double> prob;
    std::vector<double> reward;

    std::size_t size() const noexcept { return pair.size(); }
};

RewardOutcomes reward_outcomes(const MdpInstance& mdp);

/// Law of the one-step reward when pairs are drawn from x (weights x(i,a) P(j|i,a) in next-state mode).
DiscreteDistribution reward_distribution(const MdpInstance& mdp, const OccupationMeasure& x);
DiscreteDistribution reward_distribution(const MdpInstance& mdp, std::span<const double> pair_mass);

/// v(x,y) = sum x(i,a) { y + E[r - y]^+ / (1 - alpha) + beta E[r] }
double saddle_value(const MdpInstance& mdp, const OccupationMeasure& x, double y, const RiskParams& params);

/// Same as saddle_value with the outcome table precomputed.
double saddle_value(const RewardOutcomes& outcomes, const OccupationMeasure& x, double y,
                    const RiskParams& params);

Breakpoints breakpoints(const MdpInstance& mdp);

/// CVaR_alpha + beta * mean of a distribution.
double mean_cvar(const DiscreteDistribution& dist, const RiskParams& params);

} // namespace lrcvar

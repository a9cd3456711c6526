#pragma once

#include "lrcvar/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace lrcvar {

struct ChainClassification {
    std::vector<std::vector<std::size_t>> recurrent_classes; ///< each sorted ascending
    std::vector<std::size_t> transient_states;
    std::vector<std::size_t> period; ///< per recurrent class
    std::vector<bool> aperiodic;     ///< per recurrent class

    bool unichain() const noexcept { return recurrent_classes.size() == 1; }
    bool unichain_aperiodic() const noexcept { return unichain() && aperiodic.front(); }
};

inline constexpr std::uint64_t kDefaultPolicyCap = 1'000'000;

/// P^d(j|i) = sum_a d(a|i) P(j|i,a)
Eigen::MatrixXd transition_matrix(const MdpInstance& mdp, const StationaryPolicy& d);

/// Recurrent classes are the closed strongly connected components of the
/// positive-probability graph; periods come from breadth-first levels.
ChainClassification classify_chain(const Eigen::MatrixXd& p);
ChainClassification classify_chain(const MdpInstance& mdp, const StationaryPolicy& d);

/// x(i,a) = pi(i) d(a|i) for the unique stationary law pi. Throws ChainError
/// if the chain has more than one recurrent class.
OccupationMeasure stationary_distribution(const MdpInstance& mdp, const StationaryPolicy& d);

/// One stationary occupation measure per recurrent class, in class order.
/// Works for multichain policies; each result is supported on its class.
std::vector<OccupationMeasure> class_stationary_distributions(const MdpInstance& mdp,
                                                              const StationaryPolicy& d);

/**
 * Exact forward evolution of the state-action law P(s_t = i, a_t = a) from a
 * fixed initial state. Mass is propagated without renormalization.
 */
class ForwardEvolution {
  public:
    ForwardEvolution(const MdpInstance& mdp, MarkovPolicy policy, std::size_t s0);

    std::size_t time() const noexcept { return t_; }
    /// Pair law at the current time, indexed by pair.
    const std::vector<double>& pair_mass() const noexcept { return pair_mass_; }
    const std::vector<double>& state_mass() const noexcept { return state_mass_; }
    void advance();

  private:
    void spread();

    const MdpInstance* mdp_;
    MarkovPolicy policy_;
    std::size_t t_ = 0;
    std::vector<double> state_mass_;
    std::vector<double> pair_mass_;
};

/// Pair law at time t. Throws InputError for t beyond a time-dependent policy's horizon.
std::vector<double> t_step_distribution(const MdpInstance& mdp, const MarkovPolicy& policy,
                                        std::size_t s0, std::size_t t);

struct AssumptionViolation {
    DeterministicPolicy policy;
    ChainClassification classification;
};

struct AssumptionReport {
    std::uint64_t policies_checked = 0;
    std::vector<AssumptionViolation> violators; ///< lexicographic policy order

    bool ok() const noexcept { return violators.empty(); }
};

/// Classifies every deterministic policy. Throws InputError above the cap.
AssumptionReport check_assumption(const MdpInstance& mdp, std::uint64_t cap = kDefaultPolicyCap);

struct Vertex {
    OccupationMeasure x;
    DeterministicPolicy policy;      ///< first policy (lexicographically) producing x
    std::size_t recurrent_class = 0; ///< class index for multichain policies
};

struct VertexSet {
    std::vector<Vertex> vertices;
    std::uint64_t policies_examined = 0;
};

/// Stationary occupation measures of all deterministic policies, deduplicated
/// at 1e-8 componentwise. Multichain policies contribute one point per
/// recurrent class. Throws InputError above the cap.
VertexSet polytope_vertices(const MdpInstance& mdp, std::uint64_t cap = kDefaultPolicyCap);

} // namespace lrcvar

#pragma once

#include "rmdp/errors.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rmdp {

/// Tolerance for probability-simplex membership checks. Serialized inputs
/// within this tolerance of mass 1 are accepted verbatim; anything further
/// off is rejected as a data error.
inline constexpr double kSimplexTol = 1e-9;

/// Residual tolerance for the gain/bias and stationary-distribution linear
/// systems.
inline constexpr double kLinsolveTol = 1e-9;

/// Default tolerance for comparing the two one-player-fixed long-run average
/// values in policy profile evaluation.
inline constexpr double kDefaultPpeTol = 1e-5;

/// Probability distribution over a model's state space, stored densely.
struct Distribution {
    std::vector<double> probs;

    Distribution() = default;
    explicit Distribution(std::vector<double> p) : probs(std::move(p)) {}

    /// Dirac distribution on state `s` over `n` states.
    static Distribution dirac(std::size_t n, std::size_t s) {
        Distribution d;
        d.probs.assign(n, 0.0);
        d.probs[s] = 1.0;
        return d;
    }

    std::size_t dim() const { return probs.size(); }

    double dot(std::span<const double> values) const {
        double s = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) s += probs[i] * values[i];
        return s;
    }

    bool is_simplex(double tol = kSimplexTol) const {
        double total = 0.0;
        for (double p : probs) {
            if (p < 0.0) return false;
            total += p;
        }
        return std::abs(total - 1.0) <= tol;
    }

    /// Scales total mass to exactly 1. Only meaningful on near-simplex input.
    void renormalize() {
        double total = 0.0;
        for (double p : probs) total += p;
        if (total > 0.0)
            for (double& p : probs) p /= total;
    }

    bool approx_equal(const Distribution& other, double tol = kSimplexTol) const {
        if (probs.size() != other.probs.size()) return false;
        for (std::size_t i = 0; i < probs.size(); ++i)
            if (std::abs(probs[i] - other.probs[i]) > tol) return false;
        return true;
    }

    bool operator==(const Distribution&) const = default;
};

/// Uncertainty polytope given by its vertex list.
struct Polytope {
    std::vector<Distribution> vertices;

    bool operator==(const Polytope&) const = default;
};

/// Polytopic robust MDP. Tables are dense over states x actions; indices are
/// 0-based, labels are display metadata only.
struct Rmdp {
    int n_states = 0;
    int n_actions = 0;
    std::vector<std::vector<Polytope>> polytopes; // [state][action]
    std::vector<std::vector<double>> rewards;     // [state][action]
    int initial = 0;
    std::vector<std::string> state_labels;
    std::vector<std::string> action_labels;

    const Polytope& polytope(int s, int a) const { return polytopes[s][a]; }
    double reward(int s, int a) const { return rewards[s][a]; }

    bool operator==(const Rmdp&) const = default;
};

/// One legal move in a TBSG: successor distribution over the union state
/// space plus the immediate reward.
struct TbsgMove {
    Distribution next;
    double reward = 0.0;

    bool operator==(const TbsgMove&) const = default;
};

enum class DiscountMode {
    EveryStep,    // discount applied on every game step
    AlternateStep // discount applied only when leaving Min states
};

/// Turn-based stochastic game. Global state ids place Max states first
/// (0..n_max-1) and Min states after (n_max..n_max+n_min-1).
struct Tbsg {
    int n_max = 0;
    int n_min = 0;
    std::vector<std::vector<TbsgMove>> moves; // [global state][local action]
    int initial = 0;
    DiscountMode discount_mode = DiscountMode::EveryStep;
    std::vector<std::string> state_labels;
    std::vector<std::vector<std::string>> action_labels; // per state

    int n_states() const { return n_max + n_min; }
    bool is_max_state(int s) const { return s < n_max; }
    int n_moves(int s) const { return static_cast<int>(moves[s].size()); }

    bool operator==(const Tbsg&) const = default;
};

/// Pure positional policy: one chosen action index per state of the owning
/// player's state set.
struct PurePolicy {
    std::vector<int> choice;

    int operator()(int s) const { return choice[s]; }
    bool operator==(const PurePolicy&) const = default;
};

enum class Algorithm { Rppi, Rvi, Rrvi, Brute };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::Rppi: return "rppi";
    case Algorithm::Rvi: return "rvi";
    case Algorithm::Rrvi: return "rrvi";
    case Algorithm::Brute: return "brute";
    }
    return "?";
}

/// Outcome of a solver run.
struct SolveReport {
    double value_at_initial = 0.0;
    std::optional<std::vector<double>> values;
    PurePolicy agent_policy;
    std::optional<PurePolicy> env_policy; // vertex selection, flattened by (s, a)
    Algorithm algorithm = Algorithm::Rppi;
    long outer_iterations = 0;
    long inner_iterations = 0;
    std::optional<double> final_gamma;
    double wall_clock_seconds = 0.0;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Collects every invariant violation; the model is valid iff the result is
/// empty. Violations are data, not faults, so nothing throws here.
inline std::vector<std::string> validate_rmdp(const Rmdp& m) {
    std::vector<std::string> out;
    const auto at = [&](int s, int a) {
        return "(" + std::to_string(s) + "," + std::to_string(a) + ")";
    };

    if (m.n_states <= 0) out.push_back("model has no states");
    if (m.n_actions <= 0) out.push_back("model has no actions");
    if (m.initial < 0 || m.initial >= m.n_states) out.push_back("initial state out of range");
    if (static_cast<int>(m.polytopes.size()) != m.n_states)
        out.push_back("polytope table not total over states");
    if (static_cast<int>(m.rewards.size()) != m.n_states)
        out.push_back("reward table not total over states");

    for (int s = 0; s < static_cast<int>(m.polytopes.size()); ++s) {
        if (static_cast<int>(m.polytopes[s].size()) != m.n_actions) {
            out.push_back("polytope row " + std::to_string(s) + " not total over actions");
            continue;
        }
        for (int a = 0; a < m.n_actions; ++a) {
            const Polytope& p = m.polytopes[s][a];
            if (p.vertices.empty()) {
                out.push_back("empty polytope at " + at(s, a));
                continue;
            }
            for (std::size_t v = 0; v < p.vertices.size(); ++v) {
                const Distribution& d = p.vertices[v];
                if (static_cast<int>(d.dim()) != m.n_states)
                    out.push_back("vertex " + std::to_string(v) + " at " + at(s, a) +
                                  " has wrong dimension");
                else if (!d.is_simplex())
                    out.push_back("vertex " + std::to_string(v) + " at " + at(s, a) +
                                  " violates the simplex invariants");
                for (std::size_t w = v + 1; w < p.vertices.size(); ++w)
                    if (d.approx_equal(p.vertices[w]))
                        out.push_back("duplicate vertices " + std::to_string(v) + "," +
                                      std::to_string(w) + " at " + at(s, a));
            }
        }
    }
    for (int s = 0; s < static_cast<int>(m.rewards.size()); ++s)
        if (static_cast<int>(m.rewards[s].size()) != m.n_actions)
            out.push_back("reward row " + std::to_string(s) + " not total over actions");
    return out;
}

inline std::vector<std::string> validate_tbsg(const Tbsg& g) {
    std::vector<std::string> out;
    if (g.n_max < 0 || g.n_min < 0 || g.n_states() == 0) out.push_back("empty state space");
    if (g.initial < 0 || g.initial >= g.n_states()) out.push_back("initial state out of range");
    if (static_cast<int>(g.moves.size()) != g.n_states())
        out.push_back("move table not total over states");

    for (int s = 0; s < static_cast<int>(g.moves.size()); ++s) {
        if (g.moves[s].empty()) {
            out.push_back("state " + std::to_string(s) + " has no legal action");
            continue;
        }
        for (std::size_t a = 0; a < g.moves[s].size(); ++a) {
            const Distribution& d = g.moves[s][a].next;
            if (static_cast<int>(d.dim()) != g.n_states())
                out.push_back("transition at (" + std::to_string(s) + "," + std::to_string(a) +
                              ") has wrong dimension");
            else if (!d.is_simplex())
                out.push_back("transition at (" + std::to_string(s) + "," + std::to_string(a) +
                              ") violates the simplex invariants");
        }
    }
    return out;
}

/// Throws validation_error unless `m` is valid.
inline void require_valid(const Rmdp& m) {
    auto violations = validate_rmdp(m);
    if (!violations.empty())
        throw validation_error("invalid RMDP: " + violations.front() +
                               (violations.size() > 1
                                    ? " (+" + std::to_string(violations.size() - 1) + " more)"
                                    : ""));
}

/// Finite-prefix average of a reward sequence.
inline double trajectory_limavg(std::span<const double> rewards) {
    if (rewards.empty()) throw validation_error("trajectory_limavg: empty sequence");
    double s = 0.0;
    for (double r : rewards) s += r;
    return s / static_cast<double>(rewards.size());
}

} // namespace rmdp

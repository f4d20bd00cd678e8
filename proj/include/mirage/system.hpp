#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mirage/errors.hpp"

namespace mirage {

// Joint quantities are dense per-robot arrays: element i belongs to robot i.
// Per-robot components are small flat vectors (position, pose, ...).
template <class Scalar>
using robot_vec = std::vector<Scalar>;

template <class Scalar>
using joint_vec = std::vector<robot_vec<Scalar>>;

template <class Obs>
using joint_obs = std::vector<Obs>;

// A deterministic multi-robot transition system. The transition and
// observation maps are stored per robot, so the i-th next-state component
// can only ever depend on the full joint state and robot i's own action,
// and the i-th observation only on the joint state.
template <class Scalar, class Obs>
struct system_def {
    using scalar_type = Scalar;
    using obs_type = Obs;
    using state_type = joint_vec<Scalar>;
    using action_type = joint_vec<Scalar>;
    using observation_type = joint_obs<Obs>;

    int n = 0;              // robot count
    int state_dim = 0;      // per-robot state components
    int action_dim = 0;     // per-robot action components

    // robot i's next state component from (joint state, own action)
    std::function<robot_vec<Scalar>(const state_type&, int, const robot_vec<Scalar>&)> component_step;
    // robot i's observation from the joint state
    std::function<Obs(const state_type&, int)> component_observe;
    // validity of robot i's action in the given joint state
    std::function<bool(const state_type&, int, const robot_vec<Scalar>&)> action_ok;

    state_type initial_state;
};

namespace detail {

template <class Scalar, class Obs>
void check_state_arity(const system_def<Scalar, Obs>& sys,
                       const typename system_def<Scalar, Obs>::state_type& state) {
    if (static_cast<int>(state.size()) != sys.n)
        throw dimension_mismatch("state has " + std::to_string(state.size()) +
                                 " robot components, system has n=" + std::to_string(sys.n));
    for (const auto& c : state)
        if (static_cast<int>(c.size()) != sys.state_dim)
            throw dimension_mismatch("state component width " + std::to_string(c.size()) +
                                     " != " + std::to_string(sys.state_dim));
}

template <class Scalar, class Obs>
void check_action_arity(const system_def<Scalar, Obs>& sys,
                        const typename system_def<Scalar, Obs>::action_type& action) {
    if (static_cast<int>(action.size()) != sys.n)
        throw dimension_mismatch("action has " + std::to_string(action.size()) +
                                 " robot components, system has n=" + std::to_string(sys.n));
    for (const auto& c : action)
        if (static_cast<int>(c.size()) != sys.action_dim)
            throw dimension_mismatch("action component width " + std::to_string(c.size()) +
                                     " != " + std::to_string(sys.action_dim));
}

} // namespace detail

// One step of the evolution equations: x_{k+1} = f(x_k, u_k).
template <class Scalar, class Obs>
typename system_def<Scalar, Obs>::state_type
step(const system_def<Scalar, Obs>& sys,
     const typename system_def<Scalar, Obs>::state_type& state,
     const typename system_def<Scalar, Obs>::action_type& action,
     std::int64_t step_index = -1) {
    detail::check_state_arity(sys, state);
    detail::check_action_arity(sys, action);
    for (int i = 0; i < sys.n; ++i)
        if (!sys.action_ok(state, i, action[i]))
            throw invalid_action(i, "invalid action for robot " + std::to_string(i + 1), step_index);
    typename system_def<Scalar, Obs>::state_type next(sys.n);
    for (int i = 0; i < sys.n; ++i)
        next[i] = sys.component_step(state, i, action[i]);
    return next;
}

// y_k = h(x_k).
template <class Scalar, class Obs>
joint_obs<Obs> observe(const system_def<Scalar, Obs>& sys,
                       const typename system_def<Scalar, Obs>::state_type& state) {
    detail::check_state_arity(sys, state);
    joint_obs<Obs> out(sys.n);
    for (int i = 0; i < sys.n; ++i)
        out[i] = sys.component_observe(state, i);
    return out;
}

// A recorded run: states has H+1 entries, actions H, observations H+1,
// with states[k+1] = f(states[k], actions[k]) and observations[k] = h(states[k]).
template <class Scalar, class Obs>
struct execution_trace {
    std::vector<joint_vec<Scalar>> states;
    std::vector<joint_vec<Scalar>> actions;
    std::vector<joint_obs<Obs>> observations;

    std::int64_t horizon() const { return static_cast<std::int64_t>(actions.size()); }
};

// Per-robot policies. A state-feedback policy maps the robot's own state
// component to an action; an own-history policy consumes the robot's own
// action and observation histories. Cross-system policies additionally see
// the secondary system's state history and are evaluated by orchestrators,
// which may run the two systems at different rates.
template <class Scalar, class Obs>
class policy {
public:
    enum class kind { state_feedback, own_history, cross_system };

    using state_fn = std::function<robot_vec<Scalar>(const robot_vec<Scalar>&)>;
    // (u_0..u_{k-1}, y_0..y_k) of the same robot
    using history_fn = std::function<robot_vec<Scalar>(const std::vector<robot_vec<Scalar>>&,
                                                       const std::vector<Obs>&)>;

    static policy from_state(state_fn f, std::string name = "state-feedback") {
        policy p;
        p.kind_ = kind::state_feedback;
        p.state_fn_ = std::move(f);
        p.name_ = std::move(name);
        return p;
    }

    static policy from_history(history_fn f, std::string name = "own-history") {
        policy p;
        p.kind_ = kind::own_history;
        p.history_fn_ = std::move(f);
        p.name_ = std::move(name);
        return p;
    }

    // Constant action, the degenerate state-feedback form.
    static policy constant(robot_vec<Scalar> u, std::string name = "constant") {
        return from_state([u = std::move(u)](const robot_vec<Scalar>&) { return u; },
                          std::move(name));
    }

    kind which() const { return kind_; }
    const std::string& name() const { return name_; }

    robot_vec<Scalar> eval(const robot_vec<Scalar>& own_state,
                           const std::vector<robot_vec<Scalar>>& own_actions,
                           const std::vector<Obs>& own_observations) const {
        if (kind_ == kind::state_feedback)
            return state_fn_(own_state);
        return history_fn_(own_actions, own_observations);
    }

private:
    kind kind_ = kind::state_feedback;
    state_fn state_fn_;
    history_fn history_fn_;
    std::string name_;
};

// Roll the system forward for `horizon` steps under one policy per robot.
// The trace is fully determined by (system, policies, horizon).
template <class Scalar, class Obs>
execution_trace<Scalar, Obs> rollout(const system_def<Scalar, Obs>& sys,
                                     const std::vector<policy<Scalar, Obs>>& policies,
                                     std::int64_t horizon) {
    if (horizon < 1)
        throw invalid_horizon("horizon must be >= 1, got " + std::to_string(horizon));
    if (static_cast<int>(policies.size()) != sys.n)
        throw dimension_mismatch("need one policy per robot: " + std::to_string(policies.size()) +
                                 " policies for n=" + std::to_string(sys.n));

    execution_trace<Scalar, Obs> trace;
    trace.states.reserve(horizon + 1);
    trace.actions.reserve(horizon);
    trace.observations.reserve(horizon + 1);

    // per-robot histories handed to own-history policies
    std::vector<std::vector<robot_vec<Scalar>>> action_hist(sys.n);
    std::vector<std::vector<Obs>> obs_hist(sys.n);

    auto state = sys.initial_state;
    trace.states.push_back(state);
    auto obs = observe(sys, state);
    trace.observations.push_back(obs);
    for (int i = 0; i < sys.n; ++i)
        obs_hist[i].push_back(obs[i]);

    for (std::int64_t k = 0; k < horizon; ++k) {
        typename system_def<Scalar, Obs>::action_type action(sys.n);
        for (int i = 0; i < sys.n; ++i)
            action[i] = policies[i].eval(state[i], action_hist[i], obs_hist[i]);
        state = step(sys, state, action, k);
        obs = observe(sys, state);
        trace.states.push_back(state);
        trace.actions.push_back(action);
        trace.observations.push_back(obs);
        for (int i = 0; i < sys.n; ++i) {
            action_hist[i].push_back(action[i]);
            obs_hist[i].push_back(obs[i]);
        }
    }
    return trace;
}

// Re-apply a trace's actions from its first state. Exact-mode systems
// reproduce the states bit-identically; float-mode systems use the same
// operation order, so the replay is bit-identical as well.
template <class Scalar, class Obs>
execution_trace<Scalar, Obs> replay(const system_def<Scalar, Obs>& sys,
                                    const execution_trace<Scalar, Obs>& trace) {
    execution_trace<Scalar, Obs> out;
    if (trace.states.empty())
        throw dimension_mismatch("cannot replay an empty trace");
    auto state = trace.states.front();
    out.states.push_back(state);
    out.observations.push_back(observe(sys, state));
    for (std::size_t k = 0; k < trace.actions.size(); ++k) {
        state = step(sys, state, trace.actions[k], static_cast<std::int64_t>(k));
        out.states.push_back(state);
        out.actions.push_back(trace.actions[k]);
        out.observations.push_back(observe(sys, state));
    }
    return out;
}

} // namespace mirage

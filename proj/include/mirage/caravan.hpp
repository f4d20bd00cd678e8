#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mirage/errors.hpp"
#include "mirage/illusion.hpp"
#include "mirage/rng.hpp"
#include "mirage/system.hpp"

namespace mirage::caravan {

// Distance reading toward one side of a vehicle. `far` marks the case of
// no vehicle on that side. The sentinel is a tagged value rather than a
// float infinity so exact equality is well defined.
struct sensed_dist {
    bool far = true;
    double d = 0.0;

    static sensed_dist none() { return {true, 0.0}; }
    static sensed_dist at(double v) { return {false, v}; }

    friend bool operator==(const sensed_dist& a, const sensed_dist& b) {
        return a.far == b.far && (a.far || a.d == b.d);
    }
    friend bool operator<(const sensed_dist& a, const sensed_dist& b) {
        if (a.far != b.far)
            return b.far;  // finite readings sort before the sentinel
        return !a.far && a.d < b.d;
    }
};

// (b, a): distances behind and ahead to the nearest other vehicle.
struct reading {
    sensed_dist behind;
    sensed_dist ahead;

    friend bool operator==(const reading& x, const reading& y) {
        return x.behind == y.behind && x.ahead == y.ahead;
    }
    friend bool operator<(const reading& x, const reading& y) {
        if (!(x.behind == y.behind))
            return x.behind < y.behind;
        return x.ahead < y.ahead;
    }
};

using sys_t = system_def<double, reading>;
using trace_t = execution_trace<double, reading>;
using policy_t = policy<double, reading>;

struct params {
    int n = 1;
    double v_min = 0.0;
    double v_max = 1.0;
    std::vector<double> x0;  // may be empty when an orchestrator assigns positions
};

// Emulated stand-in distance for a missing neighbor. A chaser parked at
// least this far away counts as matching a `far` reading; the unbounded
// sensor makes a true match impossible with finitely many robots.
inline constexpr double far_distance = 1.0e6;

inline void validate(const params& p, bool need_x0 = true) {
    if (p.n < 1)
        throw invalid_params("caravan needs at least one robot");
    if (!(p.v_min < p.v_max))
        throw invalid_params("caravan requires v_min < v_max");
    if (need_x0) {
        if (static_cast<int>(p.x0.size()) != p.n)
            throw invalid_params("caravan needs one initial position per robot");
        for (std::size_t i = 0; i < p.x0.size(); ++i)
            for (std::size_t j = i + 1; j < p.x0.size(); ++j)
                if (p.x0[i] == p.x0[j])
                    throw invalid_params("caravan initial positions must be pairwise distinct");
    }
}

inline reading observe_robot(const std::vector<double>& xs, int i) {
    sensed_dist behind = sensed_dist::none();
    sensed_dist ahead = sensed_dist::none();
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (static_cast<int>(j) == i)
            continue;
        if (xs[j] < xs[i]) {
            double d = xs[i] - xs[j];
            if (behind.far || d < behind.d)
                behind = sensed_dist::at(d);
        } else if (xs[j] > xs[i]) {
            double d = xs[j] - xs[i];
            if (ahead.far || d < ahead.d)
                ahead = sensed_dist::at(d);
        }
    }
    return {behind, ahead};
}

// Vehicles on a single-lane roadway: f(x, u) = x + u with per-step
// velocities bounded to [v_min, v_max], each observing the distance to its
// nearest neighbor behind and ahead.
inline sys_t make_system(const params& p) {
    validate(p);
    sys_t sys;
    sys.n = p.n;
    sys.state_dim = 1;
    sys.action_dim = 1;
    sys.initial_state.resize(p.n);
    for (int i = 0; i < p.n; ++i)
        sys.initial_state[i] = {p.x0[i]};
    const double lo = p.v_min, hi = p.v_max;
    sys.action_ok = [lo, hi](const sys_t::state_type&, int, const robot_vec<double>& u) {
        return u.size() == 1 && u[0] >= lo && u[0] <= hi;
    };
    sys.component_step = [](const sys_t::state_type& x, int i, const robot_vec<double>& u) {
        return robot_vec<double>{x[i][0] + u[0]};
    };
    sys.component_observe = [](const sys_t::state_type& x, int i) {
        std::vector<double> xs(x.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            xs[j] = x[j][0];
        return observe_robot(xs, i);
    };
    return sys;
}

// Residual between an expected secondary reading and a realized primary
// reading. A `far` expectation is satisfied by a stand-in at distance
// >= far_distance; the residual measures how far short of that it falls.
inline double component_distance(const sensed_dist& expected, const sensed_dist& actual) {
    if (expected.far && actual.far)
        return 0.0;
    if (expected.far)
        return std::max(0.0, far_distance - actual.d);
    if (actual.far)
        return std::numeric_limits<double>::infinity();
    return std::abs(expected.d - actual.d);
}

inline double obs_distance(const reading& expected, const reading& actual) {
    return std::max(component_distance(expected.behind, actual.behind),
                    component_distance(expected.ahead, actual.ahead));
}

// Slowdown of the three-vehicle construction: ceil(2 (v_max - v_min) /
// (v̂_max - v̂_min)). The small backoff keeps exact integer ratios from
// rounding up through float noise.
inline std::int64_t slowdown_bound(const params& secondary, const params& primary) {
    validate(secondary, false);
    validate(primary, false);
    const double q = 2.0 * (secondary.v_max - secondary.v_min) / (primary.v_max - primary.v_min);
    return static_cast<std::int64_t>(std::ceil(q - 1e-9));
}

struct illusion_run {
    trace_t secondary;
    trace_t primary;
    witness wit;
    sys_t secondary_sys;
    sys_t primary_sys;
};

// The three-vehicle 1-illusion: primary robot 1 holds the mid-range speed
// while robots 2 and 3 chase the offsets the participant expects behind
// and ahead, each moving as fast as its bounds allow; z(k) is recorded
// once both offsets match within eps_obs.
inline illusion_run run_illusion(const params& secondary,
                                 const std::vector<policy_t>& secondary_policies,
                                 const params& primary,
                                 std::int64_t horizon,
                                 double eps_obs = 1e-9,
                                 std::int64_t plateau_cap = 1 << 22) {
    validate(secondary);
    validate(primary, false);
    if (primary.n != 3)
        throw invalid_params("the chasing construction uses exactly 3 primary robots");

    illusion_run run;
    run.secondary_sys = make_system(secondary);
    run.secondary = rollout(run.secondary_sys, secondary_policies, horizon);

    auto offset_of = [](const sensed_dist& s) {
        if (!s.far && s.d <= 0.0)
            throw unreachable_offset("expected offset must be positive");
        return s.far ? far_distance : s.d;
    };

    const reading first = run.secondary.observations[0][0];
    params pri = primary;
    pri.x0 = {0.0, -offset_of(first.behind), +offset_of(first.ahead)};
    run.primary_sys = make_system(pri);

    const double v_mid = (primary.v_min + primary.v_max) / 2.0;
    auto clamp = [&](double v) { return std::min(primary.v_max, std::max(primary.v_min, v)); };

    auto& pt = run.primary;
    pt.states.push_back(run.primary_sys.initial_state);
    pt.observations.push_back(observe(run.primary_sys, pt.states.back()));

    auto matches = [&](std::int64_t k) {
        return obs_distance(run.secondary.observations[k][0], pt.observations.back()[0]) <= eps_obs;
    };
    if (!matches(0))
        throw unreachable_offset("initial primary placement does not reproduce y_0");

    std::vector<std::int64_t> z{0};
    std::int64_t j = 0;
    for (std::int64_t k = 1; k <= horizon; ++k) {
        const reading want = run.secondary.observations[k][0];
        const double off_b = offset_of(want.behind);
        const double off_a = offset_of(want.ahead);
        const std::int64_t plateau_start = j;
        for (;;) {
            const auto& x = pt.states.back();
            const double lead_next = x[0][0] + v_mid;
            sys_t::action_type u = {{v_mid},
                                    {clamp((lead_next - off_b) - x[1][0])},
                                    {clamp((lead_next + off_a) - x[2][0])}};
            pt.states.push_back(step(run.primary_sys, pt.states.back(), u, j));
            pt.actions.push_back(u);
            pt.observations.push_back(observe(run.primary_sys, pt.states.back()));
            ++j;
            if (matches(k))
                break;
            if (j - plateau_start > plateau_cap)
                throw timeout_error(k, "offset chase exceeded the plateau cap at step " +
                                           std::to_string(k));
        }
        z.push_back(j);
    }

    run.wit.policy_desc = {"hold-mid-speed", "chase-behind-offset", "chase-ahead-offset"};
    run.wit.roles = role_map_seq::constant({0}, static_cast<std::size_t>(horizon) + 1);
    run.wit.scale = time_scale::from_sequence(std::move(z));
    return run;
}

struct dilation_run {
    params slow_params;
    trace_t trace;
    witness wit;
    sys_t slow_sys;
};

// An n-illusion of a recorded caravan run by a caravan whose velocity
// bounds are divided by `factor`: every step is split into `factor` equal
// sub-steps, so positions coincide at z(k) = factor * k and all n
// observations reproduce exactly. Used to nest illusions with a known
// slowdown.
inline dilation_run uniform_slowdown(const params& base,
                                     const trace_t& base_trace,
                                     int factor) {
    validate(base);
    if (factor < 1)
        throw invalid_params("dilation factor must be >= 1");
    dilation_run out;
    out.slow_params = base;
    out.slow_params.v_min = base.v_min / factor;
    out.slow_params.v_max = base.v_max / factor;
    out.slow_sys = make_system(out.slow_params);

    out.trace.states.push_back(out.slow_sys.initial_state);
    out.trace.observations.push_back(observe(out.slow_sys, out.trace.states.back()));
    std::vector<std::int64_t> z{0};
    for (std::size_t k = 0; k < base_trace.actions.size(); ++k) {
        sys_t::action_type u(base.n);
        for (int i = 0; i < base.n; ++i)
            u[i] = {base_trace.actions[k][i][0] / factor};
        for (int t = 0; t < factor; ++t) {
            out.trace.states.push_back(step(out.slow_sys, out.trace.states.back(), u));
            out.trace.actions.push_back(u);
            out.trace.observations.push_back(observe(out.slow_sys, out.trace.states.back()));
        }
        z.push_back(static_cast<std::int64_t>((k + 1) * factor));
    }
    out.wit.policy_desc.assign(base.n, "replay-at-reduced-rate");
    out.wit.roles = role_map_seq::identity(base.n, z.size());
    out.wit.scale = time_scale::from_sequence(std::move(z));
    return out;
}

// Seeded per-robot policies with independent per-step velocities; the
// velocity table is drawn up front so a policy object stays pure.
inline std::vector<policy_t> random_policies(const params& p, std::int64_t horizon,
                                             std::uint64_t seed) {
    std::vector<policy_t> out;
    out.reserve(p.n);
    for (int i = 0; i < p.n; ++i) {
        rng stream = trial_stream(seed, static_cast<std::uint64_t>(i) * 0x9E3779B9ULL + 1);
        std::vector<double> vels(static_cast<std::size_t>(horizon));
        for (auto& v : vels)
            v = stream.uniform(p.v_min, p.v_max);
        out.push_back(policy_t::from_history(
            [vels](const std::vector<robot_vec<double>>& acts, const std::vector<reading>&) {
                return robot_vec<double>{vels.at(acts.size())};
            },
            "seeded-velocity-table"));
    }
    return out;
}

// Initial positions spread widely enough that no vehicle can cross the
// participant within `horizon` steps, keeping both offsets finite and
// 1-Lipschitz in k.
inline std::vector<double> spread_positions(int n, double v_min, double v_max,
                                            std::int64_t horizon) {
    const double gap = (static_cast<double>(horizon) + 5.0) * (v_max - v_min) + 1.0;
    std::vector<double> x0;
    x0.reserve(n);
    x0.push_back(0.0);
    for (int i = 1; i < n; ++i) {
        const double side = (i % 2 == 1) ? -1.0 : 1.0;
        x0.push_back(side * gap * ((i + 1) / 2));
    }
    return x0;
}

} // namespace mirage::caravan

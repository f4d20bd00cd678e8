#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mirage/errors.hpp"
#include "mirage/system.hpp"

namespace mirage {

// The time-scaling record z: secondary step k happened at primary step z(k).
// Strict monotonicity is enforced at construction and re-checked whenever a
// serialized witness is loaded.
class time_scale {
public:
    time_scale() = default;

    static time_scale from_sequence(std::vector<std::int64_t> z) {
        time_scale t;
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (z[k] < 0)
                throw invalid_params("time scale entries must be non-negative");
            if (k > 0 && z[k] <= z[k - 1])
                throw invalid_params("time scale must be strictly increasing at k=" +
                                     std::to_string(k));
        }
        t.z_ = std::move(z);
        return t;
    }

    void append(std::int64_t v) {
        if (v < 0 || (!z_.empty() && v <= z_.back()))
            throw invalid_params("time scale must be strictly increasing");
        z_.push_back(v);
    }

    std::int64_t operator()(std::size_t k) const { return z_.at(k); }
    std::size_t size() const { return z_.size(); }
    const std::vector<std::int64_t>& values() const { return z_; }

private:
    std::vector<std::int64_t> z_;
};

// rho_k for each secondary step: maps[k][i] is the primary robot (0-based)
// playing participant i at step k.
struct role_map_seq {
    std::vector<std::vector<int>> maps;

    static role_map_seq constant(std::vector<int> map, std::size_t steps) {
        role_map_seq r;
        r.maps.assign(steps, map);
        return r;
    }

    static role_map_seq identity(int m, std::size_t steps) {
        std::vector<int> id(m);
        for (int i = 0; i < m; ++i)
            id[i] = i;
        return constant(std::move(id), steps);
    }
};

// The tuple ratifying an illusion: primary policies (as descriptors — the
// realized behavior lives in the recorded traces), the role-map sequence,
// and the time scaling.
struct witness {
    std::vector<std::string> policy_desc;
    role_map_seq roles;
    time_scale scale;

    int participants() const {
        return roles.maps.empty() ? 0 : static_cast<int>(roles.maps.front().size());
    }
};

struct illusion_report {
    std::int64_t horizon = 0;                // secondary steps verified (K)
    std::vector<double> per_step_residual;   // K+1 entries, one per secondary step
    std::vector<std::int64_t> plateau_lengths;
    std::int64_t measured_slowdown = 0;      // max plateau, 0 when no plateaus
    double epsilon = 0.0;
    bool pass = false;
    std::int64_t first_failing_step = -1;
};

// Slowdown of a recorded time scale: the largest gap between consecutive
// primary indices.
inline std::int64_t measure_slowdown(const time_scale& scale) {
    if (scale.size() < 2)
        throw insufficient_data("slowdown needs at least two time scale entries");
    std::int64_t best = 0;
    for (std::size_t k = 0; k + 1 < scale.size(); ++k)
        best = std::max(best, scale(k + 1) - scale(k));
    return best;
}

// Check the illusion constraint between two recorded observation sequences:
// for every secondary step k and participant i, the observation of primary
// robot rho_k(i) at primary step z(k) must match participant i's secondary
// observation. `dist` maps an (expected, actual) pair to a non-negative
// residual; 0 means an exact match.
template <class SObs, class PObs, class Dist>
illusion_report verify_illusion(const std::vector<joint_obs<SObs>>& secondary_obs,
                                const std::vector<joint_obs<PObs>>& primary_obs,
                                int participants,
                                const witness& w,
                                double eps_obs,
                                Dist&& dist) {
    if (secondary_obs.empty())
        throw insufficient_data("secondary observation sequence is empty");
    const std::size_t steps = secondary_obs.size();  // K+1
    if (w.scale.size() < steps)
        throw time_out_of_range("witness time scale covers " + std::to_string(w.scale.size()) +
                                " steps, trace needs " + std::to_string(steps));
    if (w.roles.maps.size() < steps)
        throw role_out_of_range("witness role maps cover " + std::to_string(w.roles.maps.size()) +
                                " steps, trace needs " + std::to_string(steps));

    illusion_report report;
    report.horizon = static_cast<std::int64_t>(steps) - 1;
    report.epsilon = eps_obs;
    report.per_step_residual.resize(steps, 0.0);
    report.pass = true;

    for (std::size_t k = 0; k < steps; ++k) {
        if (static_cast<int>(secondary_obs[k].size()) < participants)
            throw dimension_mismatch("secondary trace has fewer robots than participants");
        const std::int64_t zk = w.scale(k);
        if (zk >= static_cast<std::int64_t>(primary_obs.size()))
            throw time_out_of_range("z(" + std::to_string(k) + ")=" + std::to_string(zk) +
                                    " exceeds primary trace length " +
                                    std::to_string(primary_obs.size()));
        const auto& rho = w.roles.maps[k];
        if (static_cast<int>(rho.size()) < participants)
            throw role_out_of_range("role map at k=" + std::to_string(k) +
                                    " covers fewer than m participants");
        const int n_hat = static_cast<int>(primary_obs[zk].size());
        double residual = 0.0;
        for (int i = 0; i < participants; ++i) {
            if (rho[i] < 0 || rho[i] >= n_hat)
                throw role_out_of_range("rho_" + std::to_string(k) + "(" + std::to_string(i + 1) +
                                        ")=" + std::to_string(rho[i] + 1) + " outside 1.." +
                                        std::to_string(n_hat));
            residual = std::max(residual, dist(secondary_obs[k][i], primary_obs[zk][rho[i]]));
        }
        report.per_step_residual[k] = residual;
        if (!(residual <= eps_obs) && report.pass) {
            report.pass = false;
            report.first_failing_step = static_cast<std::int64_t>(k);
        }
    }

    report.plateau_lengths.reserve(steps - 1);
    for (std::size_t k = 0; k + 1 < steps; ++k)
        report.plateau_lengths.push_back(w.scale(k + 1) - w.scale(k));
    report.measured_slowdown = 0;
    for (auto p : report.plateau_lengths)
        report.measured_slowdown = std::max(report.measured_slowdown, p);
    return report;
}

// Trace-level convenience overload.
template <class SS, class SO, class PS, class PO, class Dist>
illusion_report verify_illusion(const system_def<SS, SO>&,
                                const execution_trace<SS, SO>& secondary,
                                const system_def<PS, PO>&,
                                const execution_trace<PS, PO>& primary,
                                int participants,
                                const witness& w,
                                double eps_obs,
                                Dist&& dist) {
    return verify_illusion(secondary.observations, primary.observations, participants, w,
                           eps_obs, std::forward<Dist>(dist));
}

// Every system is an (n,1)-illusion of itself: identity time scale,
// identity role maps, and the secondary's own policies.
template <class Scalar, class Obs>
witness identity_witness(const system_def<Scalar, Obs>& sys,
                         const std::vector<policy<Scalar, Obs>>& policies,
                         std::int64_t horizon) {
    if (static_cast<int>(policies.size()) != sys.n)
        throw dimension_mismatch("identity witness needs one policy per robot");
    if (horizon < 1)
        throw invalid_horizon("horizon must be >= 1");
    witness w;
    for (const auto& p : policies)
        w.policy_desc.push_back(p.name());
    w.roles = role_map_seq::identity(sys.n, static_cast<std::size_t>(horizon) + 1);
    std::vector<std::int64_t> z(horizon + 1);
    for (std::int64_t k = 0; k <= horizon; ++k)
        z[k] = k;
    w.scale = time_scale::from_sequence(std::move(z));
    return w;
}

// Nest two witnesses: `outer` ratifies the outermost system emulating the
// middle one, `inner` ratifies the middle system emulating the secondary.
// The composite has time scale z_outer(z_inner(k)) and role maps
// rho_outer_{z_inner(k)} after rho_inner_k. The outer witness must cover
// every robot of the middle system, or the composition is not defined.
inline witness compose_witness(const witness& outer, const witness& inner, int middle_n) {
    if (outer.participants() < middle_n)
        throw arity_mismatch("outer witness maps " + std::to_string(outer.participants()) +
                             " participants, middle system has " + std::to_string(middle_n) +
                             " robots");
    witness out;
    out.policy_desc = outer.policy_desc;
    std::vector<std::int64_t> z;
    z.reserve(inner.scale.size());
    out.roles.maps.reserve(inner.scale.size());
    for (std::size_t k = 0; k < inner.scale.size(); ++k) {
        const std::int64_t mid = inner.scale(k);
        if (mid >= static_cast<std::int64_t>(outer.scale.size()))
            throw time_out_of_range("inner z(" + std::to_string(k) +
                                    ") exceeds outer witness horizon");
        z.push_back(outer.scale(mid));
        if (k < inner.roles.maps.size()) {
            const auto& rho_in = inner.roles.maps[k];
            const auto& rho_out = outer.roles.maps.at(mid);
            std::vector<int> rho(rho_in.size());
            for (std::size_t i = 0; i < rho_in.size(); ++i) {
                if (rho_in[i] < 0 || rho_in[i] >= middle_n)
                    throw role_out_of_range("inner role map exits the middle system");
                rho[i] = rho_out.at(rho_in[i]);
            }
            out.roles.maps.push_back(std::move(rho));
        }
    }
    out.scale = time_scale::from_sequence(std::move(z));
    return out;
}

// Post-compose the observation function with kappa, modeling a degraded
// sensor. Any witness valid for a system pair stays valid for the
// kappa-coarsened pair.
template <class Scalar, class Obs, class Kappa>
auto coarsen_system(const system_def<Scalar, Obs>& sys, Kappa kappa)
    -> system_def<Scalar, decltype(kappa(std::declval<Obs>()))> {
    using Z = decltype(kappa(std::declval<Obs>()));
    system_def<Scalar, Z> out;
    out.n = sys.n;
    out.state_dim = sys.state_dim;
    out.action_dim = sys.action_dim;
    out.component_step = sys.component_step;
    out.action_ok = sys.action_ok;
    out.initial_state = sys.initial_state;
    out.component_observe =
        [inner = sys.component_observe, kappa](const typename system_def<Scalar, Z>::state_type& x,
                                               int i) { return kappa(inner(x, i)); };
    return out;
}

// Empirical under-approximation of the perceptual occurrence: the set of
// joint observations produced by sampled policy rollouts. The exact set
// ranges over all policies and is not computable in general.
template <class Scalar, class Obs, class PolicySource>
std::vector<joint_obs<Obs>> perceptual_sample(const system_def<Scalar, Obs>& sys,
                                              PolicySource&& make_policies,
                                              std::int64_t horizon,
                                              int trials) {
    if (trials < 1)
        throw invalid_params("perceptual sampling needs at least one trial");
    std::set<joint_obs<Obs>> seen;
    for (int t = 0; t < trials; ++t) {
        auto trace = rollout(sys, make_policies(t), horizon);
        for (const auto& o : trace.observations)
            seen.insert(o);
    }
    return std::vector<joint_obs<Obs>>(seen.begin(), seen.end());
}

} // namespace mirage

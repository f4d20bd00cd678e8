#pragma once

#include <stdexcept>
#include <string>

namespace mirage {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct dimension_mismatch : error {
    explicit dimension_mismatch(const std::string& what) : error(what) {}
};

struct invalid_action : error {
    int robot;
    std::int64_t step;
    invalid_action(int robot_, const std::string& what, std::int64_t step_ = -1)
        : error(what), robot(robot_), step(step_) {}
};

struct invalid_horizon : error {
    explicit invalid_horizon(const std::string& what) : error(what) {}
};

struct invalid_params : error {
    explicit invalid_params(const std::string& what) : error(what) {}
};

struct role_out_of_range : error {
    explicit role_out_of_range(const std::string& what) : error(what) {}
};

struct time_out_of_range : error {
    explicit time_out_of_range(const std::string& what) : error(what) {}
};

struct insufficient_data : error {
    explicit insufficient_data(const std::string& what) : error(what) {}
};

struct arity_mismatch : error {
    explicit arity_mismatch(const std::string& what) : error(what) {}
};

struct insufficient_robots : error {
    explicit insufficient_robots(const std::string& what) : error(what) {}
};

struct non_finite_cost : error {
    explicit non_finite_cost(const std::string& what) : error(what) {}
};

struct unreachable_offset : error {
    explicit unreachable_offset(const std::string& what) : error(what) {}
};

struct negative_state : error {
    explicit negative_state(const std::string& what) : error(what) {}
};

struct non_dyadic_start : error {
    explicit non_dyadic_start(const std::string& what) : error(what) {}
};

// A single plateau exceeded the configured cap; the step index identifies
// the secondary step whose orchestration stalled.
struct timeout_error : error {
    std::int64_t step;
    timeout_error(std::int64_t step_, const std::string& what) : error(what), step(step_) {}
};

struct config_error : error {
    explicit config_error(const std::string& what) : error(what) {}
};

struct verification_failed : error {
    std::int64_t first_failing_step;
    verification_failed(std::int64_t step, const std::string& what)
        : error(what), first_failing_step(step) {}
};

struct io_error : error {
    explicit io_error(const std::string& what) : error(what) {}
};

} // namespace mirage

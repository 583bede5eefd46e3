#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "agentctl/control/linear_system.hpp"

namespace agentctl::control {

enum class TimeResponseKind { Step, Impulse, Forced };
enum class FrequencyKind { Bode, Nyquist };

std::string_view to_string(TimeResponseKind kind) noexcept;
std::string_view to_string(FrequencyKind kind) noexcept;

struct TimeResponseData {
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> u;
    TimeResponseKind kind = TimeResponseKind::Step;
};

struct TimeResponseOptions {
    std::optional<double> horizon;
    std::optional<std::size_t> n_points;
    // Forced input sampled on the grid; its length fixes n_points.
    std::vector<double> u;
};

inline constexpr std::size_t kDefaultTimePoints = 500;

// Horizon used when none is given: 8/|Re(slowest pole)| clamped to [1, 100]
// for stable systems, 5 otherwise.
double default_horizon(const LinearSystem& sys);

// Exact ZOH simulation on a uniform grid starting at t = 0. Impulse responses
// start from x(0) = B with zero input (the direct-feedthrough delta is not
// represented). Throws BadGrid for a nonpositive horizon or fewer than two
// points; UnsupportedShape for MIMO systems.
TimeResponseData time_response(const LinearSystem& sys, TimeResponseKind kind,
                               const TimeResponseOptions& options = {});

struct FrequencyResponseData {
    std::vector<double> omega;
    std::vector<Complex> response;
    FrequencyKind kind = FrequencyKind::Bode;
    // Grid indices where G(jω) is not finite (pole on the axis).
    std::vector<std::size_t> nonfinite;
};

struct FrequencyOptions {
    // Decade exponents, e.g. {-2, 2} for 1e-2 … 1e2 rad/s.
    std::optional<std::pair<double, double>> decades;
    std::size_t n_points = 200;
};

FrequencyResponseData frequency_response(const LinearSystem& sys, FrequencyKind kind,
                                         const FrequencyOptions& options = {});
std::vector<double> magnitude_db(const FrequencyResponseData& data);
// Unwrapped phase in degrees.
std::vector<double> phase_deg(const FrequencyResponseData& data);

struct RootLocusData {
    std::vector<double> gains;
    std::vector<std::vector<Complex>> branches;
};

// Roots of den + k·num for each k. Default grid: 0 then 100 log-spaced gains
// in [1e-3, 1e3]. A supplied grid is prefixed with 0 when it lacks it.
RootLocusData root_locus_data(const LinearSystem& sys, std::optional<std::vector<double>> gains = std::nullopt);

}  // namespace agentctl::control

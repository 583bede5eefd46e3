#pragma once

#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "agentctl/control/response.hpp"

namespace agentctl::agents {

// {kind, title, series: [{label, x, y, mode}], axes: {x_label, y_label, x_scale}}
// kind is one of step, impulse, forced, bode, nyquist, pzmap, root_locus.
// Nonfinite samples are left out of both x and y.
using PlotPayload = nlohmann::json;

PlotPayload time_response_plot(const control::TimeResponseData& data, const std::string& title);
// Two series, "magnitude" in dB and "phase" in degrees, on a log ω axis.
PlotPayload bode_plot(const control::FrequencyResponseData& data, const std::string& title);
// Re/Im of G(jω) plus the mirrored branch for negative ω.
PlotPayload nyquist_plot(const control::FrequencyResponseData& data, const std::string& title);
PlotPayload pzmap_plot(std::span<const control::Complex> poles, std::span<const control::Complex> zeros,
                       const std::string& title);
PlotPayload root_locus_plot(const control::RootLocusData& data, const std::string& title);

// ValidationError naming the first violation.
void validate_plot_payload(const PlotPayload& payload);

// Standalone SVG document. Series with mode "markers" are drawn as points.
std::string render_svg(const PlotPayload& payload, int width = 640, int height = 400);

}  // namespace agentctl::agents

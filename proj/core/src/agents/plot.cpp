#include "agentctl/agents/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>

#include "agentctl/error.hpp"

namespace agentctl::agents {

namespace {

using nlohmann::json;

json series(const std::string& label, const std::vector<double>& x, const std::vector<double>& y,
            const std::string& mode = "line") {
    json xs = json::array(), ys = json::array();
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        xs.push_back(x[i]);
        ys.push_back(y[i]);
    }
    return {{"label", label}, {"x", std::move(xs)}, {"y", std::move(ys)}, {"mode", mode}};
}

json payload(const std::string& kind, const std::string& title, json all_series, const std::string& x_label,
             const std::string& y_label, const std::string& x_scale) {
    return {{"kind", kind},
            {"title", title},
            {"series", std::move(all_series)},
            {"axes", {{"x_label", x_label}, {"y_label", y_label}, {"x_scale", x_scale}}}};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

PlotPayload time_response_plot(const control::TimeResponseData& data, const std::string& title) {
    const std::string kind(control::to_string(data.kind));
    json s = json::array({series("y", data.t, data.y)});
    if (data.kind == control::TimeResponseKind::Forced) s.push_back(series("u", data.t, data.u));
    return payload(kind, title, std::move(s), "Time [s]", "Amplitude", "linear");
}

PlotPayload bode_plot(const control::FrequencyResponseData& data, const std::string& title) {
    json s = json::array({series("magnitude", data.omega, magnitude_db(data)), series("phase", data.omega, phase_deg(data))});
    return payload("bode", title, std::move(s), "Frequency [rad/s]", "Magnitude [dB] / Phase [deg]", "log");
}

PlotPayload nyquist_plot(const control::FrequencyResponseData& data, const std::string& title) {
    std::vector<double> re, im, re_neg, im_neg;
    for (const auto& z : data.response) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    for (std::size_t i = data.response.size(); i-- > 0;) {
        re_neg.push_back(data.response[i].real());
        im_neg.push_back(-data.response[i].imag());
    }
    json s = json::array({series("omega > 0", re, im), series("omega < 0", re_neg, im_neg)});
    return payload("nyquist", title, std::move(s), "Real", "Imaginary", "linear");
}

PlotPayload pzmap_plot(std::span<const control::Complex> poles, std::span<const control::Complex> zeros,
                       const std::string& title) {
    auto split = [](std::span<const control::Complex> v, std::vector<double>& re, std::vector<double>& im) {
        for (const auto& z : v) {
            re.push_back(z.real());
            im.push_back(z.imag());
        }
    };
    std::vector<double> pr, pi, zr, zi;
    split(poles, pr, pi);
    split(zeros, zr, zi);
    json s = json::array({series("poles", pr, pi, "markers"), series("zeros", zr, zi, "markers")});
    return payload("pzmap", title, std::move(s), "Real", "Imaginary", "linear");
}

PlotPayload root_locus_plot(const control::RootLocusData& data, const std::string& title) {
    json s = json::array();
    const std::size_t n = data.branches.empty() ? 0 : data.branches.front().size();
    for (std::size_t b = 0; b < n; ++b) {
        std::vector<double> re, im;
        for (const auto& poles : data.branches) {
            if (b < poles.size()) {
                re.push_back(poles[b].real());
                im.push_back(poles[b].imag());
            }
        }
        s.push_back(series("branch " + std::to_string(b + 1), re, im, "markers"));
    }
    return payload("root_locus", title, std::move(s), "Real", "Imaginary", "linear");
}

void validate_plot_payload(const PlotPayload& p) {
    static const std::set<std::string> kinds = {"step", "impulse", "forced", "bode", "nyquist", "pzmap", "root_locus", "bar"};
    auto fail = [](const std::string& what) { throw Error(ErrorCode::ValidationError, "plot payload: " + what); };
    if (!p.is_object()) fail("not an object");
    if (!p.contains("kind") || !p["kind"].is_string() || !kinds.count(p["kind"].get<std::string>())) fail("bad kind");
    if (!p.contains("series") || !p["series"].is_array()) fail("series must be an array");
    for (std::size_t i = 0; i < p["series"].size(); ++i) {
        const auto& s = p["series"][i];
        const std::string at = "series[" + std::to_string(i) + "]";
        if (!s.is_object() || !s.contains("label") || !s["label"].is_string()) fail(at + ".label missing");
        if (!s.contains("x") || !s["x"].is_array() || !s.contains("y") || !s["y"].is_array()) fail(at + " needs x and y");
        if (s["x"].size() != s["y"].size()) fail(at + " x and y differ in length");
        for (const auto& v : s["x"]) {
            if (!v.is_number()) fail(at + ".x holds a non-number");
        }
        for (const auto& v : s["y"]) {
            if (!v.is_number()) fail(at + ".y holds a non-number");
        }
    }
    if (!p.contains("axes") || !p["axes"].is_object()) fail("axes missing");
    for (const char* key : {"x_label", "y_label", "x_scale"}) {
        if (!p["axes"].contains(key) || !p["axes"][key].is_string()) fail(std::string("axes.") + key + " missing");
    }
    const std::string scale = p["axes"]["x_scale"];
    if (scale != "linear" && scale != "log") fail("axes.x_scale must be linear or log");
}

std::string render_svg(const PlotPayload& p, int width, int height) {
    validate_plot_payload(p);
    const bool logx = p["axes"]["x_scale"] == "log";
    const double ml = 60, mr = 20, mt = 30, mb = 45;
    const double pw = width - ml - mr, ph = height - mt - mb;

    auto tx = [&](double x) { return logx ? std::log10(x) : x; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : p["series"]) {
        for (std::size_t i = 0; i < s["x"].size(); ++i) {
            const double x = s["x"][i].get<double>(), y = s["y"][i].get<double>();
            if (logx && x <= 0) continue;
            x0 = std::min(x0, tx(x));
            x1 = std::max(x1, tx(x));
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return ml + (tx(x) - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return mt + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
        const double sx = ml + pw * k / 4.0, sy = mt + ph - ph * k / 4.0;
        os << "<text x=\"" << sx << "\" y=\"" << mt + ph + 15 << "\" text-anchor=\"middle\">"
           << fmt(logx ? std::pow(10.0, fx) : fx) << "</text>\n";
        os << "<text x=\"" << ml - 5 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">" << fmt(fy) << "</text>\n";
        os << "<line x1=\"" << ml << "\" y1=\"" << sy << "\" x2=\"" << ml + pw << "\" y2=\"" << sy
           << "\" stroke=\"#ddd\"/>\n";
    }
    if (p.contains("title") && p["title"].is_string()) {
        os << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
           << escape_xml(p["title"].get<std::string>()) << "</text>\n";
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8 << "\" text-anchor=\"middle\">"
       << escape_xml(p["axes"]["x_label"].get<std::string>()) << "</text>\n";
    os << "<text x=\"14\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
       << mt + ph / 2 << ")\">" << escape_xml(p["axes"]["y_label"].get<std::string>()) << "</text>\n";

    std::size_t idx = 0;
    for (const auto& s : p["series"]) {
        const char* color = kPalette[idx++ % std::size(kPalette)];
        const bool markers = s.value("mode", "line") == "markers";
        std::ostringstream pts;
        for (std::size_t i = 0; i < s["x"].size(); ++i) {
            const double x = s["x"][i].get<double>(), y = s["y"][i].get<double>();
            if (logx && x <= 0) continue;
            if (markers) {
                os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"none\" stroke=\"" << color
                   << "\"/>\n";
            } else {
                pts << px(x) << ',' << py(y) << ' ';
            }
        }
        if (!markers) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
               << "\"/>\n";
        }
        os << "<text x=\"" << ml + pw - 5 << "\" y=\"" << mt + 14 * idx << "\" text-anchor=\"end\" fill=\"" << color
           << "\">" << escape_xml(s["label"].get<std::string>()) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace agentctl::agents

#include "horo/cli/scenario.hpp"

#include "horo/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace horo::cli {

using nlohmann::json;

namespace {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
}

std::string escape(const std::string& in) {
    std::string out;
    for (char c : in) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

// Plain line chart. With `equal` the axes share one scale and the unit circle
// (boundary of the Poincare ball) is drawn.
std::string chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                  const std::vector<Series>& series, bool equal = false) {
    const double W = 640, H = 480, L = 70, R = 150, T = 40, B = 50;
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x), x1 = std::max(x1, x);
            y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    if (equal) x0 = std::min(x0, -1.0), x1 = std::max(x1, 1.0), y0 = std::min(y0, -1.0), y1 = std::max(y1, 1.0);
    if (!(x0 <= x1)) x0 = 0, x1 = 1;
    if (!(y0 <= y1)) y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    const double pad_y = 0.05 * (y1 - y0);
    y0 -= pad_y, y1 += pad_y;
    double sx = (W - L - R) / (x1 - x0), sy = (H - T - B) / (y1 - y0);
    if (equal) sx = sy = std::min(sx, sy);
    auto px = [&](double x) { return L + (x - x0) * sx; };
    auto py = [&](double y) { return H - B - (y - y0) * sy; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title) << "</text>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double x = x0 + (x1 - x0) * i / 4.0, y = y0 + (y1 - y0) * i / 4.0;
        o << "<text x=\"" << px(x) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
        o << "<text x=\"" << L - 6 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
    o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (T + H - B) / 2
      << ")\">" << escape(ylabel) << "</text>\n";
    if (equal)
        o << "<circle cx=\"" << px(0) << "\" cy=\"" << py(0) << "\" r=\"" << sx << "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    for (size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % 6];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << (s % 2 ? "1.5\" stroke-dasharray=\"6 4" : "2.5")
          << "\" points=\"";
        for (const auto& [x, y] : series[s].points)
            if (std::isfinite(x) && std::isfinite(y)) o << fmt(px(x)) << "," << fmt(py(y)) << " ";
        o << "\"/>\n";
        const double ly = T + 10 + 18.0 * static_cast<double>(s);
        o << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - R + 36 << "\" y=\"" << ly + 4 << "\">" << escape(series[s].label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::vector<double> numbers(const json& a) {
    std::vector<double> out;
    for (const auto& v : a) out.push_back(v.is_number() ? v.get<double>() : NAN);
    return out;
}

Series zip(const std::string& label, const std::vector<double>& x, const std::vector<double>& y) {
    Series s{label, {}};
    for (size_t i = 0; i < std::min(x.size(), y.size()); ++i) s.points.emplace_back(x[i], y[i]);
    return s;
}

Series polyline(const std::string& label, const json& pts) {
    Series s{label, {}};
    for (const auto& p : pts) s.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    return s;
}

}  // namespace

std::vector<std::string> emit_plots(const json& report, const std::filesystem::path& out_dir,
                                    std::vector<std::string>& notices) {
    if (!report.is_object() || !report.contains("report_version"))
        throw InputError("not a report: missing report_version");
    if (report.at("report_version") != kReportVersion) throw InputError("unsupported report version");
    std::vector<std::string> written;
    const json prof = report.value("profiles", json::object());
    if (prof.empty() || !prof.contains("radial")) {
        notices.push_back("plots skipped: only two-dimensional or rotationally symmetric fields are supported");
        return written;
    }
    std::filesystem::create_directories(out_dir);
    auto write = [&](const std::string& file, const std::string& svg) {
        const auto p = out_dir / file;
        std::ofstream out(p);
        if (!out) throw InputError("cannot write '" + p.string() + "'");
        out << svg;
        written.push_back(p.string());
    };

    const auto& rad = prof.at("radial");
    const auto theta = numbers(rad.at("theta"));
    write("rho_profile.svg", chart("conformal factor", "theta", "rho", {zip("rho", theta, numbers(rad.at("rho")))}));

    std::vector<Series> sch;
    const auto& lam = rad.at("lambda");
    const size_t m = lam.empty() ? 0 : lam.at(0).size();
    for (size_t i = 0; i < m; ++i) {
        std::vector<double> li;
        for (const auto& v : lam) li.push_back(v.at(i).get<double>());
        sch.push_back(zip("lambda_" + std::to_string(i + 1), theta, li));
    }
    sch.push_back(zip("f(lambda)", theta, numbers(rad.at("f"))));
    write("schouten_profile.svg", chart("Schouten eigenvalues", "theta", "value", sch));

    if (prof.contains("boundary")) {
        std::vector<Series> bs;
        for (const auto& ring : prof.at("boundary")) {
            const auto angle = numbers(ring.at("angle"));
            const std::string name = ring.at("name").get<std::string>();
            bs.push_back(zip("H " + name, angle, numbers(ring.at("H"))));
            if (ring.contains("k")) bs.push_back(zip("k " + name, angle, numbers(ring.at("k"))));
        }
        write("boundary_profile.svg", chart("boundary curvature", "angle", "H, k", bs));
    } else {
        notices.push_back("boundary profile skipped: no boundary ring data");
    }

    if (prof.contains("cross_section")) {
        const auto& cs = prof.at("cross_section");
        const std::string t = fmt(cs.at("t").get<double>()), s0 = fmt(cs.at("s0").get<double>());
        write("cross_section.svg", chart("ball model, t = " + t + ", s0 = " + s0, "x1", "x_last",
                                         {polyline("Sigma_t", cs.at("sigma")), polyline("cap at s0", cs.at("cap"))},
                                         true));
    } else {
        notices.push_back("cross-section skipped: no section data");
    }
    return written;
}

}  // namespace horo::cli

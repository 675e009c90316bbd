#include "horo/sphere/field_io.hpp"

#include "horo/error.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace horo::sphere {

using nlohmann::json;

std::string data_path_for(const std::string& header_path) {
    std::filesystem::path p(header_path);
    p.replace_extension(".csv");
    return p.string();
}

FieldGrid read_field(const std::string& header_path) {
    std::ifstream in(header_path);
    if (!in) throw InputError("cannot open field header '" + header_path + "'");
    json h;
    try {
        h = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("field header '" + header_path + "': " + e.what());
    }
    if (!h.is_object()) throw InputError("field header must be a JSON object");
    static const std::set<std::string> allowed{"version", "n", "chart", "sizes", "r_max", "excluded_balls"};
    for (auto it = h.begin(); it != h.end(); ++it)
        if (!allowed.count(it.key())) throw InputError("field header: unknown key '" + it.key() + "'");
    for (const char* key : {"version", "n", "chart", "sizes"})
        if (!h.contains(key)) throw InputError(std::string("field header: missing key '") + key + "'");

    DomainSpec spec;
    try {
        if (h.at("version").get<int>() != kFieldFormatVersion)
            throw InputError("field header: unsupported version");
        spec.n = h.at("n").get<int>();
        spec.chart = chart_from_string(h.at("chart").get<std::string>());
        const auto sizes = h.at("sizes").get<std::vector<int>>();
        if (sizes.empty() || sizes.size() > 2) throw InputError("field header: sizes must have 1 or 2 entries");
        spec.n_theta = sizes[0];
        if (spec.chart != ChartKind::radial) {
            if (sizes.size() != 2) throw InputError("field header: 2D charts need sizes [n_theta, n_phi]");
            spec.n_phi = sizes[1];
        }
        if (h.contains("r_max")) spec.r_max = h.at("r_max").get<double>();
        if (h.contains("excluded_balls")) {
            for (const auto& b : h.at("excluded_balls")) {
                for (auto it = b.begin(); it != b.end(); ++it)
                    if (it.key() != "center" && it.key() != "radius")
                        throw InputError("excluded ball: unknown key '" + it.key() + "'");
                ExcludedBall eb;
                const auto c = b.at("center").get<std::vector<double>>();
                eb.center = Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<long>(c.size()));
                eb.radius = b.at("radius").get<double>();
                spec.excluded.push_back(eb);
            }
        }
    } catch (const json::exception& e) {
        throw InputError("field header '" + header_path + "': " + e.what());
    }
    auto dom = build_grid(spec);

    const std::string data = data_path_for(header_path);
    std::ifstream csv(data);
    if (!csv) throw InputError("cannot open field data '" + data + "'");
    std::vector<double> values;
    std::string line;
    int row = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int cols = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                size_t used = 0;
                values.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                throw InputError(data + ":" + std::to_string(row + 1) + ": not a number '" + cell + "'");
            }
            ++cols;
        }
        if (cols != dom->n_phi())
            throw InputError(data + ":" + std::to_string(row + 1) + ": expected " + std::to_string(dom->n_phi()) +
                             " values, found " + std::to_string(cols));
        ++row;
    }
    return FieldGrid::from_values(dom, std::move(values));
}

void write_field(const FieldGrid& field, const std::string& header_path) {
    field.validate();
    const SphereDomain& d = *field.domain;
    json h;
    h["version"] = kFieldFormatVersion;
    h["n"] = d.n();
    h["chart"] = to_string(d.chart());
    if (d.chart() == ChartKind::radial) h["sizes"] = {d.n_theta()};
    else h["sizes"] = {d.n_theta(), d.n_phi()};
    if (d.chart() != ChartKind::latlon) h["r_max"] = d.spec().r_max;
    json balls = json::array();
    for (const auto& b : d.spec().excluded) {
        std::vector<double> c(b.center.data(), b.center.data() + b.center.size());
        balls.push_back({{"center", c}, {"radius", b.radius}});
    }
    h["excluded_balls"] = balls;
    std::ofstream out(header_path);
    if (!out) throw InputError("cannot write '" + header_path + "'");
    out << h.dump(2) << "\n";

    std::ofstream csv(data_path_for(header_path));
    if (!csv) throw InputError("cannot write '" + data_path_for(header_path) + "'");
    csv << std::setprecision(17);
    for (int i = 0; i < d.n_theta(); ++i) {
        for (int j = 0; j < d.n_phi(); ++j) csv << (j ? "," : "") << field.values[d.index(i, j)];
        csv << "\n";
    }
}

}  // namespace horo::sphere

#include "cvs/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace cvs::report {

namespace fs = std::filesystem;

std::string format_number(double v) {
    if (v == 0.0) return "0";  // also folds -0
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw std::runtime_error("format_number failed");
    return std::string(buf.data(), ptr);
}

void write_curve_csv(std::ostream& os, const std::vector<double>& mean, const std::vector<double>& smoothed) {
    if (mean.size() != smoothed.size()) throw std::invalid_argument("curve columns differ in length");
    os << "episode,return_mean,return_smoothed\n";
    for (std::size_t i = 0; i < mean.size(); ++i) {
        os << i << ',' << format_number(mean[i]) << ',' << format_number(smoothed[i]) << '\n';
    }
}

namespace {

double parse_field(std::string_view field, const fs::path& path, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw InputError(path.string() + ":" + std::to_string(line) + ": not a number: '" + std::string(field) + "'");
    }
    return v;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

fs::path resolve(const fs::path& p, const fs::path& base) { return p.is_absolute() ? p : base / p; }

}  // namespace

CurveTable read_curve_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw InputError(path.string() + ": empty file");
    if (line != "episode,return_mean,return_smoothed") throw InputError(path.string() + ": unexpected header '" + line + "'");
    CurveTable table;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::array<std::string_view, 3> fields;
        std::string_view rest(line);
        for (std::size_t k = 0; k < 3; ++k) {
            const auto comma = rest.find(',');
            if ((k < 2) == (comma == std::string_view::npos)) {
                throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected 3 fields");
            }
            fields[k] = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        table.episode.push_back(parse_field(fields[0], path, lineno));
        table.mean.push_back(parse_field(fields[1], path, lineno));
        table.smoothed.push_back(parse_field(fields[2], path, lineno));
    }
    if (table.episode.empty()) throw InputError(path.string() + ": no data rows");
    return table;
}

void PlotSpec::validate() const {
    if (curves.empty()) throw InputError("plot spec needs at least one curve");
    if (output.empty()) throw InputError("plot spec needs an output path");
    std::set<std::string> labels;
    for (const auto& c : curves) {
        if (!labels.insert(c.label).second) throw InputError("duplicate curve label '" + c.label + "'");
    }
}

PlotSpec PlotSpec::from_json(const nlohmann::json& doc, const fs::path& base_dir) {
    PlotSpec spec;
    try {
        spec.title = doc.value("title", "");
        spec.x_label = doc.value("x_label", spec.x_label);
        spec.y_label = doc.value("y_label", spec.y_label);
        spec.output = resolve(doc.at("output").get<std::string>(), base_dir);
        for (const auto& c : doc.at("curves")) {
            spec.curves.push_back({c.at("label").get<std::string>(), resolve(c.at("csv").get<std::string>(), base_dir)});
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed plot spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

nlohmann::json PlotSpec::to_json(const fs::path& base_dir) const {
    auto rel = [&](const fs::path& p) {
        const fs::path r = p.lexically_relative(base_dir);
        return (r.empty() || *r.begin() == "..") ? p.generic_string() : r.generic_string();
    };
    nlohmann::json doc;
    doc["title"] = title;
    doc["x_label"] = x_label;
    doc["y_label"] = y_label;
    doc["output"] = rel(output);
    doc["curves"] = nlohmann::json::array();
    for (const auto& c : curves) doc["curves"].push_back({{"label", c.label}, {"csv", rel(c.csv)}});
    return doc;
}

std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
    constexpr double width = 800, height = 500;
    constexpr double left = 70, right = 170, top = 40, bottom = 50;
    constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
    static constexpr std::array<const char*, 8> palette = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
        for (double v : s.y) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
    if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
    if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
    if (ymax == ymin) ymin -= 1, ymax += 1;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * plot_h; };

    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
       << width << ' ' << height << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << left + plot_w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << xml_escape(title) << "</text>\n"
       << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        os << "<text x=\"" << px(xv) << "\" y=\"" << top + plot_h + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << format_number(xv) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format_number(yv) << "</text>\n";
    }
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       << "transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">" << xml_escape(y_label) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = palette[i % palette.size()];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t j = 0; j < std::min(s.x.size(), s.y.size()); ++j) {
            if (j) os << ' ';
            os << format_number(px(s.x[j])) << ',' << format_number(py(s.y[j]));
        }
        os << "\"/>\n";
        const double ly = top + 16 + 20.0 * static_cast<double>(i);
        os << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 36 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"12\">"
           << xml_escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace cvs::report

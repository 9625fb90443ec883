#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace cvs::report {

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_number(double v);

/// Learning curve as written by `cvs_lab run`: header
/// `episode,return_mean,return_smoothed`, one row per episode, `\n` line ends.
struct CurveTable {
    std::vector<double> episode;
    std::vector<double> mean;
    std::vector<double> smoothed;
};

void write_curve_csv(std::ostream& os, const std::vector<double>& mean, const std::vector<double>& smoothed);

/// Input problems (missing file, empty or malformed table, bad plot spec).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws InputError when the file is missing, empty, or malformed.
CurveTable read_curve_csv(const std::filesystem::path& path);

struct PlotCurve {
    std::string label;
    std::filesystem::path csv;
};

struct PlotSpec {
    std::string title;
    std::string x_label = "episode";
    std::string y_label = "average return";
    std::filesystem::path output;
    std::vector<PlotCurve> curves;

    /// >= 1 curve, unique labels, output set. Throws InputError.
    void validate() const;

    /// Relative paths in the document are resolved against `base_dir`.
    static PlotSpec from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
    /// Paths are written relative to `base_dir` when they live under it.
    nlohmann::json to_json(const std::filesystem::path& base_dir) const;
};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Standalone SVG: one polyline per series, linear axes fitted to the data,
/// legend from the labels. No external references.
std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

}  // namespace cvs::report

#include "cvs/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cvs/harness.hpp"
#include "cvs/report.hpp"

namespace cvs::cli {

namespace fs = std::filesystem;

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot write " + path.string());
    os << content;
    os.close();
    if (!os) throw IoError("failed writing " + path.string());
}

std::string curve_csv(const std::vector<double>& mean, std::size_t window) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    report::write_curve_csv(os, mean, running_average(mean, window));
    return os.str();
}

std::optional<nlohmann::json> load_config(const std::string& config, std::ostream& err) {
    std::string text;
    if (fs::is_regular_file(config)) {
        std::ifstream in(config, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else if (const Preset* p = find_preset(config)) {
        text = p->json;
    } else {
        err << "error: config '" << config << "' not found (not a file or a preset name)\n";
        return std::nullopt;
    }
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        err << "error: " << config << ": invalid JSON: " << e.what() << '\n';
        return std::nullopt;
    }
}

}  // namespace

int cmd_run(const std::string& config, const fs::path& out_dir, std::optional<std::uint64_t> seed, std::ostream& out,
            std::ostream& err) {
    const auto doc = load_config(config, err);
    if (!doc) return kExitConfig;

    Study study;
    try {
        study = parse_study(*doc);
    } catch (const ConfigError& e) {
        err << "error: invalid config key '" << e.key() << "': " << e.what() << '\n';
        return kExitConfig;
    }
    if (seed) {
        for (auto& arm : study.arms) arm.config.seed = *seed;
    }

    try {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

        report::PlotSpec plot;
        plot.title = study.name;
        plot.output = out_dir / (study.name + ".svg");
        for (const auto& arm : study.arms) {
            const auto results = run_experiment(arm.config);
            const auto mean = average_over_runs(results);
            const fs::path csv = out_dir / (study.compare ? study.name + "_" + arm.label + ".csv" : study.name + ".csv");
            write_file(csv, curve_csv(mean, arm.config.window));
            out << "wrote " << csv.string() << " (" << mean.size() << " episodes, " << arm.config.runs << " runs)\n";
            plot.curves.push_back({arm.label, csv});
        }
        if (study.compare) {
            const fs::path spec_path = out_dir / (study.name + "_plot.json");
            write_file(spec_path, plot.to_json(out_dir).dump(2) + "\n");
            out << "wrote " << spec_path.string() << '\n';
            return cmd_plot(spec_path, out, err);
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConfigError& e) {
        err << "error: invalid config key '" << e.key() << "': " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

int cmd_plot(const fs::path& spec_path, std::ostream& out, std::ostream& err) {
    report::PlotSpec spec;
    std::vector<report::Series> series;
    try {
        std::ifstream in(spec_path);
        if (!in) throw report::InputError("cannot open plot spec " + spec_path.string());
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw report::InputError(spec_path.string() + ": invalid JSON: " + e.what());
        }
        spec = report::PlotSpec::from_json(doc, spec_path.parent_path());
        for (const auto& c : spec.curves) {
            const auto table = report::read_curve_csv(c.csv);
            series.push_back({c.label, table.episode, table.smoothed});
        }
    } catch (const report::InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        write_file(spec.output, report::render_svg(spec.title, spec.x_label, spec.y_label, series));
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    out << "wrote " << spec.output.string() << '\n';
    return kExitOk;
}

int cmd_list(std::ostream& out) {
    out << "environments:\n";
    for (const auto& e : environment_names()) out << "  " << e << '\n';
    out << "algorithms:\n";
    for (const auto& a : algorithm_names()) out << "  " << a << '\n';
    out << "presets:\n";
    for (const auto& p : presets()) out << "  " << p.name << " - " << p.description << '\n';
    return kExitOk;
}

}  // namespace cvs::cli

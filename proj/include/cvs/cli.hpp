#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cvs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

struct Preset {
    std::string name;
    std::string description;
    std::string json;
};

/// Shipped experiment configs (fig2, fig3, fig3_cvs, fig4, fig6, shooter).
const std::vector<Preset>& presets();
/// Looks a preset up by name, with or without a trailing ".json".
const Preset* find_preset(std::string_view name);

/// Runs the config at `config` (a file, or a preset name when no such file
/// exists) and writes CSVs into `out_dir`. Compare configs additionally get a
/// plot spec `<name>_plot.json` and its rendered `<name>.svg`.
int cmd_run(const std::string& config, const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed,
            std::ostream& out, std::ostream& err);

int cmd_plot(const std::filesystem::path& spec_path, std::ostream& out, std::ostream& err);

int cmd_list(std::ostream& out);

}  // namespace cvs::cli

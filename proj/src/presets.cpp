#include "cvs/cli.hpp"

namespace cvs::cli {

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = {
        {"fig2", "two-level tree with a distant best leaf, CVS vs Q-Learning", R"({
  "name": "fig2",
  "environment": "roadtree:fig1",
  "episodes": 10000, "runs": 10, "seed": 2, "window": 100,
  "alpha": 0.1, "epsilon": 0.1, "gamma": 1.0, "q0": 0.0,
  "compare": [
    {"label": "cvs", "algorithm": "cvs"},
    {"label": "qlearning", "algorithm": "qlearning"}
  ]
})"},
        {"fig3", "two-branch tree (10 vs 50), CVS vs Watkins Q(lambda=0.9)", R"({
  "name": "fig3",
  "environment": "roadtree:fig3",
  "episodes": 200, "runs": 20, "seed": 3, "window": 10,
  "alpha": 0.1, "epsilon": 0.1, "gamma": 1.0, "lambda": 0.9, "q0": 0.0,
  "compare": [
    {"label": "cvs", "algorithm": "cvs"},
    {"label": "qlambda", "algorithm": "qlambda"}
  ]
})"},
        {"fig3_cvs", "two-branch tree (10 vs 50), CVS only", R"({
  "name": "fig3_cvs",
  "environment": "roadtree:fig3",
  "episodes": 200, "runs": 20, "seed": 3, "window": 10,
  "algorithm": "cvs",
  "alpha": 0.1, "epsilon": 0.1, "gamma": 1.0, "q0": 0.0
})"},
        {"fig4", "equal-distance tree (50 vs 50), CVS vs Watkins Q(lambda=0.9)", R"({
  "name": "fig4",
  "environment": "roadtree:fig4",
  "episodes": 200, "runs": 20, "seed": 4, "window": 20,
  "alpha": 0.1, "epsilon": 0.1, "gamma": 1.0, "lambda": 0.9, "q0": 0.0,
  "compare": [
    {"label": "cvs", "algorithm": "cvs"},
    {"label": "qlambda", "algorithm": "qlambda"}
  ]
})"},
        {"fig6", "hidden-optimum tree (K=10), CVS vs Monte Carlo", R"({
  "name": "fig6",
  "environment": {"name": "roadtree", "tree": "fig6", "low_children": 10, "distance": 10},
  "episodes": 300, "runs": 10, "seed": 6, "window": 10,
  "alpha": 0.1, "epsilon": 0.1, "gamma": 1.0, "q0": 0.0,
  "compare": [
    {"label": "cvs", "algorithm": "cvs"},
    {"label": "mc", "algorithm": "mc"}
  ]
})"},
        {"shooter", "Shooter, CVS vs Q-Learning", R"({
  "name": "shooter",
  "environment": {"name": "shooter", "obstacle_rows": [4, 5, 6], "max_steps": 200},
  "episodes": 3000, "runs": 10, "seed": 7, "window": 100,
  "alpha": 0.1, "epsilon": 0.1, "gamma": 1.0, "q0": 0.0,
  "compare": [
    {"label": "cvs", "algorithm": "cvs"},
    {"label": "qlearning", "algorithm": "qlearning"}
  ]
})"},
    };
    return all;
}

const Preset* find_preset(std::string_view name) {
    if (name.ends_with(".json")) name.remove_suffix(5);
    for (const auto& p : presets()) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

}  // namespace cvs::cli

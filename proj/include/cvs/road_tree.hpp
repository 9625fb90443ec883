#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cvs/mdp.hpp"
#include "cvs/q_table.hpp"

namespace cvs::roadtree {

enum class NodeKind { junction, terminal };

struct TreeNode {
    int id = 0;
    double reward = 0.0;
    NodeKind kind = NodeKind::junction;
};

struct TreeEdge {
    int parent = 0;
    int child = 0;
    int distance = 1;
};

/// Rooted tree of junction/terminal nodes. Children of a node are ordered as
/// their edges appear in `edges`; that order defines the action indices.
struct TreeSpec {
    int root = 0;
    std::vector<TreeNode> nodes;
    std::vector<TreeEdge> edges;

    /// Throws TreeSpecError naming the offending node.
    void validate() const;

    static TreeSpec from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

class TreeSpecError : public std::invalid_argument {
public:
    TreeSpecError(const std::string& what, int node_id)
        : std::invalid_argument(what + " (node " + std::to_string(node_id) + ")"), node_id_(node_id) {}
    int node_id() const noexcept { return node_id_; }

private:
    int node_id_;
};

TreeSpec fig1_tree();
TreeSpec fig3_tree();
TreeSpec fig4_tree();
/// Two-level tree with a low-reward junction (children 0 and +1) and a
/// high-reward junction whose `low_children` children pay -2 and whose last
/// child pays +1. Every edge has length `distance`.
TreeSpec fig6_tree(int low_children = 10, int distance = 10);

/// fig1 | fig3 | fig4 | fig6. Throws std::invalid_argument for other names.
TreeSpec builtin_tree(std::string_view name);
std::vector<std::string> builtin_tree_names();

enum class StateKind { junction, simple, terminal_node, sink };

/// A TreeSpec expanded into a tabular MDP: every edge of length d carries
/// d - 1 single-action simple states; all terminal nodes drain into one
/// shared TERMINAL sink.
class RoadTreeEnv final : public Environment {
public:
    explicit RoadTreeEnv(TreeSpec spec);

    std::string name() const override { return "roadtree"; }
    std::size_t num_states() const override { return states_.size(); }
    std::size_t num_actions(StateId s) const override;
    StateId terminal_state() const override { return sink_; }
    StateId reset(Rng& rng) const override;
    Transition step(StateId s, ActionId a, Rng& rng) const override;
    CriticalityFn criticality() const override;

    StateId root() const noexcept { return StateId{0}; }
    StateKind kind(StateId s) const { return states_.at(s.value).kind; }
    /// Spec node id for junction / terminal-node states, -1 otherwise.
    int node_id(StateId s) const { return states_.at(s.value).node_id; }
    std::size_t count(StateKind k) const;
    const TreeSpec& spec() const noexcept { return spec_; }

private:
    struct Edge {
        StateId next;
        double reward;
    };
    struct State {
        StateKind kind;
        int node_id;
        std::vector<Edge> out;
    };

    TreeSpec spec_;
    std::vector<State> states_;
    StateId sink_;
};

/// Natural criticality: 1 on junctions, terminal nodes and TERMINAL, 0 on simple states.
CriticalityFn roadtree_criticality(const RoadTreeEnv& env);

struct OracleResult {
    double best_return = 0.0;
    /// Choices at multi-action states along one optimal path, root first.
    std::vector<ActionId> path;
};

/// Exhaustive enumeration of every root-to-TERMINAL trajectory (undiscounted).
OracleResult optimal_return_oracle(const RoadTreeEnv& env);

/// Worst undiscounted return over all paths that follow greedy_actions at every
/// state, ties expanded. Equal to the oracle return iff every greedy path is optimal.
double worst_greedy_return(const RoadTreeEnv& env, const QTable& q);

}  // namespace cvs::roadtree

#include "cvs/road_tree.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>

namespace cvs::roadtree {

namespace {

std::string_view kind_name(NodeKind k) { return k == NodeKind::junction ? "junction" : "terminal"; }

NodeKind parse_kind(const std::string& s, int id) {
    if (s == "junction") return NodeKind::junction;
    if (s == "terminal") return NodeKind::terminal;
    throw TreeSpecError("unknown node kind '" + s + "'", id);
}

}  // namespace

void TreeSpec::validate() const {
    std::map<int, const TreeNode*> by_id;
    for (const auto& n : nodes) {
        if (!by_id.emplace(n.id, &n).second) throw TreeSpecError("duplicate node id", n.id);
    }
    if (!by_id.contains(root)) throw TreeSpecError("root is not a declared node", root);

    std::map<int, int> parent_of;
    std::map<int, std::vector<int>> children;
    for (const auto& e : edges) {
        if (!by_id.contains(e.parent)) throw TreeSpecError("edge from undeclared node", e.parent);
        if (!by_id.contains(e.child)) throw TreeSpecError("edge to undeclared node", e.child);
        if (e.distance < 1) throw TreeSpecError("edge distance must be >= 1", e.child);
        if (e.child == root) throw TreeSpecError("root cannot have a parent", e.child);
        if (!parent_of.emplace(e.child, e.parent).second) throw TreeSpecError("node has more than one parent", e.child);
        children[e.parent].push_back(e.child);
    }

    // Every node must be reachable from the root; with single parents this also rules out cycles.
    std::set<int> seen{root};
    std::deque<int> frontier{root};
    while (!frontier.empty()) {
        const int id = frontier.front();
        frontier.pop_front();
        for (int c : children[id]) {
            if (!seen.insert(c).second) throw TreeSpecError("cycle through node", c);
            frontier.push_back(c);
        }
    }
    for (const auto& n : nodes) {
        if (!seen.contains(n.id)) throw TreeSpecError("node unreachable from root (cycle or disconnected)", n.id);
        const bool leaf = children[n.id].empty();
        if (leaf && n.kind != NodeKind::terminal) throw TreeSpecError("leaf node must be terminal", n.id);
        if (!leaf && n.kind == NodeKind::terminal) throw TreeSpecError("terminal node cannot have children", n.id);
    }
}

TreeSpec TreeSpec::from_json(const nlohmann::json& doc) {
    TreeSpec spec;
    try {
        spec.root = doc.at("root").get<int>();
        for (const auto& n : doc.at("nodes")) {
            const int id = n.at("id").get<int>();
            spec.nodes.push_back({id, n.at("reward").get<double>(), parse_kind(n.at("kind").get<std::string>(), id)});
        }
        for (const auto& e : doc.at("edges")) {
            spec.edges.push_back({e.at("parent").get<int>(), e.at("child").get<int>(), e.at("distance").get<int>()});
        }
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("malformed tree spec: ") + ex.what());
    }
    spec.validate();
    return spec;
}

nlohmann::json TreeSpec::to_json() const {
    nlohmann::json doc;
    doc["root"] = root;
    doc["nodes"] = nlohmann::json::array();
    for (const auto& n : nodes) {
        doc["nodes"].push_back({{"id", n.id}, {"reward", n.reward}, {"kind", kind_name(n.kind)}});
    }
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : edges) {
        doc["edges"].push_back({{"parent", e.parent}, {"child", e.child}, {"distance", e.distance}});
    }
    return doc;
}

TreeSpec fig1_tree() {
    using K = NodeKind;
    return TreeSpec{
        .root = 0,
        .nodes = {{0, 0, K::junction}, {1, 0, K::junction}, {2, 1, K::junction}, {3, 0, K::terminal},
                  {4, 7, K::terminal}, {5, 1, K::terminal}, {6, 1, K::terminal}},
        .edges = {{0, 1, 20}, {0, 2, 10}, {1, 3, 10}, {1, 4, 15}, {2, 5, 15}, {2, 6, 15}},
    };
}

TreeSpec fig3_tree() {
    using K = NodeKind;
    return TreeSpec{
        .root = 0,
        .nodes = {{0, 0, K::junction}, {1, 1, K::terminal}, {2, 2, K::terminal}},
        .edges = {{0, 1, 10}, {0, 2, 50}},
    };
}

TreeSpec fig4_tree() {
    using K = NodeKind;
    return TreeSpec{
        .root = 0,
        .nodes = {{0, 0, K::junction}, {1, 1, K::terminal}, {2, 2, K::terminal}},
        .edges = {{0, 1, 50}, {0, 2, 50}},
    };
}

TreeSpec fig6_tree(int low_children, int distance) {
    if (low_children < 1) throw std::invalid_argument("fig6 needs at least one low-reward child");
    if (distance < 1) throw std::invalid_argument("fig6 distance must be >= 1");
    using K = NodeKind;
    TreeSpec spec;
    spec.root = 0;
    spec.nodes = {{0, 0, K::junction}, {1, 0, K::junction}, {2, 1, K::junction},
                  {3, 0, K::terminal}, {4, 1, K::terminal}};
    spec.edges = {{0, 1, distance}, {0, 2, distance}, {1, 3, distance}, {1, 4, distance}};
    int next_id = 5;
    for (int i = 0; i < low_children; ++i, ++next_id) {
        spec.nodes.push_back({next_id, -2, K::terminal});
        spec.edges.push_back({2, next_id, distance});
    }
    spec.nodes.push_back({next_id, 1, K::terminal});
    spec.edges.push_back({2, next_id, distance});
    return spec;
}

TreeSpec builtin_tree(std::string_view name) {
    if (name == "fig1") return fig1_tree();
    if (name == "fig3") return fig3_tree();
    if (name == "fig4") return fig4_tree();
    if (name == "fig6") return fig6_tree();
    throw std::invalid_argument("unknown built-in tree '" + std::string(name) + "'");
}

std::vector<std::string> builtin_tree_names() { return {"fig1", "fig3", "fig4", "fig6"}; }

RoadTreeEnv::RoadTreeEnv(TreeSpec spec) : spec_(std::move(spec)) {
    spec_.validate();

    std::map<int, const TreeNode*> by_id;
    for (const auto& n : spec_.nodes) by_id[n.id] = &n;
    std::map<int, std::vector<const TreeEdge*>> children;
    for (const auto& e : spec_.edges) children[e.parent].push_back(&e);

    // Sink index is fixed up after all other states are allocated.
    constexpr std::uint32_t pending_sink = std::numeric_limits<std::uint32_t>::max();

    states_.push_back({StateKind::junction, spec_.root, {}});
    std::deque<std::pair<int, StateId>> frontier{{spec_.root, StateId{0}}};
    while (!frontier.empty()) {
        const auto [node, node_state] = frontier.front();
        frontier.pop_front();
        for (const TreeEdge* e : children[node]) {
            const TreeNode& child = *by_id.at(e->child);
            const bool child_terminal = child.kind == NodeKind::terminal;

            // The child node itself is allocated after its chain of simple states.
            const auto first_simple = static_cast<std::uint32_t>(states_.size());
            const auto simple_count = static_cast<std::uint32_t>(e->distance - 1);
            const StateId child_state{first_simple + simple_count};
            // Stepping onto a terminal node pays its reward and ends the episode.
            const StateId arrival = child_terminal ? StateId{pending_sink} : child_state;

            StateId entry = simple_count > 0 ? StateId{first_simple} : arrival;
            double entry_reward = simple_count > 0 ? 0.0 : child.reward;
            states_[node_state.value].out.push_back({entry, entry_reward});

            for (std::uint32_t k = 0; k < simple_count; ++k) {
                const bool last = k + 1 == simple_count;
                State st{StateKind::simple, -1, {}};
                st.out.push_back(last ? Edge{arrival, child.reward} : Edge{StateId{first_simple + k + 1}, 0.0});
                states_.push_back(std::move(st));
            }
            states_.push_back({child_terminal ? StateKind::terminal_node : StateKind::junction, child.id, {}});
            if (child_terminal) {
                states_.back().out.push_back({StateId{pending_sink}, 0.0});
            } else {
                frontier.emplace_back(child.id, child_state);
            }
        }
    }
    sink_ = StateId{static_cast<std::uint32_t>(states_.size())};
    states_.push_back({StateKind::sink, -1, {}});
    for (auto& st : states_) {
        for (auto& edge : st.out) {
            if (edge.next.value == pending_sink) edge.next = sink_;
        }
    }
}

std::size_t RoadTreeEnv::num_actions(StateId s) const {
    if (s.value >= states_.size()) throw ContractError("state index out of range");
    return states_[s.value].out.size();
}

StateId RoadTreeEnv::reset(Rng&) const { return root(); }

Transition RoadTreeEnv::step(StateId s, ActionId a, Rng&) const {
    if (s == sink_) throw ContractError("roadtree: step from TERMINAL");
    if (s.value >= states_.size()) throw ContractError("roadtree: state index out of range");
    const auto& out = states_[s.value].out;
    if (a.value >= out.size()) {
        throw ContractError("roadtree: invalid action " + std::to_string(a.value) + " at state " + std::to_string(s.value));
    }
    const Edge& e = out[a.value];
    return Transition{e.reward, e.next, e.next == sink_};
}

CriticalityFn RoadTreeEnv::criticality() const { return roadtree_criticality(*this); }

std::size_t RoadTreeEnv::count(StateKind k) const {
    return static_cast<std::size_t>(std::count_if(states_.begin(), states_.end(), [k](const State& s) { return s.kind == k; }));
}

CriticalityFn roadtree_criticality(const RoadTreeEnv& env) {
    std::vector<double> table(env.num_states());
    for (std::uint32_t s = 0; s < table.size(); ++s) {
        table[s] = env.kind(StateId{s}) == StateKind::simple ? 0.0 : 1.0;
    }
    return CriticalityFn([table = std::move(table)](StateId s) { return table.at(s.value); });
}

namespace {

// Explores the environment through its public step() only, so the oracle does
// not share code paths with the tree expansion it is checking.
void enumerate(const RoadTreeEnv& env, StateId s, double acc, std::vector<ActionId>& choices, Rng& rng,
               OracleResult& best, bool& found) {
    const std::size_t n = env.num_actions(s);
    for (std::uint32_t a = 0; a < n; ++a) {
        const Transition t = env.step(s, ActionId{a}, rng);
        if (n > 1) choices.push_back(ActionId{a});
        if (t.terminal) {
            if (!found || acc + t.reward > best.best_return) {
                best.best_return = acc + t.reward;
                best.path = choices;
                found = true;
            }
        } else {
            enumerate(env, t.next_state, acc + t.reward, choices, rng, best, found);
        }
        if (n > 1) choices.pop_back();
    }
}

double worst_greedy(const RoadTreeEnv& env, const QTable& q, StateId s, Rng& rng) {
    double worst = std::numeric_limits<double>::infinity();
    for (ActionId a : greedy_actions(q, s)) {
        const Transition t = env.step(s, a, rng);
        const double ret = t.reward + (t.terminal ? 0.0 : worst_greedy(env, q, t.next_state, rng));
        worst = std::min(worst, ret);
    }
    return worst;
}

}  // namespace

OracleResult optimal_return_oracle(const RoadTreeEnv& env) {
    Rng unused(0);
    OracleResult best;
    bool found = false;
    std::vector<ActionId> choices;
    enumerate(env, env.root(), 0.0, choices, unused, best, found);
    return best;
}

double worst_greedy_return(const RoadTreeEnv& env, const QTable& q) {
    Rng unused(0);
    return worst_greedy(env, q, env.root(), unused);
}

}  // namespace cvs::roadtree

// Developer tool: materialize the walk tree used by the engine and dump it
// as nested JSON, so tree shapes and boundary tags can be inspected by eye.
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hardcore/io.hpp"
#include "hardcore/periodic.hpp"
#include "hardcore/saw.hpp"
#include "hardcore/views.hpp"

using namespace hardcore;
using nlohmann::json;

namespace {

json node_to_json(const SawNode& node) {
    json j;
    j["name"] = node.name;
    j["state"] = to_string(node.state);
    if (node.state == NodeState::Free) j["lambda"] = node.activity;
    if (!node.children.empty()) {
        json kids = json::array();
        for (const auto& c : node.children) kids.push_back(node_to_json(*c));
        j["children"] = std::move(kids);
    }
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dump the walk tree rooted at a vertex"};
    std::string input;
    std::string vertex;
    int depth = 4;
    bool remove_past = false;
    std::uint64_t budget = 1'000'000;
    app.add_option("input", input, "graph JSON file")->required();
    app.add_option("--vertex", vertex, "root vertex label (default: first)");
    app.add_option("--depth", depth, "depth cap")->capture_default_str();
    app.add_flag("--remove-past", remove_past,
                 "periodic graphs: delete the lexicographic past of the origin cell");
    app.add_option("--budget", budget, "node budget")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        const json in = load_json_file(input);
        std::unique_ptr<SawNode> root;
        if (looks_like_periodic_graph(in)) {
            const PeriodicGraph pg = parse_periodic_graph(in);
            int u = 0;
            if (!vertex.empty()) {
                u = pg.domain_index_of_label(vertex);
                if (u < 0) throw InvalidInput("unknown domain vertex: " + vertex);
            }
            const PeriodicVertex pv{Offset{}, static_cast<std::int32_t>(u)};
            root = build_tsaw(PeriodicPastView(pg, remove_past), pv, depth, budget);
        } else {
            auto [g, lam] = parse_finite_graph(in);
            int v = 0;
            if (!vertex.empty()) {
                v = g.index_of_label(vertex);
                if (v < 0) throw InvalidInput("unknown vertex: " + vertex);
            }
            root = build_tsaw(FiniteGraphView(g, lam), v, depth, budget);
        }
        json j = node_to_json(*root);
        j["nodes"] = node_count(*root);
        j["p_all_unoccupied"] =
            root_unoccupied_probability(*root, BoundaryCondition::AllUnoccupied);
        j["p_all_occupied"] = root_unoccupied_probability(*root, BoundaryCondition::AllOccupied);
        std::cout << dump_json(j);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

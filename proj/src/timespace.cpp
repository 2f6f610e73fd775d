#include "tfacpp/timespace.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "tfacpp/errors.hpp"

namespace tfacpp {

bool cyclic_crosses(int from, int to, int t) {
    if (from == to) return true;  // spans the full day
    if (from < to) return from <= t && t < to;
    return t >= from || t < to;
}

TimeSpaceNetwork build_network(const Instance& inst, const std::string& month,
                               const std::string& fleet_type, int count_time) {
    const FleetType& ft = inst.fleet_types[inst.fleet_index(fleet_type)];
    TimeSpaceNetwork net;
    net.month = month;
    net.fleet_type = fleet_type;
    net.count_time = count_time;

    // Nodes merged on identical (station, time); departures dominate the kind.
    std::map<std::pair<std::string, int>, int> node_of;
    auto intern = [&](const std::string& station, int time, EventKind kind) {
        auto key = std::make_pair(station, time);
        auto it = node_of.find(key);
        if (it != node_of.end()) {
            if (kind == EventKind::Departure) net.nodes[it->second].kind = kind;
            return it->second;
        }
        net.nodes.push_back(EventNode{station, time, kind});
        int idx = static_cast<int>(net.nodes.size()) - 1;
        node_of.emplace(key, idx);
        return idx;
    };

    for (int li : inst.legs_in_month(month)) {
        const FlightLeg& l = inst.legs[li];
        int dep_node = intern(l.origin, l.departure, EventKind::Departure);
        int ready = (l.arrival + ft.min_turn_time) % 1440;
        int arr_node = intern(l.destination, ready, EventKind::ArrivalReady);
        net.leg_arcs.push_back(LegArc{li, dep_node, arr_node});
    }

    // Per-station cyclic ground chain over time-sorted nodes.
    std::map<std::string, std::vector<int>> by_station;
    for (size_t n = 0; n < net.nodes.size(); ++n)
        by_station[net.nodes[n].station].push_back(static_cast<int>(n));
    for (auto& [station, ids] : by_station) {
        std::sort(ids.begin(), ids.end(),
                  [&](int a, int b) { return net.nodes[a].time < net.nodes[b].time; });
        if (ids.size() == 1) {
            net.ground_arcs.push_back(GroundArc{ids[0], ids[0], true});
            continue;
        }
        for (size_t k = 0; k + 1 < ids.size(); ++k)
            net.ground_arcs.push_back(GroundArc{ids[k], ids[k + 1], false});
        net.ground_arcs.push_back(GroundArc{ids.back(), ids.front(), true});
    }

    net.adj.assign(net.nodes.size(), NodeAdjacency{});
    for (size_t a = 0; a < net.leg_arcs.size(); ++a) {
        net.adj[net.leg_arcs[a].from].legs_out.push_back(static_cast<int>(a));
        net.adj[net.leg_arcs[a].to].legs_in.push_back(static_cast<int>(a));
    }
    for (size_t g = 0; g < net.ground_arcs.size(); ++g) {
        net.adj[net.ground_arcs[g].from].ground_out.push_back(static_cast<int>(g));
        net.adj[net.ground_arcs[g].to].ground_in.push_back(static_cast<int>(g));
    }

    for (size_t a = 0; a < net.leg_arcs.size(); ++a) {
        int from_t = net.nodes[net.leg_arcs[a].from].time;
        int to_t = net.nodes[net.leg_arcs[a].to].time;
        if (cyclic_crosses(from_t, to_t, count_time))
            net.leg_crossers.push_back(static_cast<int>(a));
    }
    for (size_t g = 0; g < net.ground_arcs.size(); ++g) {
        int from_t = net.nodes[net.ground_arcs[g].from].time;
        int to_t = net.nodes[net.ground_arcs[g].to].time;
        if (cyclic_crosses(from_t, to_t, count_time))
            net.ground_crossers.push_back(static_cast<int>(g));
    }
    return net;
}

const NodeAdjacency& TimeSpaceNetwork::adjacency(int node) const {
    if (node < 0 || node >= static_cast<int>(nodes.size()))
        throw SolveError("adjacency: unknown node " + std::to_string(node));
    return adj[node];
}

void write_dot(const TimeSpaceNetwork& net, const Instance& inst, std::ostream& out) {
    out << "digraph \"" << net.month << "_" << net.fleet_type << "\" {\n";
    out << "  rankdir=LR;\n";
    for (size_t n = 0; n < net.nodes.size(); ++n) {
        const auto& nd = net.nodes[n];
        out << "  n" << n << " [label=\"" << nd.station << "@" << nd.time / 60 << ":";
        if (nd.time % 60 < 10) out << "0";
        out << nd.time % 60 << "\"];\n";
    }
    std::vector<bool> is_leg_crosser(net.leg_arcs.size(), false);
    for (int a : net.leg_crossers) is_leg_crosser[a] = true;
    std::vector<bool> is_ground_crosser(net.ground_arcs.size(), false);
    for (int g : net.ground_crossers) is_ground_crosser[g] = true;
    for (size_t a = 0; a < net.leg_arcs.size(); ++a) {
        const auto& arc = net.leg_arcs[a];
        out << "  n" << arc.from << " -> n" << arc.to << " [label=\""
            << inst.legs[arc.leg].id << "\"" << (is_leg_crosser[a] ? ",color=red" : "")
            << "];\n";
    }
    for (size_t g = 0; g < net.ground_arcs.size(); ++g) {
        const auto& arc = net.ground_arcs[g];
        out << "  n" << arc.from << " -> n" << arc.to << " [style=dashed,color="
            << (is_ground_crosser[g] ? "red" : "gray") << "];\n";
    }
    out << "}\n";
}

}  // namespace tfacpp

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tfacpp/instance.hpp"

namespace tfacpp {

enum class EventKind { Departure, ArrivalReady };

struct EventNode {
    std::string station;
    int time = 0;  // minutes of day
    EventKind kind = EventKind::Departure;
};

struct GroundArc {
    int from = -1;  // node indices; from == to is the single-node wraparound
    int to = -1;
    bool wraparound = false;
};

struct LegArc {
    int leg = -1;   // index into Instance::legs
    int from = -1;  // departure node
    int to = -1;    // arrival-ready node
};

struct NodeAdjacency {
    std::vector<int> legs_out;    // leg-arc indices starting here
    std::vector<int> legs_in;
    std::vector<int> ground_out;  // ground-arc indices
    std::vector<int> ground_in;
};

// Cyclic representative-day network for one (month, fleet type).
struct TimeSpaceNetwork {
    std::string month;
    std::string fleet_type;
    int count_time = 180;  // default 03:00
    std::vector<EventNode> nodes;
    std::vector<LegArc> leg_arcs;
    std::vector<GroundArc> ground_arcs;
    std::vector<int> leg_crossers;     // leg-arc indices crossing the count line
    std::vector<int> ground_crossers;  // ground-arc indices crossing it

    /// Throws SolveError for an unknown node index.
    const NodeAdjacency& adjacency(int node) const;

    int arc_leg_index(int leg_arc) const { return leg_arcs[leg_arc].leg; }

    std::vector<NodeAdjacency> adj;  // filled by build_network
};

/// One departure node per leg departure, one arrival-ready node at
/// arrival + min turn time (mod 1440), merged on equal (station, time);
/// per-station cyclic ground chains with an overnight wraparound arc.
TimeSpaceNetwork build_network(const Instance& inst, const std::string& month,
                               const std::string& fleet_type, int count_time = 180);

/// True when moving forward in cyclic day-time from `from` reaches `t`
/// strictly before `to`; a zero-length span covers the whole day.
bool cyclic_crosses(int from, int to, int t);

void write_dot(const TimeSpaceNetwork& net, const Instance& inst, std::ostream& out);

}  // namespace tfacpp

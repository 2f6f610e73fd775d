#include "tfacpp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tfacpp/errors.hpp"

using ordered_json = nlohmann::ordered_json;

namespace tfacpp {

namespace {

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

double unif(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

int unif_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

void Instance::validate() {
    std::vector<std::string> errs;
    auto err = [&](const std::string& s) { errs.push_back(s); };

    if (months.empty()) err("no months");
    std::set<std::string> month_set(months.begin(), months.end());
    if (month_set.size() != months.size()) err("duplicate month ids");
    if (stations.empty()) err("no stations");
    std::set<std::string> station_set(stations.begin(), stations.end());
    if (station_set.size() != stations.size()) err("duplicate station ids");

    family_idx_.clear();
    for (size_t i = 0; i < families.size(); ++i) {
        const auto& b = families[i];
        if (!family_idx_.emplace(b.id, static_cast<int>(i)).second)
            err("duplicate family id " + b.id);
        if (b.crew_count < 0) err("family " + b.id + ": negative crew_count");
        if (b.yearly_cap_per_crew < 0) err("family " + b.id + ": negative yearly cap");
        for (const auto& m : months) {
            auto it = b.monthly_cap_per_crew.find(m);
            if (it == b.monthly_cap_per_crew.end())
                err("family " + b.id + ": monthly_cap_per_crew missing month " + m);
            else if (it->second < 0)
                err("family " + b.id + ": negative monthly cap in " + m);
        }
    }
    if (families.empty()) err("no fleet families");

    fleet_idx_.clear();
    family_of_type_.clear();
    for (size_t i = 0; i < fleet_types.size(); ++i) {
        const auto& f = fleet_types[i];
        if (!fleet_idx_.emplace(f.id, static_cast<int>(i)).second)
            err("duplicate fleet type id " + f.id);
        if (f.seats <= 0) err("fleet type " + f.id + ": seats must be positive");
        if (f.aircraft_count < 0) err("fleet type " + f.id + ": negative aircraft_count");
        if (f.min_turn_time < 0) err("fleet type " + f.id + ": negative min_turn_time");
        if (!family_idx_.count(f.family_id))
            err("fleet type " + f.id + ": unknown family " + f.family_id);
    }
    if (fleet_types.empty()) err("no fleet types");

    // Families must partition the fleet-type set.
    std::map<std::string, int> claimed;
    for (const auto& b : families) {
        for (const auto& ft : b.fleet_type_ids) {
            if (!fleet_idx_.count(ft)) {
                err("family " + b.id + ": unknown fleet type " + ft);
                continue;
            }
            claimed[ft]++;
            if (fleet_types[fleet_idx_[ft]].family_id != b.id)
                err("fleet type " + ft + ": family_id disagrees with family " + b.id);
        }
    }
    for (const auto& f : fleet_types) {
        auto it = claimed.find(f.id);
        if (it == claimed.end())
            err("fleet type " + f.id + " not listed in any family");
        else if (it->second > 1)
            err("fleet type " + f.id + " listed in multiple families");
    }

    leg_idx_.clear();
    legs_by_month_.clear();
    if (legs.empty()) err("no legs");
    for (size_t i = 0; i < legs.size(); ++i) {
        const auto& l = legs[i];
        if (!leg_idx_.emplace(l.id, static_cast<int>(i)).second)
            err("duplicate leg id " + l.id);
        if (!month_set.count(l.month)) err("leg " + l.id + ": unknown month " + l.month);
        if (!station_set.count(l.origin)) err("leg " + l.id + ": unknown station " + l.origin);
        if (!station_set.count(l.destination))
            err("leg " + l.id + ": unknown station " + l.destination);
        if (l.departure < 0 || l.departure >= 1440)
            err("leg " + l.id + ": departure outside [0,1440)");
        if (l.arrival < 0 || l.arrival >= 1440)
            err("leg " + l.id + ": arrival outside [0,1440)");
        if (l.frequency < 1) err("leg " + l.id + ": frequency must be >= 1");
        if (l.demand < 0) err("leg " + l.id + ": negative demand");
        if (l.fare < 0) err("leg " + l.id + ": negative fare");
        for (const auto& b : families) {
            auto it = l.duration_by_family.find(b.id);
            if (it == l.duration_by_family.end())
                err("leg " + l.id + ": duration_by_family missing family " + b.id);
            else if (it->second <= 0)
                err("leg " + l.id + ": nonpositive duration for family " + b.id);
        }
        legs_by_month_[l.month].push_back(static_cast<int>(i));
    }

    if (rules.crew_bases.empty()) err("crew_policy: no crew bases");
    for (const auto& s : rules.crew_bases)
        if (!station_set.count(s)) err("crew_policy: unknown crew base " + s);
    if (rules.max_pairing_days < 1 || rules.max_pairing_days > 5)
        err("crew_policy: max_pairing_days must be in [1,5]");
    if (rules.min_connect < 0) err("crew_policy: negative min_connect");
    if (rules.max_duty_legs < 1) err("crew_policy: max_duty_legs must be >= 1");
    if (crew_cost.pay_rate < 0) err("crew_policy: negative pay_rate");
    if (crew_cost.min_guarantee < 0) err("crew_policy: negative min_guarantee");

    std::set<std::pair<std::string, std::string>> tpairs;
    for (const auto& t : transition) {
        if (!family_idx_.count(t.from)) err("transition: unknown family " + t.from);
        if (!family_idx_.count(t.to)) err("transition: unknown family " + t.to);
        if (t.from == t.to) err("transition: self transition " + t.from);
        if (t.cap < 0) err("transition " + t.from + "->" + t.to + ": negative cap");
        if (t.cost < 0) err("transition " + t.from + "->" + t.to + ": negative cost");
        if (!tpairs.emplace(t.from, t.to).second)
            err("transition " + t.from + "->" + t.to + ": duplicate pair");
    }

    for (const auto& [fam, u] : uncertainty) {
        if (!family_idx_.count(fam)) err("uncertainty: unknown family " + fam);
        if (u.rho.size() != u.phi.size() || u.rho.empty())
            err("uncertainty " + fam + ": rho/phi size mismatch or empty");
        for (size_t q = 1; q < u.rho.size(); ++q)
            if (u.rho[q] <= u.rho[q - 1]) err("uncertainty " + fam + ": rho not ascending");
        double s = 0.0;
        for (double p : u.phi) {
            if (p < 0) err("uncertainty " + fam + ": negative probability");
            s += p;
        }
        if (!u.phi.empty() && std::abs(s - 1.0) > 1e-9)
            err("uncertainty " + fam + ": probabilities sum to " + std::to_string(s));
        if (!(u.epsilon > 0.0 && u.epsilon < 1.0))
            err("uncertainty " + fam + ": epsilon outside (0,1)");
    }

    if (!errs.empty()) {
        std::string joined = "instance validation failed:";
        for (const auto& e : errs) joined += "\n  - " + e;
        throw ValidationError(joined);
    }
    validated_ = true;
}

const std::vector<int>& Instance::legs_in_month(const std::string& month) const {
    static const std::vector<int> empty;
    auto it = legs_by_month_.find(month);
    return it == legs_by_month_.end() ? empty : it->second;
}

int Instance::leg_index(const std::string& id) const {
    auto it = leg_idx_.find(id);
    if (it == leg_idx_.end()) throw SolveError("unknown leg " + id);
    return it->second;
}

int Instance::fleet_index(const std::string& id) const {
    auto it = fleet_idx_.find(id);
    if (it == fleet_idx_.end()) throw SolveError("unknown fleet type " + id);
    return it->second;
}

int Instance::family_index(const std::string& id) const {
    auto it = family_idx_.find(id);
    if (it == family_idx_.end()) throw SolveError("unknown family " + id);
    return it->second;
}

const FleetFamily& Instance::family_of_type(const std::string& fleet_type_id) const {
    return families[family_index(fleet_types[fleet_index(fleet_type_id)].family_id)];
}

double Instance::leg_family_hours(const FlightLeg& l, const std::string& family_id) const {
    auto it = l.duration_by_family.find(family_id);
    if (it == l.duration_by_family.end())
        throw SolveError("leg " + l.id + ": no duration for family " + family_id);
    return l.frequency * it->second;
}

UncertaintySpec Instance::scenario_for(const std::string& family_id) const {
    auto it = uncertainty.find(family_id);
    if (it != uncertainty.end()) return it->second;
    // Default three-point distribution around the deterministic budget t_b.
    const auto& fam = families[family_index(family_id)];
    double tb = family_time_budget(fam).yearly;
    UncertaintySpec u;
    u.rho = {round3(0.85 * tb), round3(0.95 * tb), round3(tb)};
    u.phi = {0.2, 0.5, 0.3};
    u.epsilon = 0.1;
    if (tb <= 0) u.rho = {0.0, 0.001, 0.002};  // keep ascending for zero budgets
    return u;
}

TimeBudget family_time_budget(const FleetFamily& fam) {
    TimeBudget b;
    b.yearly = fam.crew_count * fam.yearly_cap_per_crew;
    for (const auto& [m, cap] : fam.monthly_cap_per_crew) b.monthly[m] = fam.crew_count * cap;
    return b;
}

double leg_profit(const FlightLeg& leg, const FleetType& f) {
    auto it = f.operating_cost.find(leg.id);
    if (it == f.operating_cost.end())
        throw SolveError("fleet type " + f.id + ": no operating cost for leg " + leg.id);
    double carried = std::min(leg.demand, static_cast<double>(f.seats));
    return leg.fare * carried * leg.frequency - it->second;
}

DemandLevel demand_level_from_string(const std::string& s) {
    if (s == "high") return DemandLevel::High;
    if (s == "mid") return DemandLevel::Mid;
    if (s == "low") return DemandLevel::Low;
    throw ParseError("unknown demand level: " + s);
}

const char* to_string(DemandLevel level) {
    switch (level) {
        case DemandLevel::High: return "high";
        case DemandLevel::Mid: return "mid";
        case DemandLevel::Low: return "low";
    }
    return "?";
}

Instance perturb_demand(const Instance& inst, DemandLevel level, std::uint64_t seed) {
    Instance out = inst;
    if (level == DemandLevel::Mid) return out;
    double lo = level == DemandLevel::High ? 1.1 : 0.8;
    double hi = level == DemandLevel::High ? 1.2 : 0.9;
    std::mt19937_64 rng(seed);
    for (auto& l : out.legs) l.demand *= unif(rng, lo, hi);
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic generator

Instance generate_synthetic(std::uint64_t seed, const SynthDims& dims) {
    if (dims.stations < 1 || dims.families < 1 || dims.fleet_types < 1 ||
        dims.legs_per_month < 1 || dims.months < 1)
        throw ValidationError("generate_synthetic: all dimensions must be >= 1");

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    Instance inst;

    for (int i = 0; i < dims.months; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "M%02d", i + 1);
        inst.months.push_back(buf);
    }
    for (int i = 0; i < dims.stations; ++i) {
        std::string s = "S";
        s += static_cast<char>('A' + i / 26);
        s += static_cast<char>('A' + i % 26);
        inst.stations.push_back(s);
    }
    const std::string base = inst.stations[0];

    // Families: the last one is the slack wide-body group that can absorb the
    // whole schedule, the others carry deliberately tight crew budgets.
    int nfam = std::min(dims.families, dims.fleet_types);
    for (int b = 0; b < nfam; ++b) {
        FleetFamily fam;
        fam.id = "FAM";
        fam.id += static_cast<char>('A' + b);
        fam.yearly_cap_per_crew = 1000.0;
        for (const auto& m : inst.months) fam.monthly_cap_per_crew[m] = 100.0;
        inst.families.push_back(fam);
    }

    // Fleet types spread round-robin across families.
    for (int t = 0; t < dims.fleet_types; ++t) {
        int b = t % nfam;
        FleetType f;
        f.id = inst.families[b].id + "-" + std::to_string(t / nfam + 1);
        f.family_id = inst.families[b].id;
        bool wide = (b == nfam - 1 && nfam > 1);
        f.seats = wide ? unif_int(rng, 260, 400) : unif_int(rng, 120, 190);
        f.min_turn_time = unif_int(rng, 35, 50);
        inst.families[b].fleet_type_ids.push_back(f.id);
        inst.fleet_types.push_back(f);
    }

    // Legs: closed daily rotations from the base, 2-leg out-and-backs with a
    // 3-leg triangle when the monthly count is odd.
    int leg_serial = 0;
    for (int mi = 0; mi < dims.months; ++mi) {
        const std::string& month = inst.months[mi];
        int frequency = unif_int(rng, 28, 30);
        int remaining = dims.legs_per_month;
        if (remaining == 1) remaining = 2;  // one leg cannot close a rotation
        int loop_no = 0;
        while (remaining > 0 && dims.stations >= 2) {
            int size = (remaining % 2 == 1 && remaining >= 3 && dims.stations >= 3) ? 3 : 2;

            std::vector<std::string> route;
            route.push_back(base);
            int x = 1 + (loop_no % (dims.stations - 1));
            route.push_back(inst.stations[x]);
            if (size == 3) {
                int y = 1 + ((loop_no + 1) % (dims.stations - 1));
                if (y == x) y = 1 + ((loop_no + 2) % (dims.stations - 1));
                if (y == x) size = 2; else route.push_back(inst.stations[y]);
            }
            route.push_back(base);

            int t = unif_int(rng, 330, 500);  // first departure 05:30-08:20
            for (size_t hop = 0; hop + 1 < route.size(); ++hop) {
                FlightLeg l;
                l.id = month + "-L" + std::to_string(++leg_serial);
                l.month = month;
                l.origin = route[hop];
                l.destination = route[hop + 1];
                int dur = unif_int(rng, 60, 150);
                l.departure = t % 1440;
                l.arrival = (t + dur) % 1440;
                l.frequency = frequency;
                for (const auto& fam : inst.families) {
                    double factor = unif(rng, 0.95, 1.05);
                    l.duration_by_family[fam.id] = std::max(0.05, round3(dur / 60.0 * factor));
                }
                l.demand = unif_int(rng, 70, 180);
                l.fare = unif_int(rng, 500, 2000);
                inst.legs.push_back(l);
                t += dur + unif_int(rng, 50, 90);
            }
            remaining -= static_cast<int>(route.size()) - 1;
            ++loop_no;
        }
    }

    // Operating costs chosen so every (leg, fleet type) pair stays profitable.
    for (auto& f : inst.fleet_types) {
        bool wide = f.seats >= 230;
        double hourly = wide ? unif(rng, 4000, 6000) : unif(rng, 2000, 3000);
        for (const auto& l : inst.legs) {
            double hours = l.duration_by_family.at(f.family_id);
            f.operating_cost[l.id] = std::floor(hours * hourly + unif(rng, 0, 500));
        }
    }

    // Crew sizing: tight for the leading families; the last family can absorb
    // the whole schedule alone, both yearly and in the heaviest month.
    std::vector<double> yearly_hours(nfam, 0.0);
    std::vector<double> peak_month_hours(nfam, 0.0);
    for (int b = 0; b < nfam; ++b) {
        for (const auto& m : inst.months) {
            double month_hours = 0.0;
            for (const auto& l : inst.legs)
                if (l.month == m)
                    month_hours += l.frequency * l.duration_by_family.at(inst.families[b].id);
            yearly_hours[b] += month_hours;
            peak_month_hours[b] = std::max(peak_month_hours[b], month_hours);
        }
    }
    for (int b = 0; b < nfam; ++b) {
        auto& fam = inst.families[b];
        if (b == nfam - 1) {
            int for_year = static_cast<int>(std::ceil(2.0 * yearly_hours[b] / 1000.0));
            int for_peak = static_cast<int>(std::ceil(1.5 * peak_month_hours[b] / 100.0));
            fam.crew_count = std::max(for_year, for_peak) + 2;
        } else {
            double share = unif(rng, 0.5, 0.85) / std::max(1, nfam - 1);
            fam.crew_count = std::max(1, static_cast<int>(yearly_hours[b] * share / 1000.0));
        }
    }

    // Aircraft counts: the slack family can in principle fly everything.
    int loops_per_month = (dims.legs_per_month + 1) / 2;
    for (auto& f : inst.fleet_types) {
        bool slack_family = f.family_id == inst.families[nfam - 1].id;
        f.aircraft_count = slack_family ? 4 * dims.legs_per_month
                                        : unif_int(rng, 1, loops_per_month + 1);
    }

    inst.rules.crew_bases = {base};
    inst.rules.max_duty_legs = 4;
    inst.rules.min_connect = 45;
    inst.rules.max_duty_span = 14.0;
    inst.rules.max_pairing_days = 4;
    inst.rules.max_duty_flight_hours = 10.0;
    inst.crew_cost.pay_rate = unif_int(rng, 300, 600);
    inst.crew_cost.min_guarantee = unif_int(rng, 800, 1500);

    for (int b1 = 0; b1 < nfam; ++b1) {
        for (int b2 = 0; b2 < nfam; ++b2) {
            if (b1 == b2) continue;
            TransitionArc t;
            t.from = inst.families[b1].id;
            t.to = inst.families[b2].id;
            t.cap = unif_int(rng, 0, 3);
            t.cost = unif_int(rng, 10000, 100000);
            inst.transition.push_back(t);
        }
    }

    for (const auto& fam : inst.families) {
        double tb = family_time_budget(fam).yearly;
        UncertaintySpec u;
        u.rho = {round3(0.85 * tb), round3(0.95 * tb), round3(std::max(tb, 0.002))};
        if (u.rho[0] >= u.rho[1] || u.rho[1] >= u.rho[2]) u.rho = {0.0, 0.001, 0.002};
        u.phi = {0.2, 0.5, 0.3};
        u.epsilon = 0.1;
        inst.uncertainty[fam.id] = u;
    }

    if (dims.stations >= 2) inst.validate();
    return inst;
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

ordered_json instance_to_json(const Instance& inst) {
    ordered_json j;
    j["months"] = inst.months;
    j["stations"] = inst.stations;

    ordered_json fts = ordered_json::array();
    for (const auto& f : inst.fleet_types) {
        ordered_json e;
        e["id"] = f.id;
        e["family_id"] = f.family_id;
        e["seats"] = f.seats;
        e["aircraft_count"] = f.aircraft_count;
        e["min_turn_time"] = f.min_turn_time;
        ordered_json oc;
        for (const auto& [leg, c] : f.operating_cost) oc[leg] = c;
        e["operating_cost"] = oc;
        fts.push_back(e);
    }
    j["fleet_types"] = fts;

    ordered_json fams = ordered_json::array();
    for (const auto& b : inst.families) {
        ordered_json e;
        e["id"] = b.id;
        e["fleet_type_ids"] = b.fleet_type_ids;
        e["crew_count"] = b.crew_count;
        ordered_json mc;
        for (const auto& [m, cap] : b.monthly_cap_per_crew) mc[m] = round3(cap);
        e["monthly_cap_per_crew"] = mc;
        e["yearly_cap_per_crew"] = round3(b.yearly_cap_per_crew);
        fams.push_back(e);
    }
    j["fleet_families"] = fams;

    ordered_json legs = ordered_json::array();
    for (const auto& l : inst.legs) {
        ordered_json e;
        e["id"] = l.id;
        e["month"] = l.month;
        e["origin"] = l.origin;
        e["destination"] = l.destination;
        e["departure"] = l.departure;
        e["arrival"] = l.arrival;
        e["frequency"] = l.frequency;
        ordered_json db;
        for (const auto& [fam, h] : l.duration_by_family) db[fam] = round3(h);
        e["duration_by_family"] = db;
        e["demand"] = l.demand;
        e["fare"] = l.fare;
        legs.push_back(e);
    }
    j["legs"] = legs;

    ordered_json cp;
    cp["crew_bases"] = inst.rules.crew_bases;
    cp["max_duty_legs"] = inst.rules.max_duty_legs;
    cp["min_connect"] = inst.rules.min_connect;
    cp["max_duty_span"] = round3(inst.rules.max_duty_span);
    cp["max_pairing_days"] = inst.rules.max_pairing_days;
    cp["max_duty_flight_hours"] = round3(inst.rules.max_duty_flight_hours);
    cp["pay_rate"] = inst.crew_cost.pay_rate;
    cp["min_guarantee"] = inst.crew_cost.min_guarantee;
    j["crew_policy"] = cp;

    ordered_json tr = ordered_json::array();
    for (const auto& t : inst.transition) {
        ordered_json e;
        e["from"] = t.from;
        e["to"] = t.to;
        e["cost"] = t.cost;
        e["cap"] = t.cap;
        tr.push_back(e);
    }
    j["transition"] = tr;

    ordered_json un;
    for (const auto& [fam, u] : inst.uncertainty) {
        ordered_json e;
        ordered_json rho = ordered_json::array();
        for (double r : u.rho) rho.push_back(round3(r));
        e["rho"] = rho;
        e["phi"] = u.phi;
        e["epsilon"] = u.epsilon;
        un[fam] = e;
    }
    j["uncertainty"] = un;
    return j;
}

void expect_money(double v, const std::string& what, std::vector<std::string>& errs) {
    if (!is_integral(v)) errs.push_back(what + " must be integer minor units");
}

Instance instance_from_json(const ordered_json& j) {
    Instance inst;
    std::vector<std::string> money_errs;
    try {
        j.at("months").get_to(inst.months);
        j.at("stations").get_to(inst.stations);
        for (const auto& e : j.at("fleet_types")) {
            FleetType f;
            e.at("id").get_to(f.id);
            e.at("family_id").get_to(f.family_id);
            e.at("seats").get_to(f.seats);
            e.at("aircraft_count").get_to(f.aircraft_count);
            f.min_turn_time = e.value("min_turn_time", 45);
            if (e.contains("operating_cost"))
                for (auto it = e["operating_cost"].begin(); it != e["operating_cost"].end(); ++it) {
                    double c = it.value().get<double>();
                    expect_money(c, "fleet type " + f.id + " operating_cost[" + it.key() + "]",
                                 money_errs);
                    f.operating_cost[it.key()] = c;
                }
            inst.fleet_types.push_back(std::move(f));
        }
        for (const auto& e : j.at("fleet_families")) {
            FleetFamily b;
            e.at("id").get_to(b.id);
            e.at("fleet_type_ids").get_to(b.fleet_type_ids);
            e.at("crew_count").get_to(b.crew_count);
            for (auto it = e.at("monthly_cap_per_crew").begin();
                 it != e.at("monthly_cap_per_crew").end(); ++it)
                b.monthly_cap_per_crew[it.key()] = it.value().get<double>();
            e.at("yearly_cap_per_crew").get_to(b.yearly_cap_per_crew);
            inst.families.push_back(std::move(b));
        }
        for (const auto& e : j.at("legs")) {
            FlightLeg l;
            e.at("id").get_to(l.id);
            e.at("month").get_to(l.month);
            e.at("origin").get_to(l.origin);
            e.at("destination").get_to(l.destination);
            e.at("departure").get_to(l.departure);
            e.at("arrival").get_to(l.arrival);
            e.at("frequency").get_to(l.frequency);
            for (auto it = e.at("duration_by_family").begin();
                 it != e.at("duration_by_family").end(); ++it)
                l.duration_by_family[it.key()] = it.value().get<double>();
            e.at("demand").get_to(l.demand);
            l.fare = e.at("fare").get<double>();
            expect_money(l.fare, "leg " + l.id + " fare", money_errs);
            inst.legs.push_back(std::move(l));
        }
        const auto& cp = j.at("crew_policy");
        cp.at("crew_bases").get_to(inst.rules.crew_bases);
        inst.rules.max_duty_legs = cp.value("max_duty_legs", 4);
        inst.rules.min_connect = cp.value("min_connect", 45);
        inst.rules.max_duty_span = cp.value("max_duty_span", 12.0);
        inst.rules.max_pairing_days = cp.value("max_pairing_days", 4);
        inst.rules.max_duty_flight_hours = cp.value("max_duty_flight_hours", 8.0);
        inst.crew_cost.pay_rate = cp.value("pay_rate", 400.0);
        inst.crew_cost.min_guarantee = cp.value("min_guarantee", 1000.0);
        expect_money(inst.crew_cost.pay_rate, "crew_policy pay_rate", money_errs);
        expect_money(inst.crew_cost.min_guarantee, "crew_policy min_guarantee", money_errs);
        if (j.contains("transition"))
            for (const auto& e : j["transition"]) {
                TransitionArc t;
                e.at("from").get_to(t.from);
                e.at("to").get_to(t.to);
                t.cost = e.at("cost").get<double>();
                e.at("cap").get_to(t.cap);
                expect_money(t.cost, "transition " + t.from + "->" + t.to + " cost", money_errs);
                inst.transition.push_back(std::move(t));
            }
        if (j.contains("uncertainty"))
            for (auto it = j["uncertainty"].begin(); it != j["uncertainty"].end(); ++it) {
                UncertaintySpec u;
                it.value().at("rho").get_to(u.rho);
                it.value().at("phi").get_to(u.phi);
                it.value().at("epsilon").get_to(u.epsilon);
                inst.uncertainty[it.key()] = std::move(u);
            }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("instance parse error: ") + e.what());
    }
    if (!money_errs.empty()) {
        std::string joined = "instance validation failed:";
        for (const auto& e : money_errs) joined += "\n  - " + e;
        throw ValidationError(joined);
    }
    inst.validate();
    return inst;
}

}  // namespace

std::string instance_to_json_text(const Instance& inst) {
    return instance_to_json(inst).dump(2) + "\n";
}

Instance instance_from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("instance parse error: ") + e.what());
    }
    return instance_from_json(j);
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return instance_from_json_text(buf.str());
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write instance file: " + path);
    out << instance_to_json_text(inst);
}

}  // namespace tfacpp

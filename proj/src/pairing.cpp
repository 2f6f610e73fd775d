#include "tfacpp/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tfacpp/errors.hpp"

namespace tfacpp {

bool Pairing::covers(int leg_idx) const {
    return std::find(legs.begin(), legs.end(), leg_idx) != legs.end();
}

double pairing_cost(const Pairing& p, const CrewCostModel& cost_model) {
    return std::max(cost_model.pay_rate * p.flight_time, cost_model.min_guarantee * p.days);
}

namespace {

struct DutyState {
    int day = 1;              // calendar day within the pairing, 1-based
    int duty_legs = 0;        // legs flown in the current day
    int duty_start = 0;       // first departure of the current day, minutes
    double duty_hours = 0.0;  // block hours flown in the current day
};

struct Enumerator {
    const Instance& inst;
    const std::string& family;
    const PairingRules& rules;
    const std::vector<int>& candidates;  // leg indices, schedule order
    std::size_t cap;
    std::string base;
    std::vector<Pairing> out;
    std::vector<int> seq;
    std::vector<bool> used;

    void emit(const std::string& month, int days) {
        Pairing p;
        p.family_id = family;
        p.month = month;
        p.legs = seq;
        p.days = days;
        p.flight_time = 0.0;
        for (int li : p.legs)
            p.flight_time += inst.leg_family_hours(inst.legs[li], family);
        out.push_back(std::move(p));
        if (out.size() > cap)
            throw SolveError("pairing enumeration exceeded cap of " + std::to_string(cap));
    }

    // Duty state after appending `leg`, or nullopt when no legal connection
    // exists. A same-day continuation is preferred; otherwise the crew rests
    // overnight and opens a fresh duty.
    std::optional<DutyState> advance(const DutyState& st, const FlightLeg& prev,
                                     const FlightLeg& leg) const {
        if (leg.arrival < leg.departure) return std::nullopt;  // red-eyes stay uncovered
        double block = leg.duration_by_family.at(family);
        if (leg.departure >= prev.arrival + rules.min_connect) {
            DutyState nxt = st;
            nxt.duty_legs += 1;
            nxt.duty_hours += block;
            double span_h = (leg.arrival - nxt.duty_start) / 60.0;
            if (nxt.duty_legs <= rules.max_duty_legs &&
                nxt.duty_hours <= rules.max_duty_flight_hours + 1e-9 &&
                span_h <= rules.max_duty_span + 1e-9)
                return nxt;
        }
        DutyState nxt;
        nxt.day = st.day + 1;
        nxt.duty_legs = 1;
        nxt.duty_start = leg.departure;
        nxt.duty_hours = block;
        if (nxt.day > rules.max_pairing_days) return std::nullopt;
        if (block > rules.max_duty_flight_hours + 1e-9) return std::nullopt;
        return nxt;
    }

    void dfs(const std::string& month, const DutyState& st) {
        const FlightLeg& cur = inst.legs[seq.back()];
        if (cur.destination == base) emit(month, st.day);
        for (int li : candidates) {
            if (used[li]) continue;
            const FlightLeg& leg = inst.legs[li];
            if (leg.origin != cur.destination) continue;
            auto nxt = advance(st, cur, leg);
            if (!nxt) continue;
            used[li] = true;
            seq.push_back(li);
            dfs(month, *nxt);
            seq.pop_back();
            used[li] = false;
        }
    }
};

}  // namespace

std::vector<Pairing> enumerate_pairings(const Instance& inst, const std::string& month,
                                        const std::string& family, const PairingRules& rules,
                                        const std::optional<std::set<int>>& leg_subset,
                                        std::size_t cap) {
    std::vector<int> candidates;
    for (int li : inst.legs_in_month(month)) {
        if (leg_subset && !leg_subset->count(li)) continue;
        candidates.push_back(li);
    }

    std::vector<Pairing> all;
    for (const auto& b : rules.crew_bases) {
        Enumerator en{inst,       family, rules, candidates,
                      cap,        b,      {},    {},
                      std::vector<bool>(inst.legs.size(), false)};
        for (int li : candidates) {
            const FlightLeg& leg = inst.legs[li];
            if (leg.origin != b) continue;
            if (leg.arrival < leg.departure) continue;
            double block = leg.duration_by_family.at(family);
            if (block > rules.max_duty_flight_hours + 1e-9) continue;
            DutyState st;
            st.day = 1;
            st.duty_legs = 1;
            st.duty_start = leg.departure;
            st.duty_hours = block;
            en.used[li] = true;
            en.seq.push_back(li);
            en.dfs(month, st);
            en.seq.pop_back();
            en.used[li] = false;
        }
        all.insert(all.end(), en.out.begin(), en.out.end());
        if (all.size() > cap)
            throw SolveError("pairing enumeration exceeded cap of " + std::to_string(cap));
    }

    int serial = 0;
    for (auto& p : all) {
        p.cost = pairing_cost(p, inst.crew_cost);
        p.id = month + "|" + family + "|P" + std::to_string(++serial);
    }
    return all;
}

void ensure_complete_recourse(std::vector<Pairing>& pool, const Instance& inst,
                              const std::string& month, const std::string& family,
                              double artificial_cost) {
    std::set<int> covered;
    for (const auto& p : pool)
        for (int li : p.legs) covered.insert(li);
    for (int li : inst.legs_in_month(month)) {
        if (covered.count(li)) continue;
        Pairing p;
        p.id = month + "|" + family + "|ART|" + inst.legs[li].id;
        p.family_id = family;
        p.month = month;
        p.legs = {li};
        p.days = 1;
        p.flight_time = inst.leg_family_hours(inst.legs[li], family);
        p.cost = artificial_cost;
        p.artificial = true;
        pool.push_back(std::move(p));
    }
}

CppSolution solve_cpp(const std::vector<Pairing>& pool, const std::vector<int>& legs_to_cover,
                      bool relax) {
    CppSolution sol;
    if (legs_to_cover.empty()) {
        sol.status = SolveStatus::Optimal;
        sol.objective = 0.0;
        sol.selection.assign(pool.size(), 0.0);
        return sol;
    }
    LinearModel m;
    m.sense = ObjSense::Minimize;
    for (size_t p = 0; p < pool.size(); ++p) {
        double ub = relax ? kInf : 1.0;  // cover rows already bound z in the LP
        m.add_var(pool[p].id, 0.0, ub, relax ? VarKind::Continuous : VarKind::Binary,
                  pool[p].cost);
    }
    std::map<int, int> row_of;
    for (int li : legs_to_cover) {
        if (row_of.count(li)) continue;
        row_of[li] = m.add_row("cover_" + std::to_string(li), RowSense::EQ, 1.0);
    }
    for (size_t p = 0; p < pool.size(); ++p)
        for (int li : pool[p].legs) {
            auto it = row_of.find(li);
            if (it != row_of.end()) m.add_coeff(it->second, static_cast<int>(p), 1.0);
        }

    SolveResult res = relax ? solve_lp(m) : solve_mip(m);
    sol.status = res.status;
    if (res.status != SolveStatus::Optimal) return sol;
    sol.objective = res.objective;
    sol.selection = res.primal;
    if (relax)
        for (const auto& [li, row] : row_of) sol.duals[li] = res.duals[row];
    return sol;
}

std::string pool_to_json_text(const std::vector<Pairing>& pool, const Instance& inst) {
    // Leg ids, not indices, so pools survive instance re-serialization.
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : pool) {
        nlohmann::ordered_json e;
        e["id"] = p.id;
        e["family_id"] = p.family_id;
        e["month"] = p.month;
        auto leg_ids = nlohmann::ordered_json::array();
        for (int li : p.legs) leg_ids.push_back(inst.legs[li].id);
        e["legs"] = leg_ids;
        e["days"] = p.days;
        e["cost"] = p.cost;
        e["flight_time"] = p.flight_time;
        e["artificial"] = p.artificial;
        arr.push_back(e);
    }
    return arr.dump(2) + "\n";
}

std::vector<Pairing> pool_from_json_text(const std::string& text, const Instance& inst) {
    std::vector<Pairing> pool;
    try {
        auto arr = nlohmann::ordered_json::parse(text);
        for (const auto& e : arr) {
            Pairing p;
            e.at("id").get_to(p.id);
            e.at("family_id").get_to(p.family_id);
            e.at("month").get_to(p.month);
            for (const auto& leg_id : e.at("legs"))
                p.legs.push_back(inst.leg_index(leg_id.get<std::string>()));
            e.at("days").get_to(p.days);
            e.at("cost").get_to(p.cost);
            e.at("flight_time").get_to(p.flight_time);
            p.artificial = e.value("artificial", false);
            pool.push_back(std::move(p));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("pairing pool parse error: ") + ex.what());
    }
    return pool;
}

void save_pool(const std::vector<Pairing>& pool, const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write pairing pool: " + path);
    out << pool_to_json_text(pool, inst);
}

std::vector<Pairing> load_pool(const std::string& path, const Instance& inst) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open pairing pool: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return pool_from_json_text(buf.str(), inst);
}

}  // namespace tfacpp

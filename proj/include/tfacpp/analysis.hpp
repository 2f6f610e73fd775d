#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tfacpp/models.hpp"

namespace tfacpp {

struct MarginalProfitReport {
    struct CrewEntry {
        double dual = 0.0;             // beta_b, money per crew hour
        double yearly_marginal = 0.0;  // beta_b * per-crew yearly cap
    };
    struct AircraftEntry {
        std::map<std::string, double> monthly;  // month -> gamma_f^m
        double yearly = 0.0;                    // sum over months
    };
    std::map<std::string, CrewEntry> crew;          // family id
    std::map<std::string, AircraftEntry> aircraft;  // fleet type id
};

/// Scales LP duals to per-crew-year and per-aircraft-year marginal profits.
/// Throws SolveError when the solution carries no duals (MIP-only solve).
MarginalProfitReport marginal_profits(const Solution& sol, const Instance& inst);

enum class Quadrant { I, II, III, IV };
const char* to_string(Quadrant q);

struct QuadrantGrouping {
    double gamma0 = 0.0;
    double beta0 = 0.0;
    // fleet type -> (gamma_f, beta of its family, quadrant)
    struct Entry {
        std::string family;
        double gamma = 0.0;
        double beta = 0.0;
        Quadrant quadrant = Quadrant::III;
    };
    std::map<std::string, Entry> assignment;
};

/// Quadrants split at the thresholds; boundaries count as the high side.
QuadrantGrouping quadrant_grouping(const MarginalProfitReport& report, const Instance& inst,
                                   double gamma0, double beta0);

struct EamResult {
    double profit = 0.0;  // sum of r*x over months, crew surrogates excluded
    std::map<std::string, double> month_objective;  // full pricing LP objective
    std::map<std::pair<std::string, std::string>, double> usage;  // (month, family)
    std::map<std::string, double> monthly_cap_per_crew;  // family -> yearly cap / 12
};

/// Equal-allocation baseline: each month solved with per-crew monthly caps of
/// yearly_cap/12 and zero yearly duals; profit counts revenue terms only.
EamResult eam_baseline(const Instance& inst, const NetworkSet& nets,
                       const std::vector<BendersCut>& cuts);

struct AllocationReport {
    struct MonthRow {
        std::string month, family;
        double used_hours = 0.0;
        double per_crew = 0.0;
        double cap_per_crew = 0.0;
    };
    struct FamilyRow {
        std::string family;
        double yearly_used = 0.0;
        double yearly_per_crew = 0.0;
        double mon_max = 0.0;  // per-crew monthly usage extremes
        double mon_min = 0.0;
        double diff = 0.0;
    };
    std::vector<MonthRow> months;
    std::vector<FamilyRow> families;
};

AllocationReport allocation_report(const Solution& sol, const Instance& inst);

void write_marginal_csv(const MarginalProfitReport& report, const Instance& inst,
                        std::ostream& out);
void write_quadrant_csv(const QuadrantGrouping& grouping, std::ostream& out);
void write_allocation_csv(const AllocationReport& report, std::ostream& out);
void write_eam_comparison_csv(const EamResult& eam, double cgmp_profit, std::ostream& out);

}  // namespace tfacpp

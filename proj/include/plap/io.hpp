#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "json.hpp"

#include "plap/bubble.hpp"
#include "plap/energy.hpp"
#include "plap/radial.hpp"
#include "plap/regions.hpp"

namespace plap {

using Json = nlohmann::json;

/// Plain record {n, p, lambda, center[]}.
Json to_json(const Bubble& bubble);
Bubble bubble_from_json(const Json& j);

Json to_json(const ClassificationOutcome& outcome);
Json to_json(const GrowthFit& fit);

/// {n, p, u0, tol, termination}
Json radial_header(const RadialSolution& sol);

/// %.17g formatting for machine-readable tables.
std::string format_number(double x);
/// 9 significant digits for human-readable text.
std::string format_human(double x);

/// Header "R,kinetic,potential,total" then one row per entry.
void write_energy_csv(std::ostream& os, std::span<const AnnulusEnergy> table);
/// Header "r,u,du,flux".
void write_radial_csv(std::ostream& os, const RadialSolution& sol);
/// Header "n,p,alpha,case_id,threshold,margin".
void write_raster_csv(std::ostream& os, std::span<const RasterCell> cells);

}  // namespace plap

#pragma once

// Equilibria of a two-player private-type trading game under distribution
// bands: value functionals, best responses, equilibrium solvers, welfare
// formulas, and the Monte Carlo / brute-force verification layer.

#include "cursedknight/band.hpp"
#include "cursedknight/band_json.hpp"
#include "cursedknight/best_response.hpp"
#include "cursedknight/cdf.hpp"
#include "cursedknight/equilibria.hpp"
#include "cursedknight/oracle.hpp"
#include "cursedknight/rng.hpp"
#include "cursedknight/root_finding.hpp"
#include "cursedknight/strategy.hpp"
#include "cursedknight/valuation.hpp"
#include "cursedknight/welfare.hpp"

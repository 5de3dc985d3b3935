#pragma once

#include "simplex_lab/core.hpp"
#include "simplex_lab/geometry.hpp"
#include "simplex_lab/catalog.hpp"
#include "simplex_lab/search.hpp"
#include "simplex_lab/verdict.hpp"
#include "simplex_lab/analysis.hpp"
#include "simplex_lab/properties.hpp"
#include "simplex_lab/constructions.hpp"

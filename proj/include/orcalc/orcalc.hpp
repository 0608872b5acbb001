#pragma once

#include "orcalc/numlin.hpp"
#include "orcalc/ranges.hpp"
#include "orcalc/proj.hpp"
#include "orcalc/blocks.hpp"
#include "orcalc/weights.hpp"
#include "orcalc/schur.hpp"
#include "orcalc/lab.hpp"

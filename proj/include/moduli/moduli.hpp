#pragma once

#include "moduli/core.hpp"
#include "moduli/divisor_algebra.hpp"
#include "moduli/exact_rank.hpp"
#include "moduli/fcurve.hpp"
#include "moduli/git_stability.hpp"
#include "moduli/hassett_trees.hpp"
#include "moduli/picard.hpp"
#include "moduli/tower.hpp"

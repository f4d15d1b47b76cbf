#pragma once

#include "dtp/arith.hpp"
#include "dtp/linalg.hpp"
#include "dtp/exp_algebra.hpp"
#include "dtp/toric_reduce.hpp"
#include "dtp/quasipoly.hpp"
#include "dtp/engines.hpp"
#include "dtp/problem.hpp"
#include "dtp/render.hpp"

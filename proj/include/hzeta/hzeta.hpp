#pragma once

#include "hzeta/analytics.hpp"
#include "hzeta/cache.hpp"
#include "hzeta/dirichlet.hpp"
#include "hzeta/enumeration.hpp"
#include "hzeta/errors.hpp"
#include "hzeta/lattice.hpp"
#include "hzeta/numtheory.hpp"
#include "hzeta/squareclass.hpp"

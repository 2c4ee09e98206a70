#pragma once

#include "lgvar/errors.hpp"
#include "lgvar/exact_sum.hpp"
#include "lgvar/fixtures.hpp"
#include "lgvar/functions.hpp"
#include "lgvar/geometry.hpp"
#include "lgvar/graph.hpp"
#include "lgvar/homeo.hpp"
#include "lgvar/rational.hpp"
#include "lgvar/transport.hpp"
#include "lgvar/variation.hpp"

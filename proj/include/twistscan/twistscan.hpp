#pragma once

#include "twistscan/ap_table.hpp"
#include "twistscan/curve.hpp"
#include "twistscan/errors.hpp"
#include "twistscan/factor.hpp"
#include "twistscan/families.hpp"
#include "twistscan/heights.hpp"
#include "twistscan/heuristics.hpp"
#include "twistscan/minimal.hpp"
#include "twistscan/modp.hpp"
#include "twistscan/numeric.hpp"
#include "twistscan/polyq.hpp"
#include "twistscan/primes.hpp"
#include "twistscan/ranklb.hpp"
#include "twistscan/rational.hpp"
#include "twistscan/report.hpp"
#include "twistscan/scan.hpp"

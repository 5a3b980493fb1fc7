#pragma once

#include "arith.hpp"
#include "brocard.hpp"
#include "interval.hpp"
#include "laws.hpp"
#include "padic.hpp"
#include "sequence.hpp"
#include "valuation.hpp"

#pragma once

#include "tso/benchmarks.hpp"
#include "tso/core.hpp"
#include "tso/harness.hpp"
#include "tso/optimizer.hpp"
#include "tso/random.hpp"
#include "tso/trochoid.hpp"

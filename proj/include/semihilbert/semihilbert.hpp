#pragma once

#include "semihilbert/core.hpp"
#include "semihilbert/geometry.hpp"
#include "semihilbert/operators.hpp"
#include "semihilbert/weight.hpp"

#pragma once

#include "consensus/core_rules.hpp"
#include "consensus/error.hpp"
#include "consensus/preference.hpp"
#include "consensus/rational.hpp"
#include "consensus/sequential.hpp"
#include "consensus/tabulation.hpp"
#include "consensus/uncertainty.hpp"

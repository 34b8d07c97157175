#pragma once

#include "vtlscuc/builder.hpp"
#include "vtlscuc/case_model.hpp"
#include "vtlscuc/io.hpp"
#include "vtlscuc/metrics.hpp"
#include "vtlscuc/milp.hpp"
#include "vtlscuc/runner.hpp"
#include "vtlscuc/scenario.hpp"
#include "vtlscuc/solver.hpp"

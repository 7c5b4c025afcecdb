#pragma once

#include "shoals/cost_model.hpp"
#include "shoals/estimators.hpp"
#include "shoals/fixtures.hpp"
#include "shoals/ledger.hpp"
#include "shoals/optimizers.hpp"
#include "shoals/pauli.hpp"
#include "shoals/problem.hpp"
#include "shoals/quantiles.hpp"
#include "shoals/random.hpp"
#include "shoals/statevector.hpp"

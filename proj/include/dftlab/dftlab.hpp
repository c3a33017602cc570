#pragma once

#include "dftlab/config.hpp"
#include "dftlab/csv.hpp"
#include "dftlab/diagnostics.hpp"
#include "dftlab/distributions.hpp"
#include "dftlab/monte_carlo.hpp"
#include "dftlab/oracle.hpp"
#include "dftlab/parallel.hpp"
#include "dftlab/runner.hpp"
#include "dftlab/sequence_engine.hpp"

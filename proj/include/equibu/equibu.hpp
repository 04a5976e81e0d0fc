// Everything except the command-line layer (equibu/cli.hpp).
#pragma once

#include "equibu/complexes.hpp"
#include "equibu/core.hpp"
#include "equibu/cover.hpp"
#include "equibu/fan.hpp"
#include "equibu/ham_sandwich.hpp"
#include "equibu/io.hpp"
#include "equibu/kkm.hpp"
#include "equibu/matrix_bu.hpp"
#include "equibu/oracles.hpp"
#include "equibu/refine.hpp"
#include "equibu/report.hpp"
#include "equibu/sets.hpp"

#pragma once

#include "error.hpp"
#include "rng.hpp"
#include "finset.hpp"
#include "fincat.hpp"
#include "span.hpp"
#include "poly_set.hpp"
#include "rel.hpp"
#include "mod.hpp"
#include "io.hpp"
#include "random.hpp"
#include "check.hpp"
#include "cli.hpp"

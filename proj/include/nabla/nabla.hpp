#pragma once

#include "errors.hpp"
#include "simplex.hpp"
#include "complex.hpp"
#include "simplicial_map.hpp"
#include "poset.hpp"
#include "resolution.hpp"
#include "grayson.hpp"
#include "collapse.hpp"
#include "smith.hpp"
#include "homology.hpp"
#include "towers.hpp"
#include "io.hpp"
#include "generators.hpp"

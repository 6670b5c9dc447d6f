#pragma once

#include "qapdist/scalar.hpp"
#include "qapdist/permutation.hpp"
#include "qapdist/random.hpp"
#include "qapdist/counting.hpp"
#include "qapdist/enumerate.hpp"
#include "qapdist/matrix.hpp"
#include "qapdist/instance.hpp"
#include "qapdist/isotypic.hpp"
#include "qapdist/cone.hpp"
#include "qapdist/analysis.hpp"
#include "qapdist/io.hpp"

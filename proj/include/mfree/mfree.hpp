#pragma once

#include "mfree/assembly.hpp"
#include "mfree/experiments.hpp"
#include "mfree/fill.hpp"
#include "mfree/geometry.hpp"
#include "mfree/kdtree.hpp"
#include "mfree/monomials.hpp"
#include "mfree/nodeset.hpp"
#include "mfree/operators.hpp"
#include "mfree/phs.hpp"
#include "mfree/problems.hpp"
#include "mfree/rbffd.hpp"
#include "mfree/shapes.hpp"
#include "mfree/solver.hpp"
#include "mfree/stencil.hpp"
#include "mfree/wls.hpp"

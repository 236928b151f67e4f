#pragma once

#include "genlab/error.hpp"
#include "genlab/element_set.hpp"
#include "genlab/poset.hpp"
#include "genlab/boolean_algebra.hpp"
#include "genlab/bool_expr.hpp"
#include "genlab/quantum.hpp"
#include "genlab/prop_system.hpp"
#include "genlab/generic.hpp"
#include "genlab/forcing.hpp"

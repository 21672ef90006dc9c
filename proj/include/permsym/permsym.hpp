#pragma once

#include "permsym/rational.hpp"
#include "permsym/sparse_vector.hpp"
#include "permsym/symspace.hpp"
#include "permsym/damping.hpp"
#include "permsym/surd.hpp"
#include "permsym/linalg.hpp"
#include "permsym/state_kind.hpp"
#include "permsym/perturb.hpp"
#include "permsym/states.hpp"
#include "permsym/exact.hpp"
#include "permsym/closed_form.hpp"
#include "permsym/oracle.hpp"
#include "permsym/curves.hpp"
#include "permsym/parallel.hpp"
#include "permsym/verify.hpp"

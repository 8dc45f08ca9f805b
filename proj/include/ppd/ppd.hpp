#pragma once

#include "ppd/analytic.hpp"
#include "ppd/config.hpp"
#include "ppd/dynamics.hpp"
#include "ppd/errors.hpp"
#include "ppd/io.hpp"
#include "ppd/liouvillian.hpp"
#include "ppd/observables.hpp"
#include "ppd/params.hpp"
#include "ppd/runner.hpp"
#include "ppd/state.hpp"

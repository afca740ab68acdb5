#pragma once

// Umbrella header for the jcdicke library.

#include "jcdicke/errors.hpp"
#include "jcdicke/exact_diag.hpp"
#include "jcdicke/meanfield.hpp"
#include "jcdicke/model.hpp"
#include "jcdicke/phases.hpp"
#include "jcdicke/sweep.hpp"
#include "jcdicke/validate.hpp"

#pragma once

// Umbrella header: fuzzy ontology generation from numeric tables via
// fuzzy c-means, alpha-cut conceptual scaling, and fuzzy concept lattices.

#include "fodm/config.hpp"
#include "fodm/dataset.hpp"
#include "fodm/dot.hpp"
#include "fodm/error.hpp"
#include "fodm/fcm.hpp"
#include "fodm/lattice.hpp"
#include "fodm/membership.hpp"
#include "fodm/ontology.hpp"
#include "fodm/owl.hpp"
#include "fodm/pipeline.hpp"
#include "fodm/query.hpp"
#include "fodm/scaling.hpp"
#include "fodm/util.hpp"

#pragma once

#include "paclab/bounds.hpp"
#include "paclab/cantor.hpp"
#include "paclab/concept.hpp"
#include "paclab/construction.hpp"
#include "paclab/error.hpp"
#include "paclab/expectation.hpp"
#include "paclab/interval_set.hpp"
#include "paclab/learner.hpp"
#include "paclab/measure.hpp"
#include "paclab/order_class.hpp"
#include "paclab/parallel.hpp"
#include "paclab/random.hpp"
#include "paclab/rational.hpp"
#include "paclab/sontag.hpp"
#include "paclab/version.hpp"

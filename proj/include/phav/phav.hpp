#pragma once

#include "phav/rng.hpp"
#include "phav/distributions.hpp"
#include "phav/goodness_of_fit.hpp"
#include "phav/domain.hpp"
#include "phav/skeleton.hpp"
#include "phav/motion.hpp"
#include "phav/default_library.hpp"
#include "phav/ragdoll.hpp"
#include "phav/variation.hpp"
#include "phav/kite_camera.hpp"
#include "phav/params.hpp"
#include "phav/scenario.hpp"
#include "phav/generator.hpp"
#include "phav/cooltsn.hpp"

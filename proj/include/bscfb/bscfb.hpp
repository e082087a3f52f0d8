#pragma once
// Umbrella header: the whole library.

#include "bscfb/channel.hpp"
#include "bscfb/channel_params.hpp"
#include "bscfb/codes.hpp"
#include "bscfb/errors.hpp"
#include "bscfb/exponents.hpp"
#include "bscfb/logsum.hpp"
#include "bscfb/montecarlo.hpp"
#include "bscfb/oracle.hpp"
#include "bscfb/rng.hpp"
#include "bscfb/rootfind.hpp"
#include "bscfb/schemes.hpp"

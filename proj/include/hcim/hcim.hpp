#pragma once

#include "hcim/graph.hpp"
#include "hcim/community.hpp"
#include "hcim/diffusion.hpp"
#include "hcim/scoring.hpp"
#include "hcim/seedsel.hpp"

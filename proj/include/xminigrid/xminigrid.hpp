// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "xminigrid/benchgen.hpp"
#include "xminigrid/benchio.hpp"
#include "xminigrid/core.hpp"
#include "xminigrid/env.hpp"
#include "xminigrid/errors.hpp"
#include "xminigrid/harness.hpp"
#include "xminigrid/layouts.hpp"
#include "xminigrid/observation.hpp"
#include "xminigrid/oracle.hpp"
#include "xminigrid/parallel.hpp"
#include "xminigrid/registry.hpp"
#include "xminigrid/render.hpp"
#include "xminigrid/rng.hpp"
#include "xminigrid/rules.hpp"

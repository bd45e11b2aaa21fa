#pragma once

#include "anneal_noise/annealing.hpp"
#include "anneal_noise/commands.hpp"
#include "anneal_noise/config.hpp"
#include "anneal_noise/error.hpp"
#include "anneal_noise/experiments.hpp"
#include "anneal_noise/network.hpp"
#include "anneal_noise/prng.hpp"
#include "anneal_noise/refine.hpp"
#include "anneal_noise/trace_io.hpp"

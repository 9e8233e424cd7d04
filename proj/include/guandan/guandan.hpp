#pragma once

// Umbrella header. http_backend.hpp is intentionally left out; include it
// where a live HTTP client is actually wired up.
#include "guandan/agents.hpp"
#include "guandan/cards.hpp"
#include "guandan/combos.hpp"
#include "guandan/engine.hpp"
#include "guandan/errors.hpp"
#include "guandan/harness.hpp"
#include "guandan/interpreter.hpp"
#include "guandan/log.hpp"
#include "guandan/observation.hpp"
#include "guandan/recommender.hpp"
#include "guandan/tom.hpp"

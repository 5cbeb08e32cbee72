#pragma once

#include "bdelta/distances.hpp"
#include "bdelta/domains.hpp"
#include "bdelta/harness.hpp"
#include "bdelta/linalg.hpp"
#include "bdelta/matrix.hpp"
#include "bdelta/rng.hpp"
#include "bdelta/schuragler.hpp"
#include "bdelta/tuples.hpp"

#pragma once
// Umbrella header for the library. The test-only reference implementations
// in ecoc/oracle.hpp are deliberately not pulled in here.

#include "ecoc/codes.hpp"
#include "ecoc/dataset.hpp"
#include "ecoc/decode.hpp"
#include "ecoc/eval.hpp"
#include "ecoc/learners.hpp"
#include "ecoc/linalg.hpp"
#include "ecoc/matrix.hpp"
#include "ecoc/rng.hpp"

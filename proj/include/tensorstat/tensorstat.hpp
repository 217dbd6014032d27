#pragma once

#include "tensorstat/distributions.hpp"
#include "tensorstat/error.hpp"
#include "tensorstat/io.hpp"
#include "tensorstat/linalg.hpp"
#include "tensorstat/random.hpp"
#include "tensorstat/shape.hpp"
#include "tensorstat/stats.hpp"
#include "tensorstat/tensor.hpp"
#include "tensorstat/verify.hpp"

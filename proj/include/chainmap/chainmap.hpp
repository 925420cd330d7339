#pragma once

#include "chainmap/chain.hpp"
#include "chainmap/eigen.hpp"
#include "chainmap/error.hpp"
#include "chainmap/gram_schmidt.hpp"
#include "chainmap/householder.hpp"
#include "chainmap/io.hpp"
#include "chainmap/lanczos.hpp"
#include "chainmap/matrix.hpp"
#include "chainmap/partition.hpp"
#include "chainmap/precision.hpp"
#include "chainmap/report.hpp"
#include "chainmap/spectral_density.hpp"

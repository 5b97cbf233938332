// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header.

#ifndef BIVAR_BIVAR_HPP
#define BIVAR_BIVAR_HPP

#include "bivar/series.hpp"
#include "bivar/fft.hpp"
#include "bivar/spectral.hpp"
#include "bivar/uni_moments.hpp"
#include "bivar/ellipse.hpp"
#include "bivar/joint_moments.hpp"
#include "bivar/wavelet.hpp"
#include "bivar/ridge.hpp"
#include "bivar/pipeline/record.hpp"
#include "bivar/pipeline/metrics.hpp"
#include "bivar/pipeline/decompose.hpp"
#include "bivar/pipeline/scenario.hpp"
#include "bivar/pipeline/svg.hpp"
#include "bivar/pipeline/report.hpp"

#endif // BIVAR_BIVAR_HPP

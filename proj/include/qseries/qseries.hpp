#pragma once

#include "qseries/types.hpp"
#include "qseries/errors.hpp"
#include "qseries/qcore.hpp"
#include "qseries/precision.hpp"
#include "qseries/hyperseries.hpp"
#include "qseries/askey_wilson.hpp"
#include "qseries/point.hpp"
#include "qseries/quadrature.hpp"
#include "qseries/summations.hpp"
#include "qseries/transforms.hpp"
#include "qseries/sampling.hpp"
#include "qseries/identities.hpp"
#include "qseries/report.hpp"
#include "qseries/harness.hpp"

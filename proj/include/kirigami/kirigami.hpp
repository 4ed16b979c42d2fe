#pragma once

#include "errors.hpp"
#include "sheet.hpp"
#include "boundary.hpp"
#include "catenary.hpp"
#include "ribbons.hpp"
#include "force.hpp"
#include "calibration.hpp"
#include "shape.hpp"
#include "design.hpp"
#include "config.hpp"

#pragma once

#include "numrange/boundary_geometry.hpp"
#include "numrange/complex_linalg.hpp"
#include "numrange/errors.hpp"
#include "numrange/io.hpp"
#include "numrange/joint_range.hpp"
#include "numrange/numerical_range.hpp"
#include "numrange/operator_gallery.hpp"
#include "numrange/reducing_spectrum.hpp"

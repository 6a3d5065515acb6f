#pragma once

// Fixed-point image integrity authentication: seal a grayscale image into a
// fixed point of a keyed convolution-deconvolution operator, then verify
// integrity and localize tampering by checking whether one application of the
// operator leaves the image unchanged.

#include <fpa/attacks.hpp>
#include <fpa/authenticate.hpp>
#include <fpa/dft.hpp>
#include <fpa/errors.hpp>
#include <fpa/filter.hpp>
#include <fpa/image_io.hpp>
#include <fpa/keys.hpp>
#include <fpa/plane.hpp>
#include <fpa/rng.hpp>
#include <fpa/rounding.hpp>
#include <fpa/transform.hpp>

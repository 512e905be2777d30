#pragma once

// Umbrella header: the whole verification and search workbench for
// convolution near-extremizers on discrete groups.

#include "yconv/errors.hpp"
#include "yconv/fourier.hpp"
#include "yconv/group.hpp"
#include "yconv/io.hpp"
#include "yconv/layers.hpp"
#include "yconv/search.hpp"
#include "yconv/sparse.hpp"
#include "yconv/stability.hpp"
#include "yconv/young.hpp"

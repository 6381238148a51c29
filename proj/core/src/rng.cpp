#include "qkdlab/rng.hpp"

// Header-only; this TU anchors the target.

#pragma once

#include "mnulink/common.hpp"

namespace mnulink::fft {

/// Unnormalized forward DFT: out(k) = sum_m in(m) e^{-j2pi mk/M}.
cvec forward(const cvec& in);

/// Unnormalized backward DFT: out(m) = sum_k in(k) e^{+j2pi km/M}.
cvec backward(const cvec& in);

/// Scaled inverse: backward / M.
cvec inverse(const cvec& in);

}  // namespace mnulink::fft

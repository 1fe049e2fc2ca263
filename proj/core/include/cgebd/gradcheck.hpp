#pragma once

#include <functional>
#include <string>

#include "cgebd/params.hpp"

namespace cgebd {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::string worst_param;
    size_t worst_index = 0;
    size_t elements_checked = 0;

    bool pass(double tolerance) const { return max_rel_err < tolerance; }
    std::string summary() const;
};

// Compares the analytic gradient of every parameter element against a central
// finite difference of the loss. `loss(bool with_grads)` evaluates the model
// at the current parameter values; when with_grads is true it must also leave
// dL/dθ in the ParamSet gradient buffers. Relative error per element is
// |a - n| / max(1, |a|, |n|). Throws NumericError on a non-finite loss.
GradCheckReport gradient_check(const std::function<double(bool with_grads)>& loss, ParamSet& params,
                               double fd_step = 1e-6);

}  // namespace cgebd

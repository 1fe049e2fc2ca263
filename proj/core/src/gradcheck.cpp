#include "cgebd/gradcheck.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "cgebd/errors.hpp"

namespace cgebd {

std::string GradCheckReport::summary() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "checked %zu element(s), max rel err %.3e at %s[%zu]",
                  elements_checked, max_rel_err, worst_param.empty() ? "-" : worst_param.c_str(),
                  worst_index);
    return buf;
}

GradCheckReport gradient_check(const std::function<double(bool)>& loss, ParamSet& params, double fd_step) {
    params.zero_grads();
    const double base = loss(true);
    if (!std::isfinite(base)) throw NumericError("gradient_check: non-finite loss");

    // Snapshot the analytic gradients before the probes overwrite anything.
    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.entries().size());
    for (const auto& e : params.entries()) analytic.push_back(e.grad.vec());

    GradCheckReport report;
    for (size_t pi = 0; pi < params.entries().size(); ++pi) {
        auto& entry = params.entries()[pi];
        for (size_t i = 0; i < entry.value.size(); ++i) {
            const double saved = entry.value[i];
            entry.value[i] = saved + fd_step;
            const double up = loss(false);
            entry.value[i] = saved - fd_step;
            const double down = loss(false);
            entry.value[i] = saved;
            if (!std::isfinite(up) || !std::isfinite(down))
                throw NumericError("gradient_check: non-finite loss during probing of " + entry.name);

            const double numeric = (up - down) / (2.0 * fd_step);
            const double a = analytic[pi][i];
            const double rel = std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
            ++report.elements_checked;
            if (rel > report.max_rel_err) {
                report.max_rel_err = rel;
                report.worst_param = entry.name;
                report.worst_index = i;
            }
        }
    }
    return report;
}

}  // namespace cgebd

#include "footfall/signal.hpp"

#include <cmath>
#include <string>

namespace footfall {

void validate(const Signal& sig) {
    if (sig.sample_rate_hz <= 0.0)
        throw ConfigError("sample rate must be positive, got " + std::to_string(sig.sample_rate_hz));
    if (sig.samples.empty())
        throw DegenerateInputError("signal is empty");
    for (std::size_t i = 0; i < sig.samples.size(); ++i) {
        if (!std::isfinite(sig.samples[i]))
            throw NumericError("non-finite sample at index " + std::to_string(i));
    }
}

std::vector<double> normalize_amplitude(std::span<const double> samples) {
    double peak = 0.0;
    for (double v : samples) peak = std::max(peak, std::fabs(v));
    if (peak == 0.0)
        throw DegenerateInputError("cannot normalize an all-zero signal");
    std::vector<double> out(samples.begin(), samples.end());
    const double inv = 1.0 / peak;
    for (double& v : out) v *= inv;
    return out;
}

Signal normalize_amplitude(const Signal& sig) {
    return Signal{normalize_amplitude(std::span<const double>(sig.samples)), sig.sample_rate_hz};
}

} // namespace footfall
